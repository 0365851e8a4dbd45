"""The human-annotation service end to end, in-process.

Registers annotators, plans blinded preference tasks, serves them over
HTTP, submits votes, and aggregates PoH.

Run:  python3 demos/06_annotation_service.py
"""

import json
import threading
import urllib.request

from laypress import judges, service
from laypress.judges import H2HInstance
from laypress.service import Annotator, EvalStore, make_preference_assignments
import tempfile, pathlib

workdir = pathlib.Path(tempfile.mkdtemp())
store = EvalStore(workdir / "journal.jsonl", admin_token="demo-admin")

annotators = [Annotator(id=f"lay{k}", display_token=f"token{k}", role="lay") for k in range(3)]
for a in annotators:
    store.add_annotator(a)

ids = ["inst0", "inst1"]
orderings = judges.plan_orderings(ids, seed=7)
instances = [
    H2HInstance(
        instance_id=i,
        article_id=f"art{k}",
        method_a="two_stage",
        method_b="baseline",
        summary_a=f"Two-stage summary {k}.",
        summary_b=f"Baseline summary {k}.",
        ordering=orderings[i],
    )
    for k, i in enumerate(ids)
]
store.add_preference_plan(make_preference_assignments(instances, annotators, seed=7))

server = service.create_server(store, port=0)
threading.Thread(target=server.serve_forever, daemon=True).start()
base = f"http://127.0.0.1:{server.server_address[1]}"

def get(path):
    with urllib.request.urlopen(base + path) as resp:
        return json.loads(resp.read())

def post(path, body):
    req = urllib.request.Request(
        base + path, data=json.dumps(body).encode(), headers={"Content-Type": "application/json"}
    )
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())

# each annotator works through their queue; note the payload shows only
# "summary_1"/"summary_2", never which method produced which text
for a in annotators:
    while True:
        task = get(f"/api/tasks/next?token={a.display_token}")["task"]
        if task is None:
            break
        print(f"{a.id} sees task {task['task_id']}: 1={task['summary_1']!r}")
        post(f"/api/tasks/{task['task_id']}/preference?token={a.display_token}", {"vote": 1})

print("PoH:", store.compute_poh())
server.shutdown()
