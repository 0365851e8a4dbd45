"""Blinded head-to-head judging with a panel of scripted judges.

Run:  python3 demos/04_judge_panel.py
"""

from laypress import judges
from laypress.gateway import Gateway, ScriptedBackend
from laypress.judges import H2HInstance, Ordering

ids = [f"inst{k}" for k in range(6)]
orderings = judges.plan_orderings(ids, seed=42)
print("ordering plan:", {i: o.value for i, o in orderings.items()})

instances = [
    H2HInstance(
        instance_id=i,
        article_id=f"art{k}",
        method_a="two_stage",
        method_b="baseline",
        summary_a=f"A clear two-part summary of article {k}.",
        summary_b=f"A generic summary of article {k}.",
        ordering=orderings[i],
    )
    for k, i in enumerate(ids)
]

# These judges always prefer whatever sits in slot 1, so the ordering plan
# fully determines the outcome; real judges would read the summaries.
panel = judges.run_panel(instances, ["judge-a", "judge-b", "judge-c"], Gateway(ScriptedBackend(default="1")))
print("per-instance winners:", panel.per_instance)
print("PoLL:", panel.poll)
