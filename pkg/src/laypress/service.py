"""Human-evaluation backbone: assignment plans, an append-only journal
store, PoH and per-question figure data, report export, and the HTTP API
consumed by the annotation client.

Served task payloads are blinded: they never contain method, variant, or
model identifiers.  The journal file is the single source of truth; the
in-memory index is rebuilt from it on start.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
import random
import re
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import judges
from .errors import (
    AlreadyDone,
    BadToken,
    EmptyList,
    IncompletePanel,
    IndivisiblePlan,
    NoAnnotators,
    NoReviews,
    NothingToReport,
    UnknownTask,
)
from .judges import H2HInstance, JudgeVerdict, Ordering

LAY_QUESTIONS = (
    "What problem is the article tackling?",
    "How did the authors tackle the problem?",
    "What are the key findings of the article?",
    "Why are these findings significant?",
)
REVIEW_LABELS = (
    "Completely agree",
    "Somewhat agree",
    "Somewhat disagree",
    "Completely disagree",
)


@dataclass(frozen=True)
class Annotator:
    id: str
    display_token: str
    role: str  # "lay" | "expert"
    group: int | None = None

    def __post_init__(self):
        if self.role not in ("lay", "expert"):
            raise ValueError(f"unknown annotator role {self.role!r}")


@dataclass
class PreferenceTask:
    task_id: str
    annotator_id: str
    instance: H2HInstance
    vote: int | None = None
    submitted_at: str | None = None

    @property
    def done(self) -> bool:
        return self.vote is not None


@dataclass
class QAAnswerTask:
    task_id: str
    annotator_id: str
    article_id: str
    variant: str
    summary: str = ""
    answers: dict[int, str] | None = None
    submitted_at: str | None = None

    @property
    def done(self) -> bool:
        return self.answers is not None


@dataclass
class ExpertReviewTask:
    task_id: str
    expert_id: str
    qa_task_ref: str
    labels: dict[int, str] | None = None
    submitted_at: str | None = None

    @property
    def done(self) -> bool:
        return self.labels is not None


@dataclass(frozen=True)
class AssignmentPlan:
    seed: int
    preference: tuple[PreferenceTask, ...] = ()
    qa: tuple[QAAnswerTask, ...] = ()


def _require_lay(annotators: list[Annotator]) -> None:
    experts = [a.id for a in annotators if a.role != "lay"]
    if experts:
        raise ValueError(f"preference and QA tasks are for lay annotators, got {experts}")


def make_preference_assignments(
    instances: list[H2HInstance], annotators: list[Annotator], seed: int
) -> AssignmentPlan:
    """Full panel: every lay annotator judges every instance."""
    if not annotators:
        raise NoAnnotators("preference plan needs at least one annotator")
    if not instances:
        raise EmptyList("preference plan needs at least one instance")
    _require_lay(annotators)
    tasks = []
    for annotator in annotators:
        order = list(instances)
        random.Random(f"{seed}:{annotator.id}").shuffle(order)
        for inst in order:
            tasks.append(
                PreferenceTask(
                    task_id=f"pref-{annotator.id}-{inst.instance_id}",
                    annotator_id=annotator.id,
                    instance=inst,
                )
            )
    return AssignmentPlan(seed=seed, preference=tuple(tasks))


def make_qa_assignments(
    article_ids: list[str],
    variants: tuple[str, str],
    annotators: list[Annotator],
    seed: int,
) -> AssignmentPlan:
    """Group scheme: annotator pairs split the articles, and within a pair
    each article's two variants go to different members, balanced so each
    member holds an equal (+-1) count of each variant."""
    if len(annotators) < 2 or len(annotators) % 2 != 0:
        raise IndivisiblePlan("QA plan needs an even number of annotators")
    _require_lay(annotators)
    groups = len(annotators) // 2
    if not article_ids or len(article_ids) % groups != 0:
        raise IndivisiblePlan(
            f"{len(article_ids)} articles cannot be split across {groups} groups"
        )
    ordered = list(article_ids)
    random.Random(seed).shuffle(ordered)
    per_group = len(ordered) // groups
    tasks = []
    for g in range(groups):
        members = annotators[2 * g : 2 * g + 2]
        chunk = ordered[g * per_group : (g + 1) * per_group]
        for idx, article_id in enumerate(chunk):
            first, second = variants if idx % 2 == 0 else (variants[1], variants[0])
            for member, variant in zip(members, (first, second)):
                tasks.append(
                    QAAnswerTask(
                        task_id=f"qa-{member.id}-{article_id}",
                        annotator_id=member.id,
                        article_id=article_id,
                        variant=variant,
                    )
                )
    return AssignmentPlan(seed=seed, qa=tuple(tasks))


def figure_data(
    reviews: list[ExpertReviewTask],
    variant_of: dict[str, str],
    variants: tuple[str, ...],
) -> dict[tuple[str, int, str], float]:
    """Proportion of votes per (variant, question, label); each
    (variant, question) cell distribution sums to one."""
    done = [r for r in reviews if r.done]
    if not done:
        raise NoReviews("no completed expert reviews")
    counts: dict[tuple[str, int, str], int] = {}
    totals: dict[tuple[str, int], int] = {}
    for review in done:
        variant = variant_of[review.qa_task_ref]
        for ordinal, label in review.labels.items():
            counts[(variant, ordinal, label)] = counts.get((variant, ordinal, label), 0) + 1
            totals[(variant, ordinal)] = totals.get((variant, ordinal), 0) + 1
    return {
        (variant, ordinal, label): 0.0
        if totals.get((variant, ordinal), 0) == 0
        else counts.get((variant, ordinal, label), 0) / totals[(variant, ordinal)]
        for variant in variants
        for ordinal in range(1, 5)
        for label in REVIEW_LABELS
    }


class EvalStore:
    """Append-only journal plus in-memory index.

    Every mutation is one journalled event; restart replays the journal.
    All writes pass through a single lock.
    """

    def __init__(self, journal_path: str | Path, admin_token: str = "admin"):
        self.journal_path = Path(journal_path)
        self.admin_token = admin_token
        self._lock = threading.RLock()
        self.annotators: dict[str, Annotator] = {}
        self._by_token: dict[str, str] = {}
        self.preference_tasks: dict[str, PreferenceTask] = {}
        self.qa_tasks: dict[str, QAAnswerTask] = {}
        self.review_tasks: dict[str, ExpertReviewTask] = {}
        self._task_order: list[str] = []
        if self.journal_path.exists():
            with open(self.journal_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        self._apply(json.loads(line))

    # -- journal ---------------------------------------------------------

    def _append(self, event: dict) -> None:
        self._apply(event)
        with open(self.journal_path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(event, ensure_ascii=False) + "\n")
            fh.flush()

    def _apply(self, event: dict) -> None:
        kind = event["event"]
        if kind == "annotator":
            annotator = Annotator(
                id=event["id"],
                display_token=event["token"],
                role=event["role"],
                group=event.get("group"),
            )
            self.annotators[annotator.id] = annotator
            self._by_token[annotator.display_token] = annotator.id
        elif kind == "preference_task":
            inst = event["instance"]
            task = PreferenceTask(
                task_id=event["task_id"],
                annotator_id=event["annotator_id"],
                instance=H2HInstance(
                    instance_id=inst["instance_id"],
                    article_id=inst["article_id"],
                    method_a=inst["method_a"],
                    method_b=inst["method_b"],
                    summary_a=inst["summary_a"],
                    summary_b=inst["summary_b"],
                    ordering=Ordering(inst["ordering"]),
                ),
            )
            self.preference_tasks[task.task_id] = task
            self._task_order.append(task.task_id)
        elif kind == "qa_task":
            task = QAAnswerTask(
                task_id=event["task_id"],
                annotator_id=event["annotator_id"],
                article_id=event["article_id"],
                variant=event["variant"],
                summary=event["summary"],
            )
            self.qa_tasks[task.task_id] = task
            self._task_order.append(task.task_id)
        elif kind == "review_task":
            task = ExpertReviewTask(
                task_id=event["task_id"],
                expert_id=event["expert_id"],
                qa_task_ref=event["qa_task_ref"],
            )
            self.review_tasks[task.task_id] = task
            self._task_order.append(task.task_id)
        elif kind == "preference_vote":
            task = self.preference_tasks[event["task_id"]]
            task.vote = event["vote"]
            task.submitted_at = event["submitted_at"]
        elif kind == "qa_answers":
            task = self.qa_tasks[event["task_id"]]
            task.answers = {int(k): v for k, v in event["answers"].items()}
            task.submitted_at = event["submitted_at"]
        elif kind == "review_labels":
            task = self.review_tasks[event["task_id"]]
            task.labels = {int(k): v for k, v in event["labels"].items()}
            task.submitted_at = event["submitted_at"]
        else:
            raise ValueError(f"unknown journal event {kind!r}")

    # -- registration ------------------------------------------------------

    def add_annotator(self, annotator: Annotator) -> None:
        with self._lock:
            if annotator.display_token in self._by_token:
                raise ValueError(f"token for {annotator.id!r} already registered")
            self._append(
                {
                    "event": "annotator",
                    "id": annotator.id,
                    "token": annotator.display_token,
                    "role": annotator.role,
                    "group": annotator.group,
                }
            )

    def add_preference_plan(self, plan: AssignmentPlan) -> None:
        with self._lock:
            for task in plan.preference:
                inst = task.instance
                self._append(
                    {
                        "event": "preference_task",
                        "task_id": task.task_id,
                        "annotator_id": task.annotator_id,
                        "instance": {
                            "instance_id": inst.instance_id,
                            "article_id": inst.article_id,
                            "method_a": inst.method_a,
                            "method_b": inst.method_b,
                            "summary_a": inst.summary_a,
                            "summary_b": inst.summary_b,
                            "ordering": inst.ordering.value,
                        },
                    }
                )

    def add_qa_plan(self, plan: AssignmentPlan, summaries: dict[tuple[str, str], str]) -> None:
        """Attach summary texts, keyed by (article_id, variant)."""
        with self._lock:
            for task in plan.qa:
                self._append(
                    {
                        "event": "qa_task",
                        "task_id": task.task_id,
                        "annotator_id": task.annotator_id,
                        "article_id": task.article_id,
                        "variant": task.variant,
                        "summary": summaries[(task.article_id, task.variant)],
                    }
                )

    def add_review_plan(self, experts: list[Annotator], qa_task_ids: list[str] | None = None) -> None:
        """Every expert reviews every (completed or pending) QA task."""
        lay_ids = [a.id for a in experts if a.role != "expert"]
        if lay_ids:
            raise ValueError(f"review tasks are for experts, got {lay_ids}")
        with self._lock:
            ids = qa_task_ids if qa_task_ids is not None else list(self.qa_tasks)
            for expert in experts:
                for qa_id in ids:
                    if qa_id not in self.qa_tasks:
                        raise UnknownTask(f"QA task {qa_id!r} not registered")
                    self._append(
                        {
                            "event": "review_task",
                            "task_id": f"rev-{expert.id}-{qa_id}",
                            "expert_id": expert.id,
                            "qa_task_ref": qa_id,
                        }
                    )

    # -- lookup ------------------------------------------------------------

    def _annotator_for(self, token: str) -> Annotator:
        annotator_id = self._by_token.get(token)
        if annotator_id is None:
            raise BadToken("unknown annotator token")
        return self.annotators[annotator_id]

    def _owned_task(self, token: str, task_id: str):
        annotator = self._annotator_for(token)
        task = (
            self.preference_tasks.get(task_id)
            or self.qa_tasks.get(task_id)
            or self.review_tasks.get(task_id)
        )
        if task is None:
            raise UnknownTask(f"no task {task_id!r}")
        owner = getattr(task, "annotator_id", None) or getattr(task, "expert_id")
        if owner != annotator.id:
            raise BadToken("task belongs to a different annotator")
        return task

    def tasks_for(self, annotator_id: str) -> list:
        out = []
        for task_id in self._task_order:
            task = (
                self.preference_tasks.get(task_id)
                or self.qa_tasks.get(task_id)
                or self.review_tasks.get(task_id)
            )
            owner = getattr(task, "annotator_id", None) or getattr(task, "expert_id")
            if owner == annotator_id:
                out.append(task)
        return out

    def next_task(self, token: str):
        annotator = self._annotator_for(token)
        for task in self.tasks_for(annotator.id):
            if not task.done:
                return task
        return None

    def progress(self, token: str) -> dict:
        annotator = self._annotator_for(token)
        tasks = self.tasks_for(annotator.id)
        return {"done": sum(task.done for task in tasks), "total": len(tasks)}

    # -- blinded payloads --------------------------------------------------

    def payload(self, task) -> dict:
        if isinstance(task, PreferenceTask):
            inst = task.instance
            first, second = (
                (inst.summary_a, inst.summary_b)
                if inst.ordering is Ordering.A_FIRST
                else (inst.summary_b, inst.summary_a)
            )
            body = {
                "task_id": task.task_id,
                "kind": "preference",
                "status": "done" if task.done else "open",
                "summary_1": first,
                "summary_2": second,
            }
            if task.done:
                body["vote"] = task.vote
            return body
        if isinstance(task, QAAnswerTask):
            body = {
                "task_id": task.task_id,
                "kind": "qa",
                "status": "done" if task.done else "open",
                "article_id": task.article_id,
                "summary": task.summary,
                "questions": list(LAY_QUESTIONS),
            }
            if task.done:
                body["answers"] = {str(k): v for k, v in task.answers.items()}
            return body
        if isinstance(task, ExpertReviewTask):
            qa = self.qa_tasks[task.qa_task_ref]
            body = {
                "task_id": task.task_id,
                "kind": "review",
                "status": "done" if task.done else "open",
                "article_id": qa.article_id,
                "label_options": list(REVIEW_LABELS),
                "items": [
                    {
                        "question": LAY_QUESTIONS[i - 1],
                        "answer": (qa.answers or {}).get(i, ""),
                    }
                    for i in range(1, 5)
                ],
            }
            if task.done:
                body["labels"] = {str(k): v for k, v in task.labels.items()}
            return body
        raise TypeError(f"no payload for {type(task).__name__}")

    def task_payload(self, token: str, task_id: str) -> dict:
        return self.payload(self._owned_task(token, task_id))

    # -- submissions ---------------------------------------------------------

    @staticmethod
    def _now() -> str:
        return _dt.datetime.now(_dt.timezone.utc).isoformat()

    def submit_preference(self, token: str, task_id: str, vote: int) -> dict:
        with self._lock:
            task = self._owned_task(token, task_id)
            if not isinstance(task, PreferenceTask):
                raise UnknownTask(f"{task_id!r} is not a preference task")
            if task.done:
                raise AlreadyDone(f"task {task_id!r} already submitted")
            if vote not in (1, 2):
                raise ValueError("vote must be 1 or 2")
            self._append(
                {
                    "event": "preference_vote",
                    "task_id": task_id,
                    "vote": vote,
                    "submitted_at": self._now(),
                }
            )
            return {"ok": True, "task_id": task_id}

    def submit_qa(self, token: str, task_id: str, answers: dict) -> dict:
        with self._lock:
            task = self._owned_task(token, task_id)
            if not isinstance(task, QAAnswerTask):
                raise UnknownTask(f"{task_id!r} is not a QA task")
            if task.done:
                raise AlreadyDone(f"task {task_id!r} already submitted")
            normalized = {int(k): str(v).strip() for k, v in answers.items()}
            if sorted(normalized) != [1, 2, 3, 4] or any(not v for v in normalized.values()):
                raise ValueError("answers must cover questions 1-4 and be non-empty")
            self._append(
                {
                    "event": "qa_answers",
                    "task_id": task_id,
                    "answers": {str(k): v for k, v in normalized.items()},
                    "submitted_at": self._now(),
                }
            )
            return {"ok": True, "task_id": task_id}

    def submit_review(self, token: str, task_id: str, labels: dict) -> dict:
        with self._lock:
            task = self._owned_task(token, task_id)
            if not isinstance(task, ExpertReviewTask):
                raise UnknownTask(f"{task_id!r} is not a review task")
            if task.done:
                raise AlreadyDone(f"task {task_id!r} already submitted")
            normalized = {int(k): str(v) for k, v in labels.items()}
            if sorted(normalized) != [1, 2, 3, 4]:
                raise ValueError("labels must cover questions 1-4")
            bad = [v for v in normalized.values() if v not in REVIEW_LABELS]
            if bad:
                raise ValueError(f"unknown label {bad[0]!r}")
            self._append(
                {
                    "event": "review_labels",
                    "task_id": task_id,
                    "labels": {str(k): v for k, v in normalized.items()},
                    "submitted_at": self._now(),
                }
            )
            return {"ok": True, "task_id": task_id}

    # -- aggregation ---------------------------------------------------------

    def compute_poh(
        self,
        agreement_scores: dict[str, float] | None = None,
        partial: bool = False,
    ) -> dict[str, float]:
        """Unblind votes, majority-aggregate with the judge-panel rules."""
        tasks = list(self.preference_tasks.values())
        if not tasks:
            raise EmptyList("no preference tasks")
        open_tasks = [t.task_id for t in tasks if not t.done]
        if open_tasks and not partial:
            raise IncompletePanel(f"{len(open_tasks)} preference tasks still open")
        done = [t for t in tasks if t.done]
        verdicts = [
            JudgeVerdict(judge_id=t.annotator_id, instance_id=t.instance.instance_id, choice=t.vote)
            for t in done
        ]
        if not verdicts:
            raise IncompletePanel("no submitted votes")
        instances = {}
        for t in done:
            instances.setdefault(t.instance.instance_id, t.instance)
        scores = (
            agreement_scores
            if agreement_scores is not None
            else judges.judge_agreement_scores(verdicts)
        )
        by_instance: dict[str, list[JudgeVerdict]] = {}
        for v in verdicts:
            by_instance.setdefault(v.instance_id, []).append(v)
        per_instance = {
            inst_id: judges.unblind(
                instances[inst_id], judges.aggregate_majority(votes, scores)
            )
            for inst_id, votes in by_instance.items()
        }
        first = next(iter(instances.values()))
        return judges.compute_poll(per_instance, (first.method_a, first.method_b))

    def figure_data(self, variants: tuple[str, ...]) -> dict[tuple[str, int, str], float]:
        variant_of = {qa.task_id: qa.variant for qa in self.qa_tasks.values()}
        return figure_data(list(self.review_tasks.values()), variant_of, variants)


# -- report export ----------------------------------------------------------

METRIC_COLUMNS = ("rouge1", "rouge2", "rouge_lsum", "fkgl", "dcrs")
REPORT_COLUMNS = ("model", "variant", "n", *METRIC_COLUMNS, "poll", "poh")


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def export_report(
    out_dir: str | Path,
    summary_rows: list[dict],
    figure_rows: dict[tuple[str, int, str], float] | None = None,
) -> list[Path]:
    """Emit report.csv, report.md and optionally figure_data.csv."""
    if not summary_rows and not figure_rows:
        raise NothingToReport("nothing to report")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    if summary_rows:
        csv_path = out_dir / "report.csv"
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(REPORT_COLUMNS)
            for row in summary_rows:
                writer.writerow([_format_cell(row.get(col)) for col in REPORT_COLUMNS])
        written.append(csv_path)

        md_path = out_dir / "report.md"
        with open(md_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("| " + " | ".join(REPORT_COLUMNS) + " |\n")
            fh.write("|" + "---|" * len(REPORT_COLUMNS) + "\n")
            for row in summary_rows:
                fh.write(
                    "| "
                    + " | ".join(_format_cell(row.get(col)) for col in REPORT_COLUMNS)
                    + " |\n"
                )
        written.append(md_path)

    if figure_rows:
        fig_path = out_dir / "figure_data.csv"
        with open(fig_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["variant", "question", "label", "proportion"])
            for (variant, ordinal, label), proportion in sorted(figure_rows.items()):
                writer.writerow([variant, ordinal, label, f"{proportion:.6g}"])
        written.append(fig_path)
    return written


# -- HTTP API -----------------------------------------------------------------

_TASK_PATH_RE = re.compile(r"^/api/tasks/([^/]+)(?:/(preference|qa_answers|review))?$")


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def store(self) -> EvalStore:
        return self.server.store

    def log_message(self, *args):  # silence default stderr chatter
        pass

    def _send_json(self, status: int, body: dict) -> None:
        data = json.dumps(body, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _error(self, exc: Exception) -> None:
        status = 400
        if isinstance(exc, BadToken):
            status = 401
        elif isinstance(exc, UnknownTask):
            status = 404
        elif isinstance(exc, AlreadyDone):
            status = 409
        self._send_json(status, {"error": str(exc)})

    def _token(self, query: dict) -> str:
        values = query.get("token")
        if not values:
            raise BadToken("missing token")
        return values[0]

    def do_GET(self):
        parsed = urlparse(self.path)
        query = parse_qs(parsed.query)
        try:
            if parsed.path == "/api/tasks/next":
                task = self.store.next_task(self._token(query))
                self._send_json(200, {"task": None if task is None else self.store.payload(task)})
                return
            match = _TASK_PATH_RE.match(parsed.path)
            if match and match.group(2) is None:
                payload = self.store.task_payload(self._token(query), match.group(1))
                self._send_json(200, {"task": payload})
                return
            if parsed.path == "/api/progress":
                self._send_json(200, self.store.progress(self._token(query)))
                return
            if parsed.path == "/api/admin/report":
                if self._token(query) != self.store.admin_token:
                    raise BadToken("admin token required")
                self._send_json(200, self._admin_report())
                return
            self._serve_static(parsed.path)
        except Exception as exc:  # noqa: BLE001 - boundary maps errors to codes
            self._error(exc)

    def do_POST(self):
        parsed = urlparse(self.path)
        query = parse_qs(parsed.query)
        match = _TASK_PATH_RE.match(parsed.path)
        try:
            if not match or match.group(2) is None:
                raise UnknownTask(f"no POST endpoint {parsed.path!r}")
            length = int(self.headers.get("Content-Length") or 0)
            body = json.loads(self.rfile.read(length) or b"{}")
            token = self._token(query)
            task_id, action = match.group(1), match.group(2)
            if action == "preference":
                result = self.store.submit_preference(token, task_id, body.get("vote"))
            elif action == "qa_answers":
                result = self.store.submit_qa(token, task_id, body.get("answers") or {})
            else:
                result = self.store.submit_review(token, task_id, body.get("labels") or {})
            self._send_json(200, result)
        except Exception as exc:  # noqa: BLE001
            self._error(exc)

    def _admin_report(self) -> dict:
        report: dict = {"progress": {}}
        for annotator in self.store.annotators.values():
            tasks = self.store.tasks_for(annotator.id)
            report["progress"][annotator.id] = {
                "done": sum(t.done for t in tasks),
                "total": len(tasks),
            }
        try:
            report["poh"] = self.store.compute_poh()
        except Exception:
            report["poh"] = None
        return report

    def _serve_static(self, path: str) -> None:
        static_dir = getattr(self.server, "static_dir", None)
        if static_dir is None:
            raise UnknownTask("static hosting is not configured")
        name = "index.html" if path in ("", "/") else path.lstrip("/")
        target = (Path(static_dir) / name).resolve()
        if not str(target).startswith(str(Path(static_dir).resolve())) or not target.is_file():
            raise UnknownTask(f"no static file {path!r}")
        data = target.read_bytes()
        content_type = {
            ".html": "text/html; charset=utf-8",
            ".js": "text/javascript; charset=utf-8",
            ".css": "text/css; charset=utf-8",
            ".json": "application/json; charset=utf-8",
        }.get(target.suffix, "application/octet-stream")
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


def create_server(
    store: EvalStore,
    host: str = "127.0.0.1",
    port: int = 0,
    static_dir: str | Path | None = None,
) -> ThreadingHTTPServer:
    """Build (but do not start) the annotation HTTP server."""
    server = ThreadingHTTPServer((host, port), _Handler)
    server.store = store
    server.static_dir = static_dir
    return server
