"""Blinded head-to-head preference protocol for panels of judges.

Orderings are balanced 50/50 under a seed, prompts hide method identity
behind "Summary 1/2", verdicts are parsed and unblinded, and majority
aggregation breaks even-panel ties with the highest-agreement judge.
"""

from __future__ import annotations

import csv
import json
import random
import re
from dataclasses import dataclass
from enum import Enum

from .errors import (
    AmbiguousVerdict,
    EmptyList,
    EmptyResults,
    NoVerdict,
    NoVerdicts,
    UnresolvableTie,
)
from .gateway import ChatMessage, CompletionRequest, Gateway, user_message
from .pipeline import _template

VERDICT_RETRY_SUFFIX = "Answer with only 1 or 2."


class Ordering(str, Enum):
    A_FIRST = "A_first"
    B_FIRST = "B_first"


@dataclass(frozen=True)
class H2HInstance:
    instance_id: str
    article_id: str
    method_a: str
    method_b: str
    summary_a: str
    summary_b: str
    ordering: Ordering

    def __post_init__(self):
        if self.method_a == self.method_b:
            raise ValueError("h2h methods must differ")
        if not self.summary_a or not self.summary_b:
            raise ValueError("h2h summaries must be non-empty")


@dataclass(frozen=True)
class JudgeVerdict:
    judge_id: str
    instance_id: str
    choice: int
    rationale: str = ""

    def __post_init__(self):
        if self.choice not in (1, 2):
            raise ValueError("choice must be 1 or 2")


@dataclass(frozen=True)
class PanelResult:
    per_instance: dict[str, str]
    poll: dict[str, float]
    votes: tuple[JudgeVerdict, ...]


def plan_orderings(instance_ids: list[str], seed: int) -> dict[str, Ordering]:
    """Assign orderings so each appears exactly half the time (+-1 when odd)."""
    if not instance_ids:
        raise EmptyList("cannot plan orderings for zero instances")
    n = len(instance_ids)
    orderings = [Ordering.A_FIRST] * ((n + 1) // 2) + [Ordering.B_FIRST] * (n // 2)
    random.Random(seed).shuffle(orderings)
    return dict(zip(instance_ids, orderings))


def build_judge_prompt(inst: H2HInstance) -> list[ChatMessage]:
    """Verbatim preference prompt with summaries in blinded order."""
    first, second = (
        (inst.summary_a, inst.summary_b)
        if inst.ordering is Ordering.A_FIRST
        else (inst.summary_b, inst.summary_a)
    )
    content = _template("judge.txt").replace("{summary1}", first).replace("{summary2}", second)
    return [user_message(content)]


_LEADING_RE = re.compile(r"^\s*([12])(?![\d])")
_SUMMARY_RE = re.compile(r"summary\s*([12])\b", re.IGNORECASE)
_STANDALONE_RE = re.compile(r"(?<![\w.])([12])(?![\w.])")


def parse_verdict(response: str) -> int:
    """Extract the chosen summary number from a free-form judge response."""
    if not response.strip():
        raise NoVerdict("empty judge response")
    m = _LEADING_RE.match(response)
    if m:
        return int(m.group(1))
    mentioned = {int(m.group(1)) for m in _SUMMARY_RE.finditer(response)}
    if len(mentioned) == 1:
        return mentioned.pop()
    if len(mentioned) == 2:
        raise AmbiguousVerdict("response names both summaries")
    m = _STANDALONE_RE.search(response)
    if m:
        return int(m.group(1))
    raise NoVerdict("no summary number found in response")


def unblind(inst: H2HInstance, choice: int) -> str:
    """Map a blinded 1/2 choice back to the method behind that slot."""
    if choice not in (1, 2):
        raise ValueError("choice must be 1 or 2")
    if inst.ordering is Ordering.A_FIRST:
        return inst.method_a if choice == 1 else inst.method_b
    return inst.method_b if choice == 1 else inst.method_a


def aggregate_majority(
    verdicts: list[JudgeVerdict],
    agreement_scores: dict[str, float] | None = None,
) -> int:
    """Majority choice; ties go to the highest-agreement judge's vote."""
    if not verdicts:
        raise NoVerdicts("no verdicts to aggregate")
    ones = sum(1 for v in verdicts if v.choice == 1)
    twos = len(verdicts) - ones
    if ones != twos:
        return 1 if ones > twos else 2
    if not agreement_scores:
        raise UnresolvableTie("tied panel and no agreement scores")
    scored = [(agreement_scores.get(v.judge_id), v) for v in verdicts]
    if any(score is None for score, _ in scored):
        missing = [v.judge_id for score, v in scored if score is None]
        raise UnresolvableTie(f"no agreement score for judges {missing}")
    top = max(score for score, _ in scored)
    top_choices = {v.choice for score, v in scored if score == top}
    if len(top_choices) != 1:
        raise UnresolvableTie("highest-agreement judges disagree")
    return top_choices.pop()


def compute_poll(per_instance: dict[str, str], methods: tuple[str, str]) -> dict[str, float]:
    """Proportion of instances won by each method."""
    if not per_instance:
        raise EmptyResults("no judged instances")
    total = len(per_instance)
    wins = {methods[0]: 0, methods[1]: 0}
    for winner in per_instance.values():
        if winner not in wins:
            raise ValueError(f"winner {winner!r} is not one of the compared methods")
        wins[winner] += 1
    return {method: count / total for method, count in wins.items()}


def judge_agreement_scores(verdicts: list[JudgeVerdict]) -> dict[str, float]:
    """Mean pairwise percent agreement of each judge with all others.

    Agreement is computed over instances both judges voted on; judges with
    no comparable instances score 0.
    """
    by_judge: dict[str, dict[str, int]] = {}
    for v in verdicts:
        by_judge.setdefault(v.judge_id, {})[v.instance_id] = v.choice
    scores = {}
    for judge, own in by_judge.items():
        rates = []
        for other, theirs in by_judge.items():
            if other == judge:
                continue
            shared = own.keys() & theirs.keys()
            if shared:
                rates.append(sum(own[i] == theirs[i] for i in shared) / len(shared))
        scores[judge] = sum(rates) / len(rates) if rates else 0.0
    return scores


def run_panel(
    instances: list[H2HInstance],
    judge_ids: list[str],
    gw: Gateway,
    temperature: float = 0.0,
    max_tokens: int = 512,
    seed: int | None = None,
) -> PanelResult:
    """Collect one verdict per (instance, judge) and aggregate.

    Verdict parsing failures retry once with an explicit answer-format
    instruction appended; a second failure propagates.
    """
    if not instances:
        raise EmptyList("no instances to judge")
    verdicts: list[JudgeVerdict] = []
    for inst in instances:
        prompt = build_judge_prompt(inst)
        for judge_id in judge_ids:
            choice, rationale = _collect_verdict(gw, judge_id, prompt, temperature, max_tokens, seed)
            verdicts.append(
                JudgeVerdict(
                    judge_id=judge_id,
                    instance_id=inst.instance_id,
                    choice=choice,
                    rationale=rationale,
                )
            )
    return aggregate_panel(instances, verdicts)


def _collect_verdict(gw, judge_id, prompt, temperature, max_tokens, seed):
    req = CompletionRequest(
        model_id=judge_id,
        messages=tuple(prompt),
        temperature=temperature,
        max_tokens=max_tokens,
        seed=seed,
    )
    response = gw.complete(req)
    try:
        return parse_verdict(response.text), response.text
    except (NoVerdict, AmbiguousVerdict):
        retry = CompletionRequest(
            model_id=judge_id,
            messages=tuple([user_message(prompt[0].content + "\n\n" + VERDICT_RETRY_SUFFIX)]),
            temperature=temperature,
            max_tokens=max_tokens,
            seed=seed,
        )
        response = gw.complete(retry)
        return parse_verdict(response.text), response.text


def aggregate_panel(instances: list[H2HInstance], verdicts: list[JudgeVerdict]) -> PanelResult:
    """Pure aggregation of a complete verdict store."""
    methods = (instances[0].method_a, instances[0].method_b)
    by_instance: dict[str, list[JudgeVerdict]] = {}
    for v in verdicts:
        by_instance.setdefault(v.instance_id, []).append(v)
    scores = judge_agreement_scores(verdicts)
    per_instance = {}
    for inst in instances:
        votes = by_instance.get(inst.instance_id)
        if not votes:
            raise NoVerdicts(f"instance {inst.instance_id} has no verdicts")
        winner_choice = aggregate_majority(votes, scores)
        per_instance[inst.instance_id] = unblind(inst, winner_choice)
    return PanelResult(
        per_instance=per_instance,
        poll=compute_poll(per_instance, methods),
        votes=tuple(verdicts),
    )


def write_verdicts(result: PanelResult, instances: list[H2HInstance], path) -> None:
    """Line-delimited verdict store: judge, instance, choice, rationale, ordering."""
    ordering_by_id = {inst.instance_id: inst.ordering.value for inst in instances}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for v in result.votes:
            fh.write(
                json.dumps(
                    {
                        "judge_id": v.judge_id,
                        "instance_id": v.instance_id,
                        "choice": v.choice,
                        "rationale": v.rationale,
                        "ordering": ordering_by_id[v.instance_id],
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def write_panel_report(result: PanelResult, path) -> None:
    """CSV panel report: method, wins, instances, proportion."""
    total = len(result.per_instance)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "wins", "instances", "proportion"])
        for method, proportion in result.poll.items():
            wins = sum(1 for winner in result.per_instance.values() if winner == method)
            writer.writerow([method, wins, total, f"{proportion:.6g}"])
