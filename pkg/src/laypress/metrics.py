"""Reference-based and reference-less summary metrics.

ROUGE follows the reference tool's observable behaviour: lowercase
alphanumeric tokens, Porter stemming applied only to tokens longer than
three characters, counter-clipped n-gram overlap, and the summary-level
union-LCS variant for ROUGE-Lsum.  FKGL and DCRS are the plain closed
forms on the shared tokenizer's counts.
"""

from __future__ import annotations

import subprocess
import tempfile
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from . import textproc
from .errors import EmptyCandidate, EmptyText
from .textproc import TokenizedText

DIFFICULT_PERCENT_THRESHOLD = 5.0
DIFFICULT_ADJUSTMENT = 3.6365


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float

    @property
    def f1(self) -> float:
        if self.precision + self.recall == 0:
            return 0.0
        return 2 * self.precision * self.recall / (self.precision + self.recall)


@dataclass(frozen=True)
class FamiliarWordList:
    """Immutable lowercase familiar-word set for the Dale-Chall score."""

    words: frozenset[str]

    def __post_init__(self):
        if not self.words:
            raise ValueError("familiar word list must not be empty")

    @classmethod
    def from_file(cls, path: str | Path) -> "FamiliarWordList":
        text = Path(path).read_text("utf-8")
        return cls(frozenset(w.strip().lower() for w in text.splitlines() if w.strip()))

    def __contains__(self, word: str) -> bool:
        return word in self.words


@lru_cache(maxsize=1)
def default_familiar_words() -> FamiliarWordList:
    text = resources.files("laypress.assets").joinpath("dale_chall_familiar.txt").read_text("utf-8")
    return FamiliarWordList(frozenset(w.strip() for w in text.splitlines() if w.strip()))


@dataclass(frozen=True)
class MetricReport:
    word_count: int
    sentence_count: int
    fkgl: float
    dcrs: float
    rouge1: RougeScore | None = None
    rouge2: RougeScore | None = None
    rouge_lsum: RougeScore | None = None
    external: dict[str, float | None] = field(default_factory=dict)

    def to_json(self) -> dict:
        def rouge_obj(score):
            if score is None:
                return None
            return {"precision": score.precision, "recall": score.recall, "f1": score.f1}

        return {
            "word_count": self.word_count,
            "sentence_count": self.sentence_count,
            "fkgl": self.fkgl,
            "dcrs": self.dcrs,
            "rouge1": rouge_obj(self.rouge1),
            "rouge2": rouge_obj(self.rouge2),
            "rouge_lsum": rouge_obj(self.rouge_lsum),
            "external": self.external,
        }


def _rouge_tokens(t: TokenizedText, stem: bool) -> list[str]:
    if not stem:
        return list(t.tokens)
    return [textproc.porter_stem(tok, nltk_compat=True) if len(tok) > 3 else tok for tok in t.tokens]


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: str, reference: str, n: int, stem: bool = True) -> RougeScore:
    """Clipped n-gram overlap F-score, n in {1, 2}."""
    if n not in (1, 2):
        raise ValueError("only ROUGE-1 and ROUGE-2 are supported")
    cand = _ngrams(_rouge_tokens(textproc.tokenize(candidate), stem), n)
    ref = _ngrams(_rouge_tokens(textproc.tokenize(reference), stem), n)
    overlap = sum(min(count, cand[gram]) for gram, count in ref.items())
    precision = overlap / max(sum(cand.values()), 1)
    recall = overlap / max(sum(ref.values()), 1)
    return RougeScore(precision=precision, recall=recall)


def _lcs_indices(ref: list[str], cand: list[str]) -> list[int]:
    """Indices into ref of one longest common subsequence with cand."""
    rows, cols = len(ref), len(cand)
    table = [[0] * (cols + 1) for _ in range(rows + 1)]
    for i in range(1, rows + 1):
        for j in range(1, cols + 1):
            if ref[i - 1] == cand[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    indices = []
    i, j = rows, cols
    while i > 0 and j > 0:
        if ref[i - 1] == cand[j - 1]:
            indices.append(i - 1)
            i -= 1
            j -= 1
        elif table[i][j - 1] > table[i - 1][j]:
            j -= 1
        else:
            i -= 1
    indices.reverse()
    return indices


def _sentence_token_lists(t: TokenizedText, stem: bool) -> list[list[str]]:
    stemmed = _rouge_tokens(t, stem)
    return [stemmed[start:end] for start, end in t.sentences]


def rouge_lsum(candidate: str, reference: str, stem: bool = True) -> RougeScore:
    """Summary-level LCS: per-reference-sentence union LCS with each token
    on either side creditable at most once."""
    cand_sents = _sentence_token_lists(textproc.tokenize(candidate), stem)
    ref_sents = _sentence_token_lists(textproc.tokenize(reference), stem)
    cand_total = sum(len(s) for s in cand_sents)
    ref_total = sum(len(s) for s in ref_sents)
    if cand_total == 0 or ref_total == 0:
        return RougeScore(precision=0.0, recall=0.0)

    cand_budget = Counter()
    ref_budget = Counter()
    for sent in cand_sents:
        cand_budget.update(sent)
    for sent in ref_sents:
        ref_budget.update(sent)

    hits = 0
    for ref_sent in ref_sents:
        union: set[int] = set()
        for cand_sent in cand_sents:
            union.update(_lcs_indices(ref_sent, cand_sent))
        for idx in sorted(union):
            token = ref_sent[idx]
            if cand_budget[token] > 0 and ref_budget[token] > 0:
                hits += 1
                cand_budget[token] -= 1
                ref_budget[token] -= 1
    return RougeScore(precision=hits / cand_total, recall=hits / ref_total)


def rouge_l_text(candidate: str, reference: str, stem: bool = True) -> RougeScore:
    """Plain whole-text LCS variant; provided for completeness, not the
    reported default."""
    cand = _rouge_tokens(textproc.tokenize(candidate), stem)
    ref = _rouge_tokens(textproc.tokenize(reference), stem)
    if not cand or not ref:
        return RougeScore(precision=0.0, recall=0.0)
    lcs = len(_lcs_indices(ref, cand))
    return RougeScore(precision=lcs / len(cand), recall=lcs / len(ref))


def fkgl(t: TokenizedText) -> float:
    """Flesch-Kincaid grade: 0.39*(words/sentences) + 11.8*(syllables/words) - 15.59."""
    if t.word_count == 0 or t.sentence_count == 0:
        raise EmptyText("FKGL needs at least one word and one sentence")
    syllables = sum(textproc.count_syllables(tok) for tok in t.tokens)
    return (
        0.39 * (t.word_count / t.sentence_count)
        + 11.8 * (syllables / t.word_count)
        - 15.59
    )


def dcrs(t: TokenizedText, familiar: FamiliarWordList | None = None) -> float:
    """Dale-Chall score: 0.1579*difficult% + 0.0496*(words/sentences),
    plus 3.6365 when difficult% exceeds 5 (strictly)."""
    if t.word_count == 0 or t.sentence_count == 0:
        raise EmptyText("DCRS needs at least one word and one sentence")
    familiar = familiar or default_familiar_words()
    difficult = sum(
        1
        for tok in t.tokens
        if tok not in familiar and textproc.count_syllables(tok) >= 2
    )
    percent = 100.0 * difficult / t.word_count
    score = 0.1579 * percent + 0.0496 * (t.word_count / t.sentence_count)
    if percent > DIFFICULT_PERCENT_THRESHOLD:
        score += DIFFICULT_ADJUSTMENT
    return score


def run_external_metric(command: list[str], candidate: str, reference: str | None) -> float | None:
    """Invoke an external metric adapter; None when it fails.

    Contract: ``<cmd> --candidate <file> --reference <file>`` printing one
    real number on stdout; a nonzero exit marks the metric unavailable.
    """
    with tempfile.TemporaryDirectory() as tmp:
        cand_file = Path(tmp) / "candidate.txt"
        cand_file.write_text(candidate, "utf-8")
        ref_file = Path(tmp) / "reference.txt"
        ref_file.write_text(reference or "", "utf-8")
        try:
            proc = subprocess.run(
                [*command, "--candidate", str(cand_file), "--reference", str(ref_file)],
                capture_output=True,
                text=True,
                timeout=300,
            )
        except (OSError, subprocess.TimeoutExpired):
            return None
    if proc.returncode != 0:
        return None
    try:
        return float(proc.stdout.strip().splitlines()[-1])
    except (ValueError, IndexError):
        return None


def evaluate_summary(
    candidate: str,
    reference: str | None = None,
    familiar: FamiliarWordList | None = None,
    stem: bool = True,
    external: dict[str, list[str]] | None = None,
) -> MetricReport:
    """Score one summary; ROUGE fields are present iff a reference is given."""
    tokenized = textproc.tokenize(candidate)
    if tokenized.word_count == 0:
        raise EmptyCandidate("candidate summary has no tokens")
    report = MetricReport(
        word_count=tokenized.word_count,
        sentence_count=tokenized.sentence_count,
        fkgl=fkgl(tokenized),
        dcrs=dcrs(tokenized, familiar),
        rouge1=rouge_n(candidate, reference, 1, stem) if reference is not None else None,
        rouge2=rouge_n(candidate, reference, 2, stem) if reference is not None else None,
        rouge_lsum=rouge_lsum(candidate, reference, stem) if reference is not None else None,
        external={
            name: run_external_metric(cmd, candidate, reference)
            for name, cmd in (external or {}).items()
        },
    )
    return report
