"""Inter-annotator agreement statistics over categorical rating matrices.

Pairwise Cohen's kappa and percent agreement are computed on the items
both raters labelled; the panel report averages over unordered pairs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from statistics import fmean

from .errors import IncompleteMapping, NoOverlap, TooFewRaters


@dataclass(frozen=True)
class RatingMatrix:
    items: tuple[str, ...]
    raters: tuple[str, ...]
    labels: dict[tuple[str, str], str]
    vocabulary: frozenset[str]

    @classmethod
    def from_labels(cls, labels: dict[tuple[str, str], str]) -> "RatingMatrix":
        items = tuple(dict.fromkeys(item for item, _ in labels))
        raters = tuple(dict.fromkeys(rater for _, rater in labels))
        return cls(
            items=items,
            raters=raters,
            labels=dict(labels),
            vocabulary=frozenset(labels.values()),
        )

    def column(self, rater: str) -> dict[str, str]:
        return {item: label for (item, r), label in self.labels.items() if r == rater}

    @classmethod
    def from_csv(cls, path: str | Path) -> "RatingMatrix":
        """CSV with header ``item_id,<rater>,...``; empty cell = missing."""
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            raters = tuple(header[1:])
            labels = {}
            items = []
            for row in reader:
                item = row[0]
                items.append(item)
                for rater, cell in zip(raters, row[1:]):
                    if cell != "":
                        labels[(item, rater)] = cell
        return cls(
            items=tuple(items),
            raters=raters,
            labels=labels,
            vocabulary=frozenset(labels.values()),
        )

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["item_id", *self.raters])
            for item in self.items:
                writer.writerow([item, *(self.labels.get((item, r), "") for r in self.raters)])


@dataclass(frozen=True)
class PairStats:
    kappa: float
    percent: float
    n: int


@dataclass(frozen=True)
class KappaReport:
    pairwise: dict[tuple[str, str], PairStats]
    mean_kappa: float
    mean_percent: float


def _common_items(a: dict[str, str], b: dict[str, str]) -> list[str]:
    common = [item for item in a if item in b]
    if not common:
        raise NoOverlap("raters share no labelled items")
    return common


def percent_agreement(a: dict[str, str], b: dict[str, str]) -> float:
    """Fraction of commonly labelled items with equal labels."""
    common = _common_items(a, b)
    return sum(a[item] == b[item] for item in common) / len(common)


def cohen_kappa(a: dict[str, str], b: dict[str, str]) -> float:
    """Chance-corrected agreement (p_o - p_e) / (1 - p_e).

    Two raters constant on the same label (p_e == 1) score 1.0.
    """
    common = _common_items(a, b)
    n = len(common)
    observed = sum(a[item] == b[item] for item in common) / n
    categories = {a[item] for item in common} | {b[item] for item in common}
    expected = sum(
        (sum(a[item] == cat for item in common) / n)
        * (sum(b[item] == cat for item in common) / n)
        for cat in categories
    )
    if expected == 1.0:
        return 1.0
    return (observed - expected) / (1.0 - expected)


def mean_pairwise(matrix: RatingMatrix) -> KappaReport:
    """Kappa and percent agreement for every unordered rater pair."""
    if len(matrix.raters) < 2:
        raise TooFewRaters("need at least two raters")
    columns = {rater: matrix.column(rater) for rater in matrix.raters}
    pairwise = {}
    for ra, rb in combinations(matrix.raters, 2):
        common = _common_items(columns[ra], columns[rb])
        pairwise[(ra, rb)] = PairStats(
            kappa=cohen_kappa(columns[ra], columns[rb]),
            percent=percent_agreement(columns[ra], columns[rb]),
            n=len(common),
        )
    return KappaReport(
        pairwise=pairwise,
        mean_kappa=fmean(stats.kappa for stats in pairwise.values()),
        mean_percent=fmean(stats.percent for stats in pairwise.values()),
    )


def collapse_labels(matrix: RatingMatrix, mapping: dict[str, str]) -> RatingMatrix:
    """Rewrite every label through a total mapping over the vocabulary."""
    uncovered = matrix.vocabulary - mapping.keys()
    if uncovered:
        raise IncompleteMapping(sorted(uncovered)[0])
    collapsed = {key: mapping[label] for key, label in matrix.labels.items()}
    return RatingMatrix(
        items=matrix.items,
        raters=matrix.raters,
        labels=collapsed,
        vocabulary=frozenset(mapping[label] for label in matrix.vocabulary),
    )


def write_report(report: KappaReport, path: str | Path) -> None:
    """CSV report: one row per pair plus a mean summary row."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rater_a", "rater_b", "kappa", "percent", "n"])
        for (ra, rb), stats in report.pairwise.items():
            writer.writerow([ra, rb, f"{stats.kappa:.6g}", f"{stats.percent:.6g}", stats.n])
        writer.writerow(["mean", "", f"{report.mean_kappa:.6g}", f"{report.mean_percent:.6g}", ""])
