"""Inter-annotator agreement: pairwise kappa, percent, label collapsing.

Run:  python3 demos/05_agreement.py
"""

from laypress.agreement import RatingMatrix, cohen_kappa, collapse_labels, mean_pairwise

# items x raters, four-point labels
cells = {}
ratings = {
    "expert1": ["CompletelyAgree", "SomewhatAgree", "SomewhatDisagree", "CompletelyAgree"],
    "expert2": ["SomewhatAgree", "SomewhatAgree", "CompletelyDisagree", "CompletelyAgree"],
    "expert3": ["CompletelyAgree", "CompletelyAgree", "SomewhatDisagree", "SomewhatAgree"],
}
for rater, labels in ratings.items():
    for i, label in enumerate(labels):
        cells[(f"item{i}", rater)] = label
matrix = RatingMatrix.from_labels(cells)

report = mean_pairwise(matrix)
for (a, b), stats in report.pairwise.items():
    print(f"{a} vs {b}: kappa={stats.kappa:.3f} percent={stats.percent:.3f} n={stats.n}")
print(f"mean kappa {report.mean_kappa:.3f}, mean percent {report.mean_percent:.3f}")

# Collapsing the four-point scale to agree/disagree usually changes kappa.
collapsed = collapse_labels(
    matrix,
    {
        "CompletelyAgree": "agree",
        "SomewhatAgree": "agree",
        "SomewhatDisagree": "disagree",
        "CompletelyDisagree": "disagree",
    },
)
print("collapsed mean kappa:", f"{mean_pairwise(collapsed).mean_kappa:.3f}")

# Single-pair call, for scripting:
a = {"i1": "A", "i2": "A", "i3": "B", "i4": "B"}
b = {"i1": "A", "i2": "B", "i3": "B", "i4": "B"}
print("worked single-pair kappa:", cohen_kappa(a, b))
