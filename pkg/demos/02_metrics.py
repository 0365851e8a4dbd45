"""Scoring one candidate summary against a reference.

Run:  python3 demos/02_metrics.py
"""

from laypress import metrics, textproc

reference = (
    "Sleep makes memory stronger.\n"
    "Rested mice solved the maze faster than tired mice."
)
candidate = (
    "The study found that sleep strengthens memory.\n"
    "Mice that rested well finished the maze faster."
)

report = metrics.evaluate_summary(candidate, reference)
print(f"ROUGE-1    p={report.rouge1.precision:.3f} r={report.rouge1.recall:.3f} f1={report.rouge1.f1:.3f}")
print(f"ROUGE-2    f1={report.rouge2.f1:.3f}")
print(f"ROUGE-Lsum f1={report.rouge_lsum.f1:.3f}")
print(f"FKGL {report.fkgl:.2f}   DCRS {report.dcrs:.2f}")
print(f"{report.word_count} words in {report.sentence_count} sentences")

# Reference-less evaluation (no ROUGE fields) for settings without gold
# summaries:
readability_only = metrics.evaluate_summary(candidate)
print("reference-less rouge1:", readability_only.rouge1)

# The readability pieces are also available on their own.
t = textproc.tokenize(candidate)
print(f"fkgl={metrics.fkgl(t):.3f} dcrs={metrics.dcrs(t):.3f}")
