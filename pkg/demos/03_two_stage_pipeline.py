"""The two-stage summary pipeline on a scripted backend (fully offline).

Stage 1 asks the model to answer four questions as the article's author;
stage 2 asks a writer persona to compose the lay summary from the article
plus those answers.  A scripted backend stands in for the model so the
demo is deterministic.

Run:  python3 demos/03_two_stage_pipeline.py
"""

from laypress.corpus import Article, InputSelection
from laypress.gateway import Gateway, ScriptedBackend
from laypress.pipeline import MethodVariant, build_author_prompt, check_guidelines, run_pipeline

article = Article(
    id="demo",
    title="Sleep and memory",
    abstract="Sleep helps the brain store memories. Rested mice solved the maze faster.",
)

backend = ScriptedBackend(
    default="A plain-language summary of the research.",
    rules=[
        (
            "answering the following questions",
            ["1. Everyone sleeps.\n2. Does rest help memory?\n3. Rested mice did better.\n4. Students and patients."],
        ),
        ("### ANSWERS", ["Sleep locks memories in place. In this study, mice that napped solved mazes faster."]),
    ],
)

record = run_pipeline(article, InputSelection(), MethodVariant.TWO_STAGE, "demo-model", Gateway(backend))
print("stage transcripts:", len(record.transcripts))
print("author answers:   ", record.author_answers.answers)
print("summary:          ", record.summary)
print("guideline checks: ", [str(v) for v in check_guidelines(record.summary)])

# The prompts themselves are plain text; the first stage looks like this:
print("\n--- author prompt (first 300 chars) ---")
print(build_author_prompt("ARTICLE TEXT")[0].content[:300])
