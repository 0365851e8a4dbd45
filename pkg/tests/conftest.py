import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))

DATA_DIR = TESTS_DIR / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture()
def sample_articles():
    from laypress.corpus import Article

    return [
        Article(
            id="a1",
            title="Sleep and memory",
            abstract="Sleep helps the brain store memories. Rested mice solved the maze faster.",
            sections=(
                ("Introduction", "Memory formation depends on rest. We studied sleeping mice."),
                ("Methods", "Mice ran a maze after naps of varied length."),
            ),
            reference_summary="Sleep makes memory stronger.\nRested mice solved the maze faster than tired mice.",
            domain_tag="biomed",
        ),
        Article(
            id="a2",
            title="Bees and crops",
            abstract="Bee colonies pollinate many food crops. Losing bees would reduce harvests.",
            sections=(
                ("Background", "Pollinators support farming worldwide."),
                ("Results", "Fields near hives produced more fruit."),
            ),
            reference_summary="Bees help farms grow more food.\nFields near hives produced larger harvests.",
            domain_tag="biomed",
        ),
    ]


@pytest.fixture()
def corpus_file(tmp_path, sample_articles):
    from laypress.corpus import write_corpus

    path = tmp_path / "corpus.jsonl"
    write_corpus(sample_articles, path)
    return path


@pytest.fixture()
def scripted_gateway():
    """Gateway whose backend answers author prompts with numbered answers
    and everything else with a canned summary."""
    from laypress.gateway import Gateway, ScriptedBackend

    backend = ScriptedBackend(
        default="A plain language summary for testing.",
        rules=[
            (
                "answering the following questions",
                ["1. Background.\n2. Research question.\n3. Findings.\n4. Beneficiaries."],
            ),
            ("### ANSWERS", ["A summary grounded in the answers."]),
        ],
    )
    return Gateway(backend)
