import csv
import json
import re
from pathlib import Path

import pytest

from laypress import cli
from laypress.cli import (
    EXIT_BACKEND,
    EXIT_CONFIG,
    RunConfig,
    cmd_evaluate,
    cmd_h2h,
    cmd_report,
    cmd_stats,
    cmd_summarize,
    main,
)

TIMESTAMP_RE = re.compile(r'"(created_at|submitted_at)": "[^"]*"')


def normalize(path: Path) -> str:
    return TIMESTAMP_RE.sub('"\\1": null', path.read_text("utf-8"))


def base_config(tmp_path, corpus_file, **overrides) -> RunConfig:
    cfg = RunConfig(
        corpus=str(corpus_file),
        out=str(tmp_path / "out"),
        seed=7,
        model="test-model",
        backend="scripted",
        variants=("baseline", "two_stage"),
    )
    for key, value in overrides.items():
        setattr(cfg, key, value)
    return cfg


class TestSummarize:
    def test_two_by_two_records(self, tmp_path, corpus_file):
        cfg = base_config(tmp_path, corpus_file)
        written = cmd_summarize(cfg)
        records = [json.loads(line) for line in written[0].read_text().splitlines()]
        assert len(records) == 4
        assert {(r["article_id"], r["variant"]) for r in records} == {
            ("a1", "baseline"),
            ("a1", "two_stage"),
            ("a2", "baseline"),
            ("a2", "two_stage"),
        }
        manifest = json.loads(written[1].read_text())
        assert manifest["records"] == 4 and manifest["failure"] is None

    def test_seed_mandatory(self, tmp_path, corpus_file):
        cfg = base_config(tmp_path, corpus_file, seed=None)
        rc = main(["summarize", "--corpus", str(corpus_file), "--out", str(tmp_path / "o")])
        assert rc == EXIT_CONFIG

    def test_replay_miss_exits_backend_code(self, tmp_path, corpus_file):
        cassette = tmp_path / "empty.json"
        cassette.write_text("{}")
        rc = main(
            [
                "summarize",
                "--corpus", str(corpus_file),
                "--out", str(tmp_path / "out"),
                "--seed", "7",
                "--backend", "replay",
                "--cassette", str(cassette),
            ]
        )
        assert rc == EXIT_BACKEND
        # partial outputs kept with a failure manifest
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["failure"] is not None
        assert manifest["failure"]["stage"] == "baseline"


class TestEvaluate:
    def test_rouge_columns_with_references(self, tmp_path, corpus_file):
        cfg = base_config(tmp_path, corpus_file)
        cmd_summarize(cfg)
        per_summary, summary = cmd_evaluate(cfg)
        rows = list(csv.DictReader(per_summary.open()))
        assert len(rows) == 4
        assert all(row["rouge1"] for row in rows)
        means = list(csv.DictReader(summary.open()))
        assert {(r["model"], r["variant"]) for r in means} == {
            ("test-model", "baseline"),
            ("test-model", "two_stage"),
        }

    def test_reference_less_rows(self, tmp_path, corpus_file, sample_articles):
        from laypress.corpus import Article, write_corpus

        bare = [
            Article(id=a.id, title=a.title, abstract=a.abstract, sections=a.sections)
            for a in sample_articles
        ]
        bare_path = tmp_path / "bare.jsonl"
        write_corpus(bare, bare_path)
        cfg = base_config(tmp_path, bare_path)
        cmd_summarize(cfg)
        per_summary, _ = cmd_evaluate(cfg)
        rows = list(csv.DictReader(per_summary.open()))
        assert all(row["rouge1"] == "" for row in rows)
        assert all(row["fkgl"] for row in rows)

    def test_failing_adapter_leaves_column_empty(self, tmp_path, corpus_file):
        cfg = base_config(tmp_path, corpus_file, external={"bad": ["/no/such/bin"]})
        cmd_summarize(cfg)
        per_summary, _ = cmd_evaluate(cfg)
        rows = list(csv.DictReader(per_summary.open()))
        assert all(row["external_bad"] == "" for row in rows)


class TestH2H:
    def test_poll_csv_matches_hand_count(self, tmp_path, corpus_file):
        cfg = base_config(tmp_path, corpus_file)
        cmd_summarize(cfg)
        # scripted judges always answer "1": the method shown first wins every
        # instance, so PoLL follows the ordering plan exactly.
        verdicts_path, panel_path = cmd_h2h(cfg)
        verdicts = [json.loads(line) for line in verdicts_path.read_text().splitlines()]
        assert len(verdicts) == 2 * 3
        orderings = {v["instance_id"]: v["ordering"] for v in verdicts}
        wins = {"baseline": 0, "two_stage": 0}
        for ordering in orderings.values():
            wins["baseline" if ordering == "A_first" else "two_stage"] += 1
        with panel_path.open() as fh:
            rows = {r["method"]: r for r in csv.DictReader(fh)}
        total = len(orderings)
        assert float(rows["baseline"]["proportion"]) == wins["baseline"] / total
        assert int(rows["baseline"]["wins"]) == wins["baseline"]

    def test_needs_two_variants(self, tmp_path, corpus_file):
        cfg = base_config(tmp_path, corpus_file, h2h_variants=("baseline", "baseline"))
        cmd_summarize(cfg)
        from laypress.errors import ConfigError

        with pytest.raises(ConfigError):
            cmd_h2h(cfg)


class TestAgreeStats:
    def test_agree_on_worked_fixture(self, tmp_path, capsys):
        matrix = tmp_path / "matrix.csv"
        matrix.write_text(
            "item_id,r1,r2\nitem0,A,A\nitem1,A,B\nitem2,B,B\nitem3,B,B\n"
        )
        rc = main(
            ["agree", "--matrix", str(matrix), "--out", str(tmp_path / "out"), "--seed", "1"]
        )
        assert rc == 0
        rows = (tmp_path / "out" / "agreement.csv").read_text().splitlines()
        assert rows[1] == "r1,r2,0.5,0.75,4"

    def test_agree_with_collapse(self, tmp_path):
        matrix = tmp_path / "matrix.csv"
        matrix.write_text(
            "item_id,r1,r2\nitem0,CA,SA\nitem1,SD,CD\nitem2,CA,CA\nitem3,CD,SD\n"
        )
        rc = main(
            [
                "agree",
                "--matrix", str(matrix),
                "--collapse", "CA=agree,SA=agree,SD=disagree,CD=disagree",
                "--out", str(tmp_path / "out"),
                "--seed", "1",
            ]
        )
        assert rc == 0
        rows = (tmp_path / "out" / "agreement.csv").read_text().splitlines()
        assert rows[1] == "r1,r2,1,1,4"

    def test_stats_single_article(self, tmp_path, capsys):
        corpus_path = tmp_path / "c.jsonl"
        corpus_path.write_text(
            json.dumps(
                {
                    "id": "x",
                    "title": "",
                    "abstract": "one two three four five six seven eight nine ten",
                    "sections": [],
                    "reference_summary": "alpha beta gamma delta epsilon.",
                }
            )
            + "\n"
        )
        rc = main(["stats", "--corpus", str(corpus_path), "--out", str(tmp_path / "out"), "--seed", "1"])
        assert rc == 0
        row = (tmp_path / "out" / "stats.csv").read_text().splitlines()[1]
        assert row == "1,10.0000,5.0000,1.0000"


class TestReport:
    def test_report_merges_poll(self, tmp_path, corpus_file):
        cfg = base_config(tmp_path, corpus_file)
        cmd_summarize(cfg)
        cmd_evaluate(cfg)
        cmd_h2h(cfg)
        files = cmd_report(cfg)
        report_rows = list(csv.DictReader((Path(cfg.out) / "report.csv").open()))
        assert {r["variant"] for r in report_rows} == {"baseline", "two_stage"}
        assert all(r["poll"] != "" for r in report_rows)
        assert all(r["poh"] == "" for r in report_rows)
        assert (Path(cfg.out) / "report.md").exists()

    def test_nothing_to_report(self, tmp_path):
        rc = main(["report", "--out", str(tmp_path / "empty"), "--seed", "1"])
        assert rc == cli.EXIT_DATA


class TestDeterminism:
    def test_identical_runs_byte_identical(self, tmp_path, corpus_file):
        outputs = []
        for run in ("one", "two"):
            cfg = base_config(tmp_path, corpus_file, out=str(tmp_path / run))
            cmd_summarize(cfg)
            cmd_evaluate(cfg)
            cmd_h2h(cfg)
            cmd_report(cfg)
            outputs.append(
                {
                    p.name: normalize(p)
                    for p in sorted(Path(cfg.out).iterdir())
                    if p.is_file()
                }
            )
        assert outputs[0] == outputs[1]

    def test_config_file_and_flags_equivalent(self, tmp_path, corpus_file):
        config_file = tmp_path / "run.cfg"
        config_file.write_text(
            f"corpus = {corpus_file}\nseed = 7\nmodel = test-model\n"
            f"backend = scripted\nvariants = baseline,two_stage\n"
            f"out = {tmp_path / 'from_config'}\n"
        )
        rc = main(["summarize", "--config", str(config_file)])
        assert rc == 0
        rc = main(
            [
                "summarize",
                "--corpus", str(corpus_file),
                "--seed", "7",
                "--model", "test-model",
                "--backend", "scripted",
                "--variants", "baseline,two_stage",
                "--out", str(tmp_path / "from_flags"),
            ]
        )
        assert rc == 0
        a = normalize(tmp_path / "from_config" / "records.jsonl")
        b = normalize(tmp_path / "from_flags" / "records.jsonl")
        assert a == b
