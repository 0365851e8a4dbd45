"""Command-line entry point: summarize | evaluate | h2h | agree | stats | serve | report.

Configuration is a flat key=value file; every key can be overridden by a
CLI flag of the same name.  All randomness flows from the single seed via
named sub-seeds, so identical config + cassette reproduce identical
outputs (timestamps aside).  Exit codes: 0 success, 2 config, 3 backend,
4 data.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from statistics import fmean

from . import agreement, corpus, judges, metrics, pipeline, service
from .errors import ConfigError, GatewayError, LaypressError
from .gateway import (
    Cassette,
    Gateway,
    LiveBackend,
    RecordBackend,
    ReplayBackend,
    ScriptedBackend,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BACKEND = 3
EXIT_DATA = 4


@dataclass
class RunConfig:
    corpus: str | None = None
    records: str | None = None
    out: str = "out"
    seed: int | None = None
    model: str = "scripted-model"
    judges: tuple[str, ...] = ("judge-1", "judge-2", "judge-3")
    backend: str = "scripted"
    cassette: str | None = None
    script: str | None = None
    base_url: str | None = None
    variants: tuple[str, ...] = ("baseline", "two_stage")
    selection: str = "A"
    word_budget: int | None = None
    prompt_wrap: str = "user"
    max_tokens: int = 2048
    temperature: float = 0.0
    external: dict[str, list[str]] = field(default_factory=dict)
    journal: str | None = None
    static: str | None = None
    host: str = "127.0.0.1"
    port: int = 8080
    admin_token: str = "admin"
    matrix: str | None = None
    collapse: str | None = None
    h2h_variants: tuple[str, ...] | None = None

    def require_seed(self) -> int:
        if self.seed is None:
            raise ConfigError("seed is mandatory (no wall-clock defaults)")
        return self.seed

    def sub_seed(self, name: str) -> int:
        digest = hashlib.sha256(f"{self.require_seed()}:{name}".encode()).hexdigest()
        return int(digest[:8], 16)

    def input_selection(self) -> corpus.InputSelection:
        try:
            mode = corpus.SelectionMode(self.selection)
        except ValueError as exc:
            raise ConfigError(f"unknown input selection {self.selection!r}") from exc
        budget = self.word_budget if mode is corpus.SelectionMode.FULL_ARTICLE else None
        try:
            return corpus.InputSelection(mode=mode, word_budget=budget)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def build_gateway(self) -> Gateway:
        if self.backend == "scripted":
            backend = self._scripted()
        elif self.backend == "replay":
            if not self.cassette:
                raise ConfigError("replay backend requires a cassette path")
            if not Path(self.cassette).exists():
                raise ConfigError(f"cassette not found: {self.cassette}")
            backend = ReplayBackend(Cassette.load(self.cassette))
        elif self.backend == "record":
            if not self.cassette:
                raise ConfigError("record backend requires a cassette path")
            inner = self._scripted() if self.base_url is None else LiveBackend(self.base_url)
            backend = RecordBackend(inner, self.cassette)
        elif self.backend == "live":
            if not self.base_url:
                raise ConfigError("live backend requires base_url")
            backend = LiveBackend(self.base_url)
        else:
            raise ConfigError(f"unknown backend {self.backend!r}")
        return Gateway(backend)

    def _scripted(self) -> ScriptedBackend:
        if self.script:
            try:
                obj = json.loads(Path(self.script).read_text("utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read script file: {exc}") from exc
            return ScriptedBackend.from_script(obj)
        return ScriptedBackend(
            default="This summary explains the research in plain language for lay readers.",
            rules=[
                (
                    "### ARTICLE",
                    ["1. Background answer.\n2. Question answer.\n3. Findings answer.\n4. Benefit answer."],
                ),
                ("### ANSWERS", ["A clear lay summary grounded in the authors' answers."]),
                ("### PREFERENCE", ["1"]),
            ],
        )


def load_config_file(path: str | Path) -> dict:
    values = {}
    for line_no, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"bad config line {line_no}: {line!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _parse_external(raw: str) -> dict[str, list[str]]:
    adapters = {}
    for entry in raw.split(";"):
        entry = entry.strip()
        if not entry:
            continue
        if "=" not in entry:
            raise ConfigError(f"bad external adapter spec {entry!r}")
        name, cmd = entry.split("=", 1)
        adapters[name.strip()] = cmd.strip().split()
    return adapters


def make_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for key in (
        "corpus", "records", "out", "seed", "model", "judges", "backend", "cassette",
        "script", "base_url", "variants", "selection", "word_budget", "prompt_wrap", "max_tokens",
        "temperature", "external", "journal", "static", "host", "port", "admin_token",
        "matrix", "collapse", "h2h_variants",
    ):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    cfg = RunConfig()
    for key, value in values.items():
        if key in ("seed", "word_budget", "max_tokens", "port"):
            value = int(value)
        elif key == "temperature":
            value = float(value)
        elif key in ("judges", "variants", "h2h_variants") and isinstance(value, str):
            value = tuple(v.strip() for v in value.split(",") if v.strip())
        elif key == "external" and isinstance(value, str):
            value = _parse_external(value)
        if not hasattr(cfg, key):
            raise ConfigError(f"unknown config key {key!r}")
        setattr(cfg, key, value)
    return cfg


# -- commands ---------------------------------------------------------------


def cmd_summarize(cfg: RunConfig) -> list[Path]:
    """One SummaryRecord per (article, variant); manifest alongside."""
    cfg.require_seed()
    if not cfg.corpus:
        raise ConfigError("summarize requires a corpus path")
    articles = corpus.load_corpus(cfg.corpus)
    try:
        variants = [pipeline.MethodVariant(v) for v in cfg.variants]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    sel = cfg.input_selection()
    gw = cfg.build_gateway()
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    records_path = out_dir / "records.jsonl"
    manifest_path = out_dir / "manifest.json"

    records = []
    failure = None
    try:
        for article in articles:
            for variant in variants:
                records.append(
                    pipeline.run_pipeline(
                        article,
                        sel,
                        variant,
                        cfg.model,
                        gw,
                        temperature=cfg.temperature,
                        max_tokens=cfg.max_tokens,
                        seed=cfg.sub_seed("decoding"),
                        wrap=cfg.prompt_wrap,
                    )
                )
    except GatewayError as exc:
        failure = exc

    pipeline.write_records(records, records_path)
    manifest = {
        "command": "summarize",
        "corpus": str(cfg.corpus),
        "model": cfg.model,
        "variants": [v.value for v in variants],
        "selection": sel.mode.value,
        "word_budget": sel.word_budget,
        "backend": cfg.backend,
        "cassette": cfg.cassette,
        "seed": cfg.seed,
        "records": len(records),
        "failure": None
        if failure is None
        else {"stage": getattr(failure, "stage", None), "error": str(failure)},
    }
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8")
    if failure is not None:
        raise failure
    return [records_path, manifest_path]


def _reference_lookup(cfg: RunConfig) -> dict[str, str]:
    if not cfg.corpus or not Path(cfg.corpus).exists():
        return {}
    return {
        a.id: a.reference_summary
        for a in corpus.load_corpus(cfg.corpus)
        if a.reference_summary
    }


_ROUGE_FIELDS = ("rouge1", "rouge2", "rouge_lsum")


def cmd_evaluate(cfg: RunConfig) -> list[Path]:
    """Per-summary metric rows plus per-(model, variant) means."""
    records_path = Path(cfg.records or Path(cfg.out) / "records.jsonl")
    if not records_path.exists():
        raise ConfigError(f"no summary records at {records_path}")
    records = pipeline.load_records(records_path)
    references = _reference_lookup(cfg)
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    for record in records:
        report = metrics.evaluate_summary(
            record.summary,
            references.get(record.article_id),
            external=cfg.external or None,
        )
        row = {
            "article_id": record.article_id,
            "model": record.model_id,
            "variant": record.variant.value,
            "word_count": report.word_count,
            "sentence_count": report.sentence_count,
            "fkgl": report.fkgl,
            "dcrs": report.dcrs,
        }
        for name in _ROUGE_FIELDS:
            score = getattr(report, name)
            row[name] = None if score is None else score.f1
        for name, value in report.external.items():
            row[f"external_{name}"] = value
        rows.append(row)

    external_cols = sorted({k for row in rows for k in row if k.startswith("external_")})
    columns = [
        "article_id", "model", "variant", "word_count", "sentence_count",
        "rouge1", "rouge2", "rouge_lsum", "fkgl", "dcrs", *external_cols,
    ]
    per_summary = out_dir / "metrics.csv"
    with open(per_summary, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([service._format_cell(row.get(col)) for col in columns])

    summary_path = out_dir / "metrics_summary.csv"
    groups: dict[tuple[str, str], list[dict]] = {}
    for row in rows:
        groups.setdefault((row["model"], row["variant"]), []).append(row)
    summary_columns = ["model", "variant", "n", "rouge1", "rouge2", "rouge_lsum", "fkgl", "dcrs", *external_cols]
    with open(summary_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(summary_columns)
        for (model, variant), group in sorted(groups.items()):
            row = {"model": model, "variant": variant, "n": len(group)}
            for col in ("rouge1", "rouge2", "rouge_lsum", "fkgl", "dcrs", *external_cols):
                values = [g[col] for g in group if g.get(col) is not None]
                row[col] = fmean(values) if values else None
            writer.writerow([service._format_cell(row.get(col)) for col in summary_columns])
    return [per_summary, summary_path]


def cmd_h2h(cfg: RunConfig) -> list[Path]:
    """Blinded pairwise judging of two variants over the shared articles."""
    records_path = Path(cfg.records or Path(cfg.out) / "records.jsonl")
    if not records_path.exists():
        raise ConfigError(f"no summary records at {records_path}")
    pair = cfg.h2h_variants or cfg.variants[:2]
    if len(pair) != 2 or pair[0] == pair[1]:
        raise ConfigError("h2h needs exactly two distinct variants")
    if not cfg.judges:
        raise ConfigError("h2h needs a non-empty judge list")
    records = pipeline.load_records(records_path)
    by_key = {(r.article_id, r.variant.value): r.summary for r in records}
    article_ids = sorted({r.article_id for r in records})
    instance_ids = [f"h2h-{aid}" for aid in article_ids]
    orderings = judges.plan_orderings(instance_ids, cfg.sub_seed("orderings"))
    instances = []
    for article_id, instance_id in zip(article_ids, instance_ids):
        try:
            summary_a = by_key[(article_id, pair[0])]
            summary_b = by_key[(article_id, pair[1])]
        except KeyError as exc:
            raise ConfigError(f"article {article_id} lacks a summary for variant {exc}") from exc
        instances.append(
            judges.H2HInstance(
                instance_id=instance_id,
                article_id=article_id,
                method_a=pair[0],
                method_b=pair[1],
                summary_a=summary_a,
                summary_b=summary_b,
                ordering=orderings[instance_id],
            )
        )
    gw = cfg.build_gateway()
    result = judges.run_panel(
        instances,
        list(cfg.judges),
        gw,
        temperature=cfg.temperature,
        max_tokens=512,
        seed=cfg.sub_seed("judging"),
    )
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    verdicts_path = out_dir / "h2h_verdicts.jsonl"
    panel_path = out_dir / "h2h_panel.csv"
    judges.write_verdicts(result, instances, verdicts_path)
    judges.write_panel_report(result, panel_path)
    return [verdicts_path, panel_path]


def cmd_agree(cfg: RunConfig) -> list[Path]:
    """Pairwise kappa/percent report for a rating-matrix CSV."""
    if not cfg.matrix:
        raise ConfigError("agree requires --matrix")
    matrix = agreement.RatingMatrix.from_csv(cfg.matrix)
    if cfg.collapse:
        mapping = {}
        for part in cfg.collapse.split(","):
            if "=" not in part:
                raise ConfigError(f"bad collapse entry {part!r}")
            src, dst = part.split("=", 1)
            mapping[src.strip()] = dst.strip()
        matrix = agreement.collapse_labels(matrix, mapping)
    report = agreement.mean_pairwise(matrix)
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "agreement.csv"
    agreement.write_report(report, path)
    print(f"mean kappa {report.mean_kappa:.4f}, mean percent {report.mean_percent:.4f}")
    return [path]


def cmd_stats(cfg: RunConfig) -> list[Path]:
    """Corpus statistics in Table-3 shape."""
    if not cfg.corpus:
        raise ConfigError("stats requires a corpus path")
    stats = corpus.compute_stats(corpus.load_corpus(cfg.corpus))
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "stats.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doc_count", "avg_doc_words", "avg_summary_words", "avg_summary_sentences"])
        writer.writerow(
            [
                stats.doc_count,
                f"{stats.avg_doc_words:.4f}",
                f"{stats.avg_summary_words:.4f}",
                f"{stats.avg_summary_sentences:.4f}",
            ]
        )
    print(
        f"docs {stats.doc_count}, avg doc words {stats.avg_doc_words:.1f}, "
        f"avg summary words {stats.avg_summary_words:.1f}, "
        f"avg summary sentences {stats.avg_summary_sentences:.1f}"
    )
    return [path]


def cmd_serve(cfg: RunConfig):
    """Run the annotation service until interrupted."""
    if not cfg.journal:
        raise ConfigError("serve requires a journal path")
    store = service.EvalStore(cfg.journal, admin_token=cfg.admin_token)
    server = service.create_server(store, host=cfg.host, port=cfg.port, static_dir=cfg.static)
    print(f"serving on http://{cfg.host}:{server.server_address[1]}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return []


def cmd_report(cfg: RunConfig) -> list[Path]:
    """Merge metric means with PoLL/PoH and emit report files."""
    out_dir = Path(cfg.out)
    summary_path = out_dir / "metrics_summary.csv"
    rows: list[dict] = []
    if summary_path.exists():
        with open(summary_path, encoding="utf-8", newline="") as fh:
            for row in csv.DictReader(fh):
                rows.append(
                    {
                        "model": row["model"],
                        "variant": row["variant"],
                        "n": row["n"],
                        **{
                            col: (float(row[col]) if row.get(col) else None)
                            for col in ("rouge1", "rouge2", "rouge_lsum", "fkgl", "dcrs")
                        },
                    }
                )
    poll = {}
    panel_path = out_dir / "h2h_panel.csv"
    if panel_path.exists():
        with open(panel_path, encoding="utf-8", newline="") as fh:
            for row in csv.DictReader(fh):
                poll[row["method"]] = float(row["proportion"])
    poh = {}
    figure_rows = None
    if cfg.journal and Path(cfg.journal).exists():
        store = service.EvalStore(cfg.journal, admin_token=cfg.admin_token)
        try:
            poh = store.compute_poh()
        except LaypressError:
            poh = {}
        variants = tuple(sorted({qa.variant for qa in store.qa_tasks.values()}))
        if variants:
            try:
                figure_rows = store.figure_data(variants)
            except LaypressError:
                figure_rows = None
    for row in rows:
        row["poll"] = poll.get(row["variant"])
        row["poh"] = poh.get(row["variant"])
    return service.export_report(out_dir, rows, figure_rows)


COMMANDS = {
    "summarize": cmd_summarize,
    "evaluate": cmd_evaluate,
    "h2h": cmd_h2h,
    "agree": cmd_agree,
    "stats": cmd_stats,
    "serve": cmd_serve,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="laypress", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config")
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--backend", choices=["live", "record", "replay", "scripted"])
        p.add_argument("--cassette")
        p.add_argument("--corpus")
        p.add_argument("--records")
        p.add_argument("--model")
        p.add_argument("--judges")
        p.add_argument("--script")
        p.add_argument("--base-url", dest="base_url")
        p.add_argument("--variants")
        p.add_argument("--h2h-variants", dest="h2h_variants")
        p.add_argument("--selection", choices=["A", "A+I", "full"])
        p.add_argument("--prompt-wrap", dest="prompt_wrap", choices=["user", "system_user"])
        p.add_argument("--word-budget", dest="word_budget", type=int)
        p.add_argument("--max-tokens", dest="max_tokens", type=int)
        p.add_argument("--temperature", type=float)
        p.add_argument("--external")
        p.add_argument("--journal")
        p.add_argument("--static")
        p.add_argument("--host")
        p.add_argument("--port", type=int)
        p.add_argument("--admin-token", dest="admin_token")
        p.add_argument("--matrix")
        p.add_argument("--collapse")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
        written = COMMANDS[args.command](cfg)
        for path in written or []:
            print(path)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GatewayError as exc:
        stage = getattr(exc, "stage", None)
        prefix = f"[{stage} stage] " if stage else ""
        print(f"backend error: {prefix}{exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (LaypressError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
