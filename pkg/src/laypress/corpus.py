"""Article ingestion, input-selection strategies, and dataset statistics.

The corpus file format is line-delimited JSON, one article per line, with
keys id, title, abstract, sections, reference_summary, domain_tag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from statistics import fmean

from . import textproc
from .errors import (
    DuplicateId,
    EmptyAbstract,
    EmptyCorpus,
    MalformedRecord,
    MissingField,
    MissingReferences,
    NoSections,
)


class SelectionMode(str, Enum):
    ABSTRACT_ONLY = "A"
    ABSTRACT_PLUS_INTRO = "A+I"
    FULL_ARTICLE = "full"


@dataclass(frozen=True)
class Article:
    id: str
    title: str
    abstract: str
    sections: tuple[tuple[str, str], ...] = ()
    reference_summary: str | None = None
    domain_tag: str = "other"

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "abstract": self.abstract,
            "sections": [{"heading": h, "body": b} for h, b in self.sections],
            "reference_summary": self.reference_summary,
            "domain_tag": self.domain_tag,
        }


@dataclass(frozen=True)
class InputSelection:
    mode: SelectionMode = SelectionMode.ABSTRACT_ONLY
    word_budget: int | None = None

    def __post_init__(self):
        if self.mode is SelectionMode.FULL_ARTICLE:
            if self.word_budget is None or self.word_budget <= 0:
                raise ValueError("FullArticle selection requires a positive word_budget")
        elif self.word_budget is not None:
            raise ValueError("word_budget only applies to FullArticle selection")


@dataclass(frozen=True)
class CorpusStats:
    doc_count: int
    avg_doc_words: float
    avg_summary_words: float
    avg_summary_sentences: float


def _parse_article(obj: dict, line_no: int) -> Article:
    for key in ("id", "abstract"):
        if not obj.get(key):
            raise MissingField(key, line_no)
    sections = obj.get("sections") or []
    try:
        parsed_sections = tuple((sec["heading"], sec["body"]) for sec in sections)
    except (TypeError, KeyError) as exc:
        raise MalformedRecord(line_no, f"bad sections entry: {exc}") from exc
    return Article(
        id=str(obj["id"]),
        title=obj.get("title", ""),
        abstract=obj["abstract"],
        sections=parsed_sections,
        reference_summary=obj.get("reference_summary"),
        domain_tag=obj.get("domain_tag", "other"),
    )


def load_corpus(path: str | Path) -> list[Article]:
    """Read a JSONL corpus file, preserving order and validating ids."""
    articles: list[Article] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, str(exc)) from exc
            if not isinstance(obj, dict):
                raise MalformedRecord(line_no, "record is not a JSON object")
            article = _parse_article(obj, line_no)
            if article.id in seen:
                raise DuplicateId(f"duplicate article id {article.id!r} at line {line_no}")
            seen.add(article.id)
            articles.append(article)
    return articles


def write_corpus(articles: list[Article], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for article in articles:
            fh.write(json.dumps(article.to_json(), ensure_ascii=False) + "\n")


def full_text(article: Article) -> str:
    parts = [article.title, article.abstract]
    parts.extend(body for _, body in article.sections)
    return "\n\n".join(p for p in parts if p)


def select_input(article: Article, sel: InputSelection) -> str:
    """Produce the model input text for one article under a selection."""
    if not article.abstract.strip():
        raise EmptyAbstract(f"article {article.id!r} has an empty abstract")
    if sel.mode is SelectionMode.ABSTRACT_ONLY:
        return article.abstract
    if sel.mode is SelectionMode.ABSTRACT_PLUS_INTRO:
        if not article.sections:
            raise NoSections(f"article {article.id!r} has no sections")
        intro = next(
            (body for heading, body in article.sections if "introduction" in heading.lower()),
            article.sections[0][1],
        )
        return f"{article.abstract}\n\n{intro}"
    words = full_text(article).split()
    return " ".join(words[: sel.word_budget])


def compute_stats(corpus: list[Article]) -> CorpusStats:
    """Mean document/summary lengths, counted with the shared tokenizer."""
    if not corpus:
        raise EmptyCorpus("cannot compute statistics of an empty corpus")
    missing = [a.id for a in corpus if not a.reference_summary]
    if missing:
        raise MissingReferences(f"articles without reference summaries: {missing[:5]}")
    doc_words = []
    summary_words = []
    summary_sents = []
    for article in corpus:
        doc_words.append(textproc.tokenize(full_text(article)).word_count)
        summary = textproc.tokenize(article.reference_summary)
        summary_words.append(summary.word_count)
        summary_sents.append(summary.sentence_count)
    return CorpusStats(
        doc_count=len(corpus),
        avg_doc_words=fmean(doc_words),
        avg_summary_words=fmean(summary_words),
        avg_summary_sentences=fmean(summary_sents),
    )
