"""Prompt construction and the one- and two-stage summary pipelines.

Templates live as repository assets with {questions}, {article} and
{question_answers} slots.  Ablation variants are produced strictly by
deleting text from the two-stage templates, so they are subsequences of
the full prompts by construction.
"""

from __future__ import annotations

import datetime as _dt
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources

from . import corpus as corpus_mod
from .errors import EmptyArticle, MissingAnswers, UnparseableAnswers
from .gateway import ChatMessage, CompletionRequest, CompletionResponse, Gateway, user_message

AUTHOR_ROLE_SENTENCE = (
    "You are the author of the given research article tasked with answering the "
    "following questions about your work. "
)
WRITER_ROLE_SENTENCE = (
    "You are a freelance writer, tasked with summarising a biomedical research "
    "article for a lay audience. "
)
WRITER_GUIDELINES = (
    "Your summary should be between 300 and 400 words and contain minimal jargon, "
    "often using words and phrases that aren't present in the article. The first "
    "half of your summary should focus on explaining the background information "
    "that a lay audience will require, and the second half should explain the key "
    "experiments and results, finishing with a concluding sentence about the "
    "significance of the article."
)
RETRY_SUFFIX = "Number your answers 1-4."

WORD_RANGE = (300, 400)


class MethodVariant(str, Enum):
    BASELINE = "baseline"
    TWO_STAGE = "two_stage"
    NO_GUIDES = "no_guides"
    NO_ROLES = "no_roles"
    SINGLE_PROMPT = "single_prompt"

    @property
    def is_two_stage(self) -> bool:
        return self in (
            MethodVariant.TWO_STAGE,
            MethodVariant.NO_GUIDES,
            MethodVariant.NO_ROLES,
        )


@dataclass(frozen=True)
class AuthorQuestion:
    ordinal: int
    question: str
    guidance: tuple[str, ...]
    word_limit: int


@dataclass(frozen=True)
class AuthorAnswers:
    answers: dict[int, str]
    degraded: bool = False


@dataclass
class SummaryRecord:
    article_id: str
    variant: MethodVariant
    model_id: str
    input_selection: corpus_mod.InputSelection
    summary: str
    transcripts: list[tuple[CompletionRequest, CompletionResponse]]
    author_answers: AuthorAnswers | None = None
    created_at: str = field(default_factory=lambda: _dt.datetime.now(_dt.timezone.utc).isoformat())

    def to_json(self) -> dict:
        return {
            "article_id": self.article_id,
            "variant": self.variant.value,
            "model_id": self.model_id,
            "input_selection": {
                "mode": self.input_selection.mode.value,
                "word_budget": self.input_selection.word_budget,
            },
            "summary": self.summary,
            "author_answers": None
            if self.author_answers is None
            else {
                "answers": {str(k): v for k, v in self.author_answers.answers.items()},
                "degraded": self.author_answers.degraded,
            },
            "transcripts": [
                {
                    "request": {
                        "model_id": req.model_id,
                        "messages": [{"role": m.role, "content": m.content} for m in req.messages],
                        "temperature": req.temperature,
                        "max_tokens": req.max_tokens,
                        "seed": req.seed,
                    },
                    "response": resp.to_json(),
                }
                for req, resp in self.transcripts
            ],
            "created_at": self.created_at,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SummaryRecord":
        answers = obj.get("author_answers")
        return cls(
            article_id=obj["article_id"],
            variant=MethodVariant(obj["variant"]),
            model_id=obj["model_id"],
            input_selection=corpus_mod.InputSelection(
                mode=corpus_mod.SelectionMode(obj["input_selection"]["mode"]),
                word_budget=obj["input_selection"].get("word_budget"),
            ),
            summary=obj["summary"],
            author_answers=None
            if answers is None
            else AuthorAnswers(
                answers={int(k): v for k, v in answers["answers"].items()},
                degraded=answers.get("degraded", False),
            ),
            transcripts=[
                (
                    CompletionRequest(
                        model_id=tr["request"]["model_id"],
                        messages=tuple(
                            ChatMessage(role=m["role"], content=m["content"])
                            for m in tr["request"]["messages"]
                        ),
                        temperature=tr["request"]["temperature"],
                        max_tokens=tr["request"]["max_tokens"],
                        seed=tr["request"].get("seed"),
                    ),
                    CompletionResponse.from_json(tr["response"]),
                )
                for tr in obj.get("transcripts", [])
            ],
            created_at=obj.get("created_at", ""),
        )


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: object = None

    def __str__(self):
        return self.kind if self.detail is None else f"{self.kind}({self.detail})"


@lru_cache(maxsize=None)
def _template(name: str) -> str:
    return resources.files("laypress.assets.prompts").joinpath(name).read_text("utf-8").rstrip("\n")


@lru_cache(maxsize=1)
def questions_block() -> str:
    return _template("questions.txt")


@lru_cache(maxsize=1)
def author_questions() -> tuple[AuthorQuestion, ...]:
    """Parse the questions asset into structured form."""
    heading_re = re.compile(r"^([1-4])\. (.*) \(Suggested word limit: (\d+) words\)$")
    questions = []
    ordinal = question = limit = None
    guidance: list[str] = []
    for line in questions_block().splitlines():
        line = line.strip()
        m = heading_re.match(line)
        if m:
            if ordinal is not None:
                questions.append(AuthorQuestion(ordinal, question, tuple(guidance), limit))
            ordinal, question, limit = int(m.group(1)), m.group(2), int(m.group(3))
            guidance = []
        elif line.startswith("- "):
            guidance.append(line[2:])
    questions.append(AuthorQuestion(ordinal, question, tuple(guidance), limit))
    if [q.ordinal for q in questions] != [1, 2, 3, 4]:
        raise ValueError("questions asset must define ordinals 1-4 in order")
    return tuple(questions)


def _delete_once(text: str, needle: str) -> str:
    if text.count(needle) != 1:
        raise ValueError(f"ablation needle not unique in template: {needle[:40]!r}...")
    return text.replace(needle, "", 1)


# Wrapping modes: backends differ in how they want instructions delivered,
# so the same prompt bytes can ship as one user message (default) or as a
# system message holding the leading paragraph plus a user message with
# the rest.
WRAP_USER = "user"
WRAP_SYSTEM_USER = "system_user"


def _wrap(content: str, wrap: str = WRAP_USER) -> list[ChatMessage]:
    if wrap == WRAP_USER:
        return [user_message(content)]
    if wrap == WRAP_SYSTEM_USER:
        head, sep, rest = content.partition("\n\n")
        if not sep:
            return [user_message(content)]
        return [ChatMessage(role="system", content=head), user_message(rest)]
    raise ValueError(f"unknown prompt wrap mode {wrap!r}")


def build_author_prompt(
    article_text: str,
    variant: MethodVariant = MethodVariant.TWO_STAGE,
    wrap: str = WRAP_USER,
) -> list[ChatMessage]:
    """Stage-1 prompt: role paragraph, the four questions, then the article."""
    if not article_text:
        raise EmptyArticle("author prompt needs article text")
    template = _template("author.txt")
    if variant is MethodVariant.NO_ROLES:
        template = _delete_once(template, AUTHOR_ROLE_SENTENCE)
    content = template.replace("{questions}", questions_block()).replace("{article}", article_text)
    return _wrap(content, wrap)


def build_writer_prompt(
    article_text: str,
    answers: AuthorAnswers | None,
    variant: MethodVariant = MethodVariant.TWO_STAGE,
    wrap: str = WRAP_USER,
) -> list[ChatMessage]:
    """Stage-2 prompt, ablated per variant; SinglePrompt merges both stages."""
    if not article_text:
        raise EmptyArticle("writer prompt needs article text")
    if variant is MethodVariant.SINGLE_PROMPT:
        content = (
            _template("single_prompt.txt")
            .replace("{questions}", questions_block())
            .replace("{article}", article_text)
        )
        return _wrap(content, wrap)
    if not variant.is_two_stage:
        raise ValueError(f"no writer prompt for variant {variant.value}")
    if answers is None or not answers.answers:
        raise MissingAnswers("two-stage writer prompt requires author answers")
    template = _template("writer.txt")
    if variant is MethodVariant.NO_GUIDES:
        template = _delete_once(template, " " + WRITER_GUIDELINES)
    elif variant is MethodVariant.NO_ROLES:
        template = _delete_once(template, WRITER_ROLE_SENTENCE)
    block = format_answers(answers)
    content = template.replace("{article}", article_text).replace("{question_answers}", block)
    return _wrap(content, wrap)


def build_baseline_prompt(article_text: str, wrap: str = WRAP_USER) -> list[ChatMessage]:
    if not article_text:
        raise EmptyArticle("baseline prompt needs article text")
    return _wrap(_template("baseline.txt").replace("{article}", article_text), wrap)


def format_answers(answers: AuthorAnswers) -> str:
    return "\n\n".join(f"{k}. {answers.answers[k]}" for k in sorted(answers.answers))


_HEADING_RE = re.compile(r"^[ \t]*([1-4])[.)][ \t]*", re.MULTILINE)


def parse_author_answers(response: str) -> AuthorAnswers:
    """Split a stage-1 response into the four numbered answers.

    Looks for ``1.`` .. ``4.`` headings at line starts, falling back to
    restated question prefixes; anything else is Unparseable.
    """
    if not response:
        raise UnparseableAnswers("empty author response")
    segments = _segments_by_headings(response)
    if segments is None:
        segments = _segments_by_questions(response)
    if segments is None:
        raise UnparseableAnswers("could not locate four numbered answers")
    return AuthorAnswers(answers=segments)


def _segments_by_headings(response: str) -> dict[int, str] | None:
    marks = [(int(m.group(1)), m.start(), m.end()) for m in _HEADING_RE.finditer(response)]
    ordered = []
    expected = 1
    for ordinal, start, end in marks:
        if ordinal == expected:
            ordered.append((ordinal, start, end))
            expected += 1
            if expected > 4:
                break
    if len(ordered) != 4:
        return None
    segments = {}
    for idx, (ordinal, _, end) in enumerate(ordered):
        stop = ordered[idx + 1][1] if idx + 1 < len(ordered) else len(response)
        segments[ordinal] = response[end:stop].strip()
    if any(not text for text in segments.values()):
        return None
    return segments


def _segments_by_questions(response: str) -> dict[int, str] | None:
    positions = []
    for q in author_questions():
        prefix = q.question[:40]
        at = response.find(prefix)
        if at < 0:
            return None
        positions.append((q.ordinal, at, at + len(prefix)))
    if [p[0] for p in sorted(positions, key=lambda p: p[1])] != [1, 2, 3, 4]:
        return None
    segments = {}
    for idx, (ordinal, start, end) in enumerate(positions):
        stop = positions[idx + 1][1] if idx + 1 < len(positions) else len(response)
        rest = response[end:stop]
        # drop the remainder of the restated question line
        rest = rest.split("\n", 1)[1] if "\n" in rest else ""
        segments[ordinal] = rest.strip()
    if any(not text for text in segments.values()):
        return None
    return segments


def check_guidelines(summary: str) -> list[Violation]:
    """Advisory checks against the writer guidelines; never raises."""
    violations = []
    words = len(summary.split())
    if words == 0:
        violations.append(Violation("empty"))
    elif words < WORD_RANGE[0]:
        violations.append(Violation("too_short", words))
    elif words > WORD_RANGE[1]:
        violations.append(Violation("too_long", words))
    if "### " in summary:
        violations.append(Violation("prompt_leakage"))
    return violations


def _attribute(exc: Exception, stage: str) -> Exception:
    exc.stage = stage
    return exc


def run_pipeline(
    article: corpus_mod.Article,
    sel: corpus_mod.InputSelection,
    variant: MethodVariant,
    model_id: str,
    gw: Gateway,
    temperature: float = 0.0,
    max_tokens: int = 2048,
    seed: int | None = None,
    wrap: str = WRAP_USER,
) -> SummaryRecord:
    """Run one article through one variant, recording every transcript."""
    article_text = corpus_mod.select_input(article, sel)
    transcripts: list[tuple[CompletionRequest, CompletionResponse]] = []

    def complete(messages: list[ChatMessage], stage: str) -> CompletionResponse:
        req = CompletionRequest(
            model_id=model_id,
            messages=tuple(messages),
            temperature=temperature,
            max_tokens=max_tokens,
            seed=seed,
        )
        try:
            resp = gw.complete(req)
        except Exception as exc:
            raise _attribute(exc, stage)
        transcripts.append((req, resp))
        return resp

    answers = None
    if variant is MethodVariant.BASELINE:
        summary = complete(build_baseline_prompt(article_text, wrap), "baseline").text
    elif variant is MethodVariant.SINGLE_PROMPT:
        summary = complete(
            build_writer_prompt(article_text, None, variant, wrap), "single_prompt"
        ).text
    else:
        author_messages = build_author_prompt(article_text, variant, wrap)
        response = complete(author_messages, "author")
        try:
            answers = parse_author_answers(response.text)
        except UnparseableAnswers:
            retry = [
                *author_messages[:-1],
                user_message(author_messages[-1].content + "\n\n" + RETRY_SUFFIX),
            ]
            response = complete(retry, "author")
            try:
                answers = parse_author_answers(response.text)
            except UnparseableAnswers:
                answers = AuthorAnswers(answers={1: response.text.strip()}, degraded=True)
        summary = complete(build_writer_prompt(article_text, answers, variant, wrap), "writer").text

    return SummaryRecord(
        article_id=article.id,
        variant=variant,
        model_id=model_id,
        input_selection=sel,
        summary=summary,
        transcripts=transcripts,
        author_answers=answers,
    )


def write_records(records: list[SummaryRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json(), ensure_ascii=False) + "\n")


def load_records(path) -> list[SummaryRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(SummaryRecord.from_json(json.loads(line)))
    return records
