"""Deterministic text primitives shared by every metric.

Tokenization lowercases and keeps maximal alphanumeric runs (hyphens and
apostrophes split tokens), sentence boundaries are rule-based with a fixed
abbreviation list, and stemming is the Porter algorithm in two flavours:
the official-vocabulary behaviour used by ``porter_stem`` and a
ROUGE-compatible variant used by the relevance metrics.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .errors import InvalidToken

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_VOWELS = frozenset("aeiou")
_SYLLABLE_VOWELS = frozenset("aeiouy")

# Official-vocabulary mode (Martin Porter's reference implementations) vs
# the NLTK-extensions mode used by the reference ROUGE tool.
MARTIN = "martin"
NLTK_COMPAT = "nltk"


def _load_asset_lines(name: str) -> tuple[str, ...]:
    text = resources.files("laypress.assets").joinpath(name).read_text("utf-8")
    return tuple(line.strip() for line in text.splitlines() if line.strip())


@lru_cache(maxsize=1)
def abbreviations() -> frozenset[str]:
    """Sentence-guard abbreviations, lowercase, no trailing dot.

    Multi-word entries (``et al``) guard on their final word.
    """
    entries = set()
    for line in _load_asset_lines("abbreviations.txt"):
        entries.add(line)
        entries.add(line.split()[-1])
    return frozenset(entries)


@dataclass(frozen=True)
class TokenizedText:
    """Token stream plus sentence partition of one text.

    ``sentences`` holds half-open ``(start, end)`` token-index ranges that
    partition ``[0, len(tokens))``; empty text has no tokens and no
    sentences.
    """

    raw: str
    tokens: tuple[str, ...] = ()
    sentences: tuple[tuple[int, int], ...] = field(default=())

    @property
    def word_count(self) -> int:
        return len(self.tokens)

    @property
    def sentence_count(self) -> int:
        return len(self.sentences)

    def sentence_tokens(self):
        """Yield the token tuple of each sentence in order."""
        for start, end in self.sentences:
            yield self.tokens[start:end]


def _normalize(text: str) -> str:
    """NFC-normalize, transliterate accented latin letters, blank the rest."""
    text = unicodedata.normalize("NFC", text)
    if text.isascii():
        return text
    out = []
    for ch in text:
        if ord(ch) < 128:
            out.append(ch)
            continue
        base = next(
            (c for c in unicodedata.normalize("NFKD", ch) if ord(c) < 128 and c.isalnum()),
            None,
        )
        out.append(base if base is not None else " ")
    return "".join(out)


def tokenize(text: str) -> TokenizedText:
    """Tokenize any unicode string; empty input gives an empty result."""
    normalized = _normalize(text).lower()
    spans = [(m.start(), m.end(), m.group()) for m in _TOKEN_RE.finditer(normalized)]
    tokens = tuple(s[2] for s in spans)
    if not tokens:
        return TokenizedText(raw=text)

    abbrevs = abbreviations()
    breaks = []  # token index i means a sentence ends after token i-1
    for idx in range(len(spans) - 1):
        gap_start, gap_end = spans[idx][1], spans[idx + 1][0]
        gap = normalized[gap_start:gap_end]
        if _gap_breaks_sentence(normalized, gap, gap_start, abbrevs):
            breaks.append(idx + 1)

    bounds = [0, *breaks, len(tokens)]
    sentences = tuple(
        (bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1) if bounds[i] < bounds[i + 1]
    )
    return TokenizedText(raw=text, tokens=tokens, sentences=sentences)


def _gap_breaks_sentence(text: str, gap: str, gap_start: int, abbrevs: frozenset[str]) -> bool:
    """True when the inter-token gap contains a terminal mark plus whitespace."""
    match = re.search(r"[.!?]+(?=[\"')\]]*\s)", gap)
    if not match:
        return False
    mark = match.group()
    if "!" in mark or "?" in mark:
        return True
    # Look back from the first dot to the word chunk carrying it.
    dot_pos = gap_start + match.start()
    chunk_start = dot_pos
    while chunk_start > 0 and not text[chunk_start - 1].isspace():
        chunk_start -= 1
    chunk = text[chunk_start:dot_pos].rstrip(".").lower()
    return chunk not in abbrevs


class PorterStemmer:
    """Porter suffix-stripping stemmer.

    ``MARTIN`` mode reproduces the official published test vocabulary
    (the algorithm with Porter's own departures: bli->ble, logi->log,
    words of length <= 2 untouched).  ``NLTK_COMPAT`` mode additionally
    applies the irregular-form pool and the revised ies/ied/y rules that
    the reference ROUGE tool's stemmer uses.
    """

    _POOL = {
        "sky": "sky",
        "skies": "sky",
        "dying": "die",
        "lying": "lie",
        "tying": "tie",
        "news": "news",
        "innings": "inning",
        "inning": "inning",
        "outings": "outing",
        "outing": "outing",
        "cannings": "canning",
        "canning": "canning",
        "howe": "howe",
        "proceed": "proceed",
        "exceed": "exceed",
        "succeed": "succeed",
    }

    def __init__(self, mode: str = MARTIN):
        if mode not in (MARTIN, NLTK_COMPAT):
            raise ValueError(f"unknown stemmer mode {mode!r}")
        self.mode = mode

    # -- character classes -------------------------------------------------

    def _cons(self, word: str, i: int) -> bool:
        ch = word[i]
        if ch in _VOWELS:
            return False
        if ch == "y":
            return True if i == 0 else not self._cons(word, i - 1)
        return True

    def _measure(self, stem: str) -> int:
        seq = "".join("c" if self._cons(stem, i) else "v" for i in range(len(stem)))
        return seq.count("vc")

    def _has_vowel(self, stem: str) -> bool:
        return any(not self._cons(stem, i) for i in range(len(stem)))

    def _ends_double_cons(self, word: str) -> bool:
        return len(word) >= 2 and word[-1] == word[-2] and self._cons(word, len(word) - 1)

    def _ends_cvc(self, word: str) -> bool:
        if (
            len(word) >= 3
            and self._cons(word, len(word) - 3)
            and not self._cons(word, len(word) - 2)
            and self._cons(word, len(word) - 1)
            and word[-1] not in "wxy"
        ):
            return True
        return (
            self.mode == NLTK_COMPAT
            and len(word) == 2
            and not self._cons(word, 0)
            and self._cons(word, 1)
        )

    # -- rule machinery ----------------------------------------------------

    def _first_rule(self, word: str, rules) -> str:
        """Apply the first rule whose suffix matches; a failed condition on
        a matching suffix ends the step (longest-match semantics)."""
        for suffix, replacement, condition in rules:
            if suffix == "*d":
                if self._ends_double_cons(word):
                    stem = word[:-2]
                    return stem + replacement if condition is None or condition(stem) else word
                continue
            if word.endswith(suffix):
                stem = word[: len(word) - len(suffix)] if suffix else word
                return stem + replacement if condition is None or condition(stem) else word
        return word

    # -- steps ---------------------------------------------------------------

    def _step1a(self, word: str) -> str:
        if self.mode == NLTK_COMPAT and word.endswith("ies") and len(word) == 4:
            return word[:-3] + "ie"
        return self._first_rule(
            word,
            [("sses", "ss", None), ("ies", "i", None), ("ss", "ss", None), ("s", "", None)],
        )

    def _step1b(self, word: str) -> str:
        if self.mode == NLTK_COMPAT and word.endswith("ied"):
            return word[:-3] + ("ie" if len(word) == 4 else "i")

        if word.endswith("eed"):
            stem = word[:-3]
            return stem + "ee" if self._measure(stem) > 0 else word

        intermediate = None
        for suffix in ("ed", "ing"):
            if word.endswith(suffix):
                stem = word[: -len(suffix)]
                if self._has_vowel(stem):
                    intermediate = stem
                break
        if intermediate is None:
            return word

        last = intermediate[-1]
        return self._first_rule(
            intermediate,
            [
                ("at", "ate", None),
                ("bl", "ble", None),
                ("iz", "ize", None),
                ("*d", last, lambda stem, last=last: last not in "lsz"),
                ("", "e", lambda stem: self._measure(stem) == 1 and self._ends_cvc(stem)),
            ],
        )

    def _step1c(self, word: str) -> str:
        if not word.endswith("y"):
            return word
        stem = word[:-1]
        if self.mode == NLTK_COMPAT:
            applies = len(stem) > 1 and self._cons(stem, len(stem) - 1)
        else:
            applies = self._has_vowel(stem)
        return stem + "i" if applies else word

    def _step2(self, word: str) -> str:
        if (
            self.mode == NLTK_COMPAT
            and word.endswith("alli")
            and self._measure(word[:-4]) > 0
        ):
            return self._step2(word[:-2])

        positive = lambda stem: self._measure(stem) > 0
        rules = [
            ("ational", "ate", positive),
            ("tional", "tion", positive),
            ("enci", "ence", positive),
            ("anci", "ance", positive),
            ("izer", "ize", positive),
            ("bli", "ble", positive),
            ("alli", "al", positive),
            ("entli", "ent", positive),
            ("eli", "e", positive),
            ("ousli", "ous", positive),
            ("ization", "ize", positive),
            ("ation", "ate", positive),
            ("ator", "ate", positive),
            ("alism", "al", positive),
            ("iveness", "ive", positive),
            ("fulness", "ful", positive),
            ("ousness", "ous", positive),
            ("aliti", "al", positive),
            ("iviti", "ive", positive),
            ("biliti", "ble", positive),
        ]
        if self.mode == NLTK_COMPAT:
            rules.append(("fulli", "ful", positive))
        # The 'l' of logi stays with the stem so geo-/theo- work like philo-.
        rules.append(("logi", "log", lambda stem: self._measure(word[:-3]) > 0))
        return self._first_rule(word, rules)

    def _step3(self, word: str) -> str:
        positive = lambda stem: self._measure(stem) > 0
        return self._first_rule(
            word,
            [
                ("icate", "ic", positive),
                ("ative", "", positive),
                ("alize", "al", positive),
                ("iciti", "ic", positive),
                ("ical", "ic", positive),
                ("ful", "", positive),
                ("ness", "", positive),
            ],
        )

    def _step4(self, word: str) -> str:
        gt1 = lambda stem: self._measure(stem) > 1
        return self._first_rule(
            word,
            [
                ("al", "", gt1),
                ("ance", "", gt1),
                ("ence", "", gt1),
                ("er", "", gt1),
                ("ic", "", gt1),
                ("able", "", gt1),
                ("ible", "", gt1),
                ("ant", "", gt1),
                ("ement", "", gt1),
                ("ment", "", gt1),
                ("ent", "", gt1),
                ("ion", "", lambda stem: self._measure(stem) > 1 and stem[-1] in "st"),
                ("ou", "", gt1),
                ("ism", "", gt1),
                ("ate", "", gt1),
                ("iti", "", gt1),
                ("ous", "", gt1),
                ("ive", "", gt1),
                ("ize", "", gt1),
            ],
        )

    def _step5a(self, word: str) -> str:
        if word.endswith("e"):
            stem = word[:-1]
            m = self._measure(stem)
            if m > 1 or (m == 1 and not self._ends_cvc(stem)):
                return stem
        return word

    def _step5b(self, word: str) -> str:
        if word.endswith("ll") and self._measure(word[:-1]) > 1:
            return word[:-1]
        return word

    def stem(self, word: str) -> str:
        if self.mode == NLTK_COMPAT and word in self._POOL:
            return self._POOL[word]
        if len(word) <= 2:
            return word
        for step in (
            self._step1a,
            self._step1b,
            self._step1c,
            self._step2,
            self._step3,
            self._step4,
            self._step5a,
            self._step5b,
        ):
            word = step(word)
        return word


_MARTIN_STEMMER = PorterStemmer(MARTIN)
_NLTK_STEMMER = PorterStemmer(NLTK_COMPAT)


def porter_stem(token: str, *, nltk_compat: bool = False) -> str:
    """Stem one lowercase word; raises InvalidToken on empty input."""
    if not token:
        raise InvalidToken("cannot stem an empty token")
    stemmer = _NLTK_STEMMER if nltk_compat else _MARTIN_STEMMER
    return stemmer.stem(token)


def count_syllables(word: str) -> int:
    """Vowel-group syllable heuristic, floored at one.

    Counts maximal runs of a/e/i/o/u/y, subtracts a silent trailing 'e'
    (kept in '-le' endings after a consonant), never returns less than 1.
    """
    if not word:
        raise InvalidToken("cannot count syllables of an empty word")
    letters = "".join(ch for ch in word if not ch.isdigit())
    if not letters:
        return 1
    count = 0
    previous_vowel = False
    for ch in letters:
        is_vowel = ch in _SYLLABLE_VOWELS
        if is_vowel and not previous_vowel:
            count += 1
        previous_vowel = is_vowel
    if letters.endswith("e"):
        count -= 1
    if letters.endswith("le") and len(letters) > 2 and letters[-3] not in _SYLLABLE_VOWELS:
        count += 1
    return max(count, 1)
