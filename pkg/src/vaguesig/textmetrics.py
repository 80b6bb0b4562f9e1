"""Report-level text measures from sentences and per-sentence tone labels.

Turns raw report text into sentences and computes, per report: tone
(share of positive minus share of negative sentences), the share of
sentences with no '$' or '%' character, and the share of sentences
containing a hedging expression. Per-sentence tone labels normally come
from an external classifier; a small wordlist fallback is included as
plumbing for unlabeled text.
"""

from __future__ import annotations

import io
import json
import re
import warnings
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .lexicons import (
    CATEGORIES,
    DEFAULT_HEDGE_PATTERNS,
    INFLECTIONS,
    NEGATIVE_WORDS,
    POSITIVE_WORDS,
)
from .roughset import ToneClass

__all__ = [
    "Sentence",
    "Lexicon",
    "LexiconEntry",
    "ReportMetrics",
    "Report",
    "EmptyReportError",
    "LexiconParseError",
    "CorpusFormatError",
    "segment_sentences",
    "has_numeric",
    "has_hedge",
    "load_lexicon",
    "default_lexicon",
    "lexicon_to_text",
    "naive_tone",
    "report_metrics",
    "load_corpus",
]


class EmptyReportError(ValueError):
    """Raised for reports with no usable sentence content."""


class LexiconParseError(ValueError):
    """Raised for malformed lexicon files; carries the offending line number."""


class CorpusFormatError(ValueError):
    """Raised for malformed corpus files; carries the offending line number."""


@dataclass(frozen=True)
class Sentence:
    """One sentence of a report, with its position within the report."""

    text: str
    index: int = 0

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise EmptyReportError("sentence is empty after trimming")


# Tokens ending in '.' that do not close a sentence.
ABBREVIATIONS = frozenset(
    """
    inc. corp. co. ltd. llc. plc. vs. v. u.s. u.k. e.u. no. mr. mrs. ms. dr.
    jr. sr. st. est. fig. e.g. i.e. cf. al. approx. q1. q2. q3. q4.
    jan. feb. mar. apr. jun. jul. aug. sep. sept. oct. nov. dec.
    """.split()
)

_TERMINALS = ".!?"
_CLOSERS = "\"')]}"
_TOKEN_RE = re.compile(r"[a-z0-9]+(?:'[a-z0-9]+)?")


def segment_sentences(text: str) -> list[Sentence]:
    """Split text on terminal punctuation with abbreviation and decimal guards.

    A terminal run ('.', '!', '?', possibly repeated and followed by closing
    quotes or brackets) ends a sentence only when followed by whitespace or
    the end of the text. A '.' is additionally guarded when it sits between
    two digits or when the token it closes is a known abbreviation.
    """
    if text is None or not text.strip():
        raise EmptyReportError("report text is empty")
    sentences: list[Sentence] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] not in _TERMINALS:
            i += 1
            continue
        j = i
        while j + 1 < n and text[j + 1] in _TERMINALS:
            j += 1
        k = j
        while k + 1 < n and text[k + 1] in _CLOSERS:
            k += 1
        followed_by_space = k + 1 >= n or text[k + 1].isspace()
        guarded = False
        if text[i] == "." and j == i:
            if 0 < i < n - 1 and text[i - 1].isdigit() and text[i + 1].isdigit():
                guarded = True
            else:
                w = i
                while w > 0 and not text[w - 1].isspace():
                    w -= 1
                token = text[w : i + 1].lstrip("\"'([{")
                if token.lower() in ABBREVIATIONS:
                    guarded = True
        if followed_by_space and not guarded:
            piece = text[start : k + 1].strip()
            if piece:
                sentences.append(Sentence(piece, len(sentences)))
            start = k + 1
            i = k + 1
        else:
            i = j + 1
    tail = text[start:].strip()
    if tail:
        sentences.append(Sentence(tail, len(sentences)))
    if not sentences:
        raise EmptyReportError("report text contains no sentences")
    return sentences


def has_numeric(sentence: Sentence) -> bool:
    """True when the sentence carries a '$' or '%' character; the text-only
    flag is its negation."""
    return "$" in sentence.text or "%" in sentence.text


def _tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def _expand_parens(pattern: str) -> list[str]:
    # "approximate(ly)" covers the bare and suffixed form
    m = re.fullmatch(r"(.*?)\((\w+)\)", pattern)
    if m:
        return [m.group(1), m.group(1) + m.group(2)]
    return [pattern]


def _expand_slashes(pattern: str) -> list[str]:
    parts = [tok.split("/") for tok in pattern.split()]
    return [" ".join(combo) for combo in product(*parts)]


def _expand_inflections(tokens: tuple[str, ...]) -> set[tuple[str, ...]]:
    variants = {tokens}
    for pos, tok in enumerate(tokens):
        extra = INFLECTIONS.get(tok)
        if not extra:
            continue
        for base in list(variants):
            for form in extra:
                variants.add(base[:pos] + (form,) + base[pos + 1 :])
    return variants


@dataclass(frozen=True)
class LexiconEntry:
    category: str
    pattern: str
    variants: tuple[tuple[str, ...], ...]


class Lexicon:
    """Hedging patterns with pre-expanded, token-level surface variants.

    Matching is case-insensitive, respects token boundaries, and treats
    multiword patterns as contiguous token sequences. Instances are
    read-only after construction and safe to share.
    """

    def __init__(self, entries: Iterable[LexiconEntry]):
        self.entries: tuple[LexiconEntry, ...] = tuple(entries)
        index: dict[str, list[tuple[str, ...]]] = {}
        for entry in self.entries:
            for variant in entry.variants:
                index.setdefault(variant[0], []).append(variant)
        self._index = {k: tuple(v) for k, v in index.items()}

    def __len__(self) -> int:
        return len(self.entries)

    def patterns(self) -> list[tuple[str, str]]:
        return [(e.category, e.pattern) for e in self.entries]

    def matches(self, tokens: Sequence[str]) -> bool:
        for pos, tok in enumerate(tokens):
            for variant in self._index.get(tok, ()):
                if tuple(tokens[pos : pos + len(variant)]) == variant:
                    return True
        return False


def _build_entries(
    pairs: Iterable[tuple[str, str]], source: str
) -> list[LexiconEntry]:
    entries: list[LexiconEntry] = []
    seen: set[tuple[str, str]] = set()
    for category, raw in pairs:
        pattern = " ".join(raw.split()).lower()
        key = (category, pattern)
        if key in seen:
            warnings.warn(f"duplicate lexicon entry {pattern!r} in {source}")
            continue
        seen.add(key)
        variants: set[tuple[str, ...]] = set()
        for no_paren in _expand_parens(pattern):
            for alt in _expand_slashes(no_paren):
                tokens = tuple(_tokenize(alt))
                if tokens:
                    variants.update(_expand_inflections(tokens))
        entries.append(LexiconEntry(category, pattern, tuple(sorted(variants))))
    return entries


def load_lexicon(source) -> Lexicon:
    """Load a lexicon from a path or file object.

    One entry per line as ``category<TAB>pattern``; '#' begins a comment
    line; blank lines are ignored. Unknown categories and malformed lines
    raise with the line number.
    """
    if hasattr(source, "read"):
        lines = source.read().splitlines()
        name = getattr(source, "name", "<stream>")
    else:
        name = str(source)
        with io.open(source, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    pairs: list[tuple[str, str]] = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "\t" not in stripped:
            raise LexiconParseError(
                f"{name}:{lineno}: expected 'category<TAB>pattern'"
            )
        category, pattern = stripped.split("\t", 1)
        category = category.strip()
        pattern = pattern.strip()
        if category not in CATEGORIES:
            raise LexiconParseError(
                f"{name}:{lineno}: unknown category {category!r}; "
                f"expected one of {', '.join(CATEGORIES)}"
            )
        if not pattern:
            raise LexiconParseError(f"{name}:{lineno}: empty pattern")
        pairs.append((category, pattern))
    return Lexicon(_build_entries(pairs, name))


def default_lexicon() -> Lexicon:
    """The bundled hedging lexicon with all notation expanded."""
    return Lexicon(_build_entries(DEFAULT_HEDGE_PATTERNS, "<default>"))


def lexicon_to_text(lexicon: Lexicon) -> str:
    """Serialize a lexicon in the loadable ``category<TAB>pattern`` format."""
    lines = ["# hedging lexicon: category<TAB>pattern, lemmatized form"]
    lines += [f"{e.category}\t{e.pattern}" for e in lexicon.entries]
    return "\n".join(lines) + "\n"


def has_hedge(sentence: Sentence, lexicon: Lexicon) -> bool:
    return lexicon.matches(_tokenize(sentence.text))


def naive_tone(sentence: Sentence) -> ToneClass:
    """Sign of positive minus negative wordlist hits; a crude fallback for
    text that arrives without external per-sentence labels."""
    tokens = _tokenize(sentence.text)
    score = sum(t in POSITIVE_WORDS for t in tokens) - sum(
        t in NEGATIVE_WORDS for t in tokens
    )
    if score > 0:
        return ToneClass.POSITIVE
    if score < 0:
        return ToneClass.NEGATIVE
    return ToneClass.NEUTRAL


@dataclass(frozen=True)
class ReportMetrics:
    """Per-report shares; tone equals pos_pct minus neg_pct exactly."""

    n_sentences: int
    tone: float
    pos_pct: float
    neg_pct: float
    text_only_pct: float
    hedge_pct: float


def report_metrics(
    sentences: Sequence[Sentence],
    labels: Sequence[ToneClass],
    lexicon: Lexicon,
) -> ReportMetrics:
    """Aggregate per-sentence labels and features into report-level shares."""
    if len(sentences) != len(labels):
        raise ValueError(
            f"{len(sentences)} sentences but {len(labels)} tone labels"
        )
    n = len(sentences)
    if n == 0:
        raise EmptyReportError("report has no sentences")
    n_pos = sum(1 for lab in labels if lab == ToneClass.POSITIVE)
    n_neg = sum(1 for lab in labels if lab == ToneClass.NEGATIVE)
    n_text_only = sum(1 for s in sentences if not has_numeric(s))
    n_hedged = sum(1 for s in sentences if has_hedge(s, lexicon))
    pos_pct = n_pos / n
    neg_pct = n_neg / n
    return ReportMetrics(
        n_sentences=n,
        tone=pos_pct - neg_pct,
        pos_pct=pos_pct,
        neg_pct=neg_pct,
        text_only_pct=n_text_only / n,
        hedge_pct=n_hedged / n,
    )


# ---------------------------------------------------------------------------
# Corpus input (JSONL, one report per line; see README for the schema)

_LABEL_NAMES = {
    "positive": ToneClass.POSITIVE,
    "neutral": ToneClass.NEUTRAL,
    "negative": ToneClass.NEGATIVE,
}


def _parse_label(value, where: str) -> ToneClass:
    if isinstance(value, str):
        try:
            return _LABEL_NAMES[value.strip().lower()]
        except KeyError:
            raise CorpusFormatError(f"{where}: unknown tone label {value!r}")
    if value in (-1, 0, 1):
        return ToneClass(int(value))
    raise CorpusFormatError(f"{where}: unknown tone label {value!r}")


@dataclass
class Report:
    report_id: str
    sentences: list[Sentence]
    labels: list[ToneClass] | None
    analyst_id: str | None = None
    firm_id: str | None = None
    date: str | None = None


def load_corpus(source) -> list[Report]:
    """Read a JSONL corpus; each line is a labeled report or raw text."""
    if hasattr(source, "read"):
        lines = source.read().splitlines()
        name = getattr(source, "name", "<stream>")
    else:
        name = str(source)
        with io.open(source, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    reports: list[Report] = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        where = f"{name}:{lineno}"
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"{where}: invalid JSON ({exc.msg})")
        if not isinstance(record, dict):
            raise CorpusFormatError(f"{where}: expected a JSON object")
        report_id = str(record.get("report_id", f"r{lineno}"))
        if "sentences" in record:
            sentences: list[Sentence] = []
            labels: list[ToneClass | None] = []
            for idx, item in enumerate(record["sentences"]):
                if not isinstance(item, dict) or "text" not in item:
                    raise CorpusFormatError(
                        f"{where}: sentence {idx} must be an object with 'text'"
                    )
                try:
                    sentences.append(Sentence(str(item["text"]), idx))
                except EmptyReportError:
                    raise CorpusFormatError(f"{where}: sentence {idx} is empty")
                if "tone_label" in item:
                    labels.append(_parse_label(item["tone_label"], where))
                else:
                    labels.append(None)
            if not sentences:
                raise CorpusFormatError(f"{where}: report has no sentences")
            complete = all(lab is not None for lab in labels)
        elif "text" in record:
            try:
                sentences = segment_sentences(str(record["text"]))
            except EmptyReportError:
                raise CorpusFormatError(f"{where}: report text is empty")
            labels = [None] * len(sentences)
            complete = False
        else:
            raise CorpusFormatError(
                f"{where}: report needs either 'sentences' or 'text'"
            )
        reports.append(
            Report(
                report_id=report_id,
                sentences=sentences,
                labels=[lab for lab in labels] if complete else None,
                analyst_id=record.get("analyst_id"),
                firm_id=record.get("firm_id"),
                date=record.get("date"),
            )
        )
    return reports
