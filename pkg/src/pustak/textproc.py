"""Text analysis: normalization, tokenization, stopword removal, stemming.

The same pipeline runs over indexed book text and over query text, so a
query stem always lines up with an index stem. Stopword and suffix lists
ship as data files (see data/) and are hashed into the index manifest;
swapping them requires re-indexing, never a code change.
"""

from __future__ import annotations

import hashlib
import re
import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .corpus import LANGUAGES, Book

#: Devanagari letters excluded from Unicode composition: NFC leaves these as
#: base + nukta pairs, which breaks exact matching, so we recompose by hand.
_NUKTA_COMPOSED = {
    "क़": "क़",  # क़
    "ख़": "ख़",  # ख़
    "ग़": "ग़",  # ग़
    "ज़": "ज़",  # ज़
    "ड़": "ड़",  # ड़
    "ढ़": "ढ़",  # ढ़
    "फ़": "फ़",  # फ़
    "य़": "य़",  # य़
}

_ZERO_WIDTH = re.compile("[‌‍]")
_WS_RUN = re.compile(r"\s+")


def normalize(text: str) -> str:
    """Canonicalize text: NFC, zero-width joiners stripped, nukta pairs
    composed to their precomposed letters, whitespace runs collapsed."""
    text = unicodedata.normalize("NFC", text)
    text = _ZERO_WIDTH.sub("", text)
    text = unicodedata.normalize("NFC", text)
    for pair, composed in _NUKTA_COMPOSED.items():
        if pair in text:
            text = text.replace(pair, composed)
    return _WS_RUN.sub(" ", text).strip()


@lru_cache(maxsize=8192)
def _char_class(ch: str) -> int:
    # 2 = letter, 1 = mark/digit (token-internal), 0 = delimiter
    major = unicodedata.category(ch)[0]
    if major == "L":
        return 2
    if major in ("M", "N"):
        return 1
    return 0


def tokenize(text: str, lang: str = "hi") -> list[tuple[str, tuple[int, int]]]:
    """Split normalized text into (surface, (start, end)) pairs.

    A token is a maximal run of letter/mark/digit characters containing at
    least one letter; spans index the input string.
    """
    out = []
    start = None
    has_letter = False
    for i, ch in enumerate(text):
        cls = _char_class(ch)
        if cls:
            if start is None:
                start = i
                has_letter = False
            if cls == 2:
                has_letter = True
        else:
            if start is not None and has_letter:
                out.append((text[start:i], (start, i)))
            start = None
    if start is not None and has_letter:
        out.append((text[start:], (start, len(text))))
    return out


@dataclass(frozen=True)
class AnalyzerConfig:
    """Per-language analysis data: stopword stems and suffix-strip rules.

    suffix_rules are (suffix, min_stem_len) pairs ordered longest suffix
    first; min_stem_len bounds the surviving stem in code points.
    """

    language: str
    stopword_list: frozenset[str]
    suffix_rules: tuple[tuple[str, int], ...]

    def __post_init__(self):
        lens = [len(s) for s, _ in self.suffix_rules]
        if lens != sorted(lens, reverse=True):
            raise ValueError("suffix_rules must be ordered longest first")
        if any(m < 1 for _, m in self.suffix_rules):
            raise ValueError("min_stem_len must be >= 1")
        # length-bucketed lookup so stemming is O(#distinct lengths)
        buckets: dict[int, dict[str, int]] = {}
        for suffix, min_len in self.suffix_rules:
            buckets.setdefault(len(suffix), {}).setdefault(suffix, min_len)
        object.__setattr__(
            self, "_by_length",
            tuple(sorted(buckets.items(), key=lambda kv: -kv[0])),
        )


def stem(surface: str, config: AnalyzerConfig) -> str:
    """Strip the longest matching suffix once, keeping at least
    min_stem_len characters; otherwise return the surface unchanged."""
    n = len(surface)
    for length, table in config._by_length:
        if n <= length:
            continue
        min_len = table.get(surface[n - length:])
        if min_len is not None and n - length >= min_len:
            return surface[: n - length]
    return surface


@dataclass(frozen=True)
class LineToken:
    """Analysis of one token in one line, before position assignment."""

    surface: str
    stem: str
    char_span: tuple[int, int]
    is_stopword: bool


def analyze_line(text: str, config: AnalyzerConfig) -> list[LineToken]:
    """Normalize + tokenize + stem one line; stopwords are flagged, not
    dropped, so callers can decide (index drops them, phrases keep them).

    Spans index the *normalized* text, which analyze_line returns tokens
    for; re-normalize the raw line before applying spans.
    """
    norm = normalize(text)
    out = []
    for surface, span in tokenize(norm, config.language):
        st = stem(surface, config)
        out.append(
            LineToken(surface, st, span, is_stopword=st in config.stopword_list)
        )
    return out


@dataclass(frozen=True)
class Token:
    """A position-stamped, indexable token of a book."""

    surface: str
    stem: str
    page_no: int
    line_no: int
    pos: int
    char_span: tuple[int, int]


def remove_stopwords(tokens: Iterable[Token], config: AnalyzerConfig) -> list[Token]:
    """Drop tokens whose stem is a stopword; survivors keep their order."""
    return [t for t in tokens if t.stem not in config.stopword_list]


def analyze_book(book: Book, config: AnalyzerConfig) -> list[Token]:
    """Full-book analysis in page order, line order.

    Global positions are assigned after stopword removal, so surviving
    tokens are consecutively numbered: a phrase query therefore matches
    across an elided stopword.
    """
    tokens = []
    pos = 0
    for page in book.pages:
        for line in page.lines:
            for lt in analyze_line(line.text, config):
                if lt.is_stopword:
                    continue
                tokens.append(
                    Token(lt.surface, lt.stem, page.page_no, line.line_no,
                          pos, lt.char_span)
                )
                pos += 1
    return tokens


# --- analyzer data loading -------------------------------------------------

_DATA_FILES = [f"stopwords.{lang}.txt" for lang in LANGUAGES] + [
    f"suffixes.{lang}.txt" for lang in LANGUAGES
]


def default_data_dir() -> Path:
    return Path(str(resources.files("pustak").joinpath("data")))


def _read_lines(path: Path) -> list[str]:
    lines = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        entry = raw.strip()
        if entry and not entry.startswith("#"):
            lines.append(entry)
    return lines


def analyzer_fingerprint(data_dir: Optional[Path] = None) -> str:
    """SHA-256 over the stopword/suffix files; stored in index manifests so
    a stale index is detected when the data files change."""
    root = data_dir or default_data_dir()
    digest = hashlib.sha256()
    for name in _DATA_FILES:
        digest.update(name.encode("utf-8"))
        digest.update(b"\x00")
        digest.update((root / name).read_bytes())
        digest.update(b"\x00")
    return digest.hexdigest()


def load_analyzer(lang: str, data_dir: Optional[Path] = None) -> AnalyzerConfig:
    """Build one language's AnalyzerConfig from its data files.

    Stopword entries are normalized and stemmed at load so the runtime
    check is stem-against-stem.
    """
    root = data_dir or default_data_dir()
    rules = []
    for entry in _read_lines(root / f"suffixes.{lang}.txt"):
        suffix, _, min_len = entry.partition("\t")
        rules.append((normalize(suffix), int(min_len or "2")))
    rules.sort(key=lambda r: -len(r[0]))
    config = AnalyzerConfig(lang, frozenset(), tuple(rules))
    stopwords = frozenset(
        stem(normalize(entry), config)
        for entry in _read_lines(root / f"stopwords.{lang}.txt")
    )
    return AnalyzerConfig(lang, stopwords, tuple(rules))


class Analyzers:
    """All three language analyzers plus their combined fingerprint."""

    def __init__(self, data_dir: Optional[Path] = None):
        root = data_dir or default_data_dir()
        self.configs = {lang: load_analyzer(lang, root) for lang in LANGUAGES}
        self.fingerprint = analyzer_fingerprint(root)

    def for_language(self, lang: str) -> AnalyzerConfig:
        return self.configs[lang]
