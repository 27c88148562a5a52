"""Query parsing: raw text -> terms and quoted phrases, plus filters.

Double-quoted spans become Phrase clauses; everything else becomes Term
clauses after the full analysis pipeline. Stopwords inside a phrase stay as
positional placeholders (matched loosely against any token) so that an
"exact" phrase still lines up with the stopword-free index positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import EmptyQuery
from .textproc import AnalyzerConfig, Analyzers, analyze_line
from .translit import (LANGUAGE_SCRIPT, SCRIPT_LANGUAGE, detect_script,
                       query_variants)

FIELDS = ("content", "title", "isbn", "author")


@dataclass(frozen=True)
class Term:
    stem: str


@dataclass(frozen=True)
class Phrase:
    """Adjacent stems; None marks a stopword placeholder position."""

    stems: tuple[Optional[str], ...]

    def __post_init__(self):
        if not self.stems:
            raise ValueError("empty phrase")


Clause = Union[Term, Phrase]


@dataclass(frozen=True)
class QueryAst:
    clauses: tuple[Clause, ...]
    raw: str


@dataclass(frozen=True)
class FilterSet:
    language: Optional[str] = None
    field: str = "content"
    genre: Optional[str] = None
    source: Optional[str] = None


def parse_query(raw: str, config: AnalyzerConfig) -> QueryAst:
    """Parse a raw query with the given language's analyzer.

    An unmatched trailing quote closes at end of input. Raises EmptyQuery
    only for empty/whitespace input; all-stopword input parses to an AST
    with no clauses.
    """
    if not raw.strip():
        raise EmptyQuery("query is empty")
    clauses: list[Clause] = []
    # split alternates outside/inside quote pairs; a trailing unmatched
    # quote simply leaves the final inside-segment unterminated
    for i, segment in enumerate(raw.split('"')):
        inside = i % 2 == 1
        tokens = analyze_line(segment, config)
        if inside:
            stems = tuple(None if t.is_stopword else t.stem for t in tokens)
            if stems and any(s is not None for s in stems):
                clauses.append(Phrase(stems))
        else:
            clauses.extend(Term(t.stem) for t in tokens if not t.is_stopword)
    return QueryAst(clauses=tuple(clauses), raw=raw)


def expand_query(ast: QueryAst, filters: FilterSet, multilingual: bool,
                 analyzers: Analyzers) -> list[tuple[str, QueryAst]]:
    """Per-script ASTs for the query.

    Non-multilingual requests pass through unchanged; multilingual ones are
    transliterated to every supported script and re-analyzed with that
    script's analyzer, so stems match what indexing produced there.
    """
    if not ast.clauses:
        return []
    source = detect_script(ast.raw)
    if not multilingual:
        return [(source, ast)]
    targets = set(LANGUAGE_SCRIPT.values())
    out: list[tuple[str, QueryAst]] = []
    for i, (script, text) in enumerate(query_variants(ast.raw, source, targets)):
        if i == 0:
            out.append((script, ast))
            continue
        lang = SCRIPT_LANGUAGE.get(script, filters.language or "hi")
        try:
            variant = parse_query(text, analyzers.for_language(lang))
        except EmptyQuery:
            continue
        if variant.clauses:
            out.append((script, variant))
    return out or [(source, ast)]
