"""Search orchestration: parse, expand, match, rank, paginate, highlight.

Content queries run against the inverted index; title/author queries match
the tokenized field structures; ISBN queries are exact after hyphen
stripping. Language, genre and source act as post-filters over live
metadata, so tombstoned or filtered books never surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .codec import Occurrence
from .errors import BadPage, EmptyQuery, UnknownBook
from .index import IndexSnapshot
from .queryparse import (FilterSet, Phrase, QueryAst, Term, expand_query,
                         parse_query)
from .rank import DocScore, RankingParams, bm25_term, popularity_boost
from .store import CorpusStore
from .textproc import Analyzers, analyze_line, normalize
from .translit import SCRIPT_LANGUAGE, detect_script

MAX_PAGE_SIZE = 100


@dataclass(frozen=True)
class SearchRequest:
    raw_query: str
    filters: FilterSet = dc_field(default_factory=FilterSet)
    multilingual: bool = False
    page: int = 1
    page_size: int = 10


@dataclass(frozen=True)
class ResultCard:
    book_id: str
    title: str
    author: str
    language: str
    isbn: Optional[str]
    genre: Optional[str]
    source: Optional[str]
    abstract: Optional[str]
    cover_image: Optional[str]
    score: float
    snippet: str


@dataclass(frozen=True)
class SearchResult:
    total_hits: int
    page: int
    page_size: int
    results: list[ResultCard]


@dataclass(frozen=True)
class MatchedLine:
    line_no: int
    bbox: tuple[int, int, int, int]
    spans: tuple[tuple[int, int], ...]
    text: str


@dataclass(frozen=True)
class PageMatch:
    page_no: int
    image: Optional[str]
    matched_lines: list[MatchedLine]


def paginate(items: list, page: int, page_size: int) -> list:
    """Stable slice [(page-1)*size, page*size); past-the-end pages are
    empty, not an error."""
    return items[(page - 1) * page_size: page * page_size]


def result_body(result: SearchResult) -> dict:
    """JSON-ready body; shared by the HTTP endpoint and `search --json` so
    both surfaces emit byte-identical responses."""
    return {
        "total_hits": result.total_hits,
        "page": result.page,
        "page_size": result.page_size,
        "results": [
            {
                "book_id": c.book_id,
                "title": c.title,
                "author": c.author,
                "language": c.language,
                "isbn": c.isbn,
                "genre": c.genre,
                "source": c.source,
                "abstract": c.abstract,
                "cover_image": c.cover_image,
                "score": c.score,
                "snippet": c.snippet,
            }
            for c in result.results
        ],
    }


def matches_body(book_id: str, matches: list[PageMatch]) -> dict:
    return {
        "book_id": book_id,
        "matches": [
            {
                "page_no": pm.page_no,
                "image": pm.image,
                "matched_lines": [
                    {
                        "line_no": ml.line_no,
                        "bbox": list(ml.bbox),
                        "spans": [list(span) for span in ml.spans],
                        "text": ml.text,
                    }
                    for ml in pm.matched_lines
                ],
            }
            for pm in matches
        ],
    }


def query_language(raw: str, filters: FilterSet) -> str:
    if filters.language:
        return filters.language
    return SCRIPT_LANGUAGE.get(detect_script(raw), "hi")


@dataclass
class _Candidate:
    base: float = 0.0
    matched: int = 0
    first_occ: Optional[Occurrence] = None


def _better_occ(a: Optional[Occurrence], b: Optional[Occurrence]):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b, key=lambda o: (o.page_no, o.line_no, o.pos))


def _match_content(ast: QueryAst, snapshot: IndexSnapshot,
                   params: RankingParams) -> dict[int, _Candidate]:
    n_docs = snapshot.corpus_stats.doc_count
    avg_len = snapshot.corpus_stats.avg_doc_len
    out: dict[int, _Candidate] = {}
    for clause in ast.clauses:
        if isinstance(clause, Term):
            postings = snapshot.lookup(clause.stem)
            if not postings:
                continue
            df = len(postings)
            for posting in postings:
                entry = snapshot.doc_table[posting.doc_id]
                score = bm25_term(len(posting.occurrences), df, n_docs,
                                  entry.token_count, avg_len, params)
                cand = out.setdefault(posting.doc_id, _Candidate())
                cand.base += score
                cand.matched += 1
                cand.first_occ = _better_occ(cand.first_occ,
                                             posting.occurrences[0])
        else:
            matches = snapshot.phrase_docs(list(clause.stems))
            if not matches:
                continue
            df = len(matches)
            for doc_id, occs in matches.items():
                entry = snapshot.doc_table[doc_id]
                score = bm25_term(len(occs), df, n_docs,
                                  entry.token_count, avg_len, params)
                cand = out.setdefault(doc_id, _Candidate())
                cand.base += params.phrase_weight * score
                cand.matched += 1
                cand.first_occ = _better_occ(cand.first_occ, occs[0])
    return out


def _match_field(ast: QueryAst, field: str, snapshot: IndexSnapshot,
                 params: RankingParams) -> dict[int, _Candidate]:
    n_docs = snapshot.corpus_stats.doc_count
    avg_len = snapshot.field_avg_len(field)
    out: dict[int, _Candidate] = {}
    for clause in ast.clauses:
        if isinstance(clause, Term):
            rows = snapshot.field_token_postings(field, clause.stem)
            per_doc = {doc_id: tf for doc_id, tf in rows}
        else:
            # metadata fields carry no positions: a phrase is a conjunction
            stems = [s for s in clause.stems if s is not None]
            per_doc = None
            for stem_ in stems:
                rows = dict(snapshot.field_token_postings(field, stem_))
                if per_doc is None:
                    per_doc = rows
                else:
                    per_doc = {d: min(tf, rows[d])
                               for d, tf in per_doc.items() if d in rows}
            per_doc = per_doc or {}
        if not per_doc:
            continue
        df = len(per_doc)
        for doc_id, tf in per_doc.items():
            doc_len = snapshot.field_length(field, doc_id)
            score = bm25_term(tf, df, n_docs, max(doc_len, 1),
                              avg_len, params)
            if isinstance(clause, Phrase):
                score *= params.phrase_weight
            cand = out.setdefault(doc_id, _Candidate())
            cand.base += score
            cand.matched += 1
    return out


def _match_isbn(raw_query: str, snapshot: IndexSnapshot
                ) -> dict[int, _Candidate]:
    doc_ids = snapshot.isbn_lookup(raw_query.strip())
    return {doc_id: _Candidate(base=1.0, matched=1) for doc_id in doc_ids}


def match_docs(request: SearchRequest, snapshot: IndexSnapshot,
               analyzers: Analyzers, params: RankingParams
               ) -> dict[int, _Candidate]:
    """Unranked candidate set for a request: doc_id -> best variant match.

    Multilingual variants are unioned; when several variants hit the same
    document, the highest-scoring one wins (corpus stats are global, so
    bases are comparable across scripts).
    """
    filters = request.filters
    if not request.raw_query.strip():
        raise EmptyQuery("query is empty")
    if filters.field == "isbn":
        return _match_isbn(request.raw_query, snapshot)
    lang = query_language(request.raw_query, filters)
    ast = parse_query(request.raw_query, analyzers.for_language(lang))
    merged: dict[int, _Candidate] = {}
    for _script, variant in expand_query(ast, filters, request.multilingual,
                                         analyzers):
        if filters.field == "content":
            found = _match_content(variant, snapshot, params)
        else:
            found = _match_field(variant, filters.field, snapshot, params)
        for doc_id, cand in found.items():
            best = merged.get(doc_id)
            if best is None or cand.base > best.base:
                cand.first_occ = _better_occ(
                    cand.first_occ, best.first_occ if best else None)
                merged[doc_id] = cand
            else:
                best.first_occ = _better_occ(best.first_occ, cand.first_occ)
    return merged


def execute(request: SearchRequest, snapshot: IndexSnapshot,
            store: CorpusStore, analyzers: Analyzers,
            params: Optional[RankingParams] = None) -> SearchResult:
    """Run a search end to end and build the paginated result page."""
    if request.page < 1:
        raise BadPage("page must be >= 1")
    if not 1 <= request.page_size <= MAX_PAGE_SIZE:
        raise BadPage(f"page_size must be in [1, {MAX_PAGE_SIZE}]")
    params = params or RankingParams()
    filters = request.filters

    candidates = match_docs(request, snapshot, analyzers, params)

    scored: list[tuple[DocScore, _Candidate, str]] = []
    for doc_id, cand in candidates.items():
        entry = snapshot.doc_table[doc_id]
        if filters.language and entry.language != filters.language:
            continue
        meta = store.effective_meta(entry.book_id)
        if meta is None:
            continue
        if filters.genre and meta.genre != filters.genre:
            continue
        if filters.source and meta.source != filters.source:
            continue
        hits = store.state.get_hits(entry.book_id)
        boost = popularity_boost(hits, params.alpha)
        score = DocScore(doc_id=doc_id, base=cand.base, boost=boost,
                         final=cand.base * boost,
                         matched_clauses=cand.matched)
        scored.append((score, cand, entry.book_id))

    scored.sort(key=lambda item: (-item[0].final, item[0].doc_id))
    total = len(scored)
    page_items = paginate(scored, request.page, request.page_size)

    cards = []
    for score, cand, book_id in page_items:
        meta = store.effective_meta(book_id)
        snippet = ""
        if cand.first_occ is not None:
            text = store.line_text(book_id, cand.first_occ.page_no,
                                   cand.first_occ.line_no)
            snippet = text or ""
        cards.append(ResultCard(
            book_id=book_id, title=meta.title, author=meta.author,
            language=meta.language, isbn=meta.isbn, genre=meta.genre,
            source=meta.source, abstract=meta.abstract,
            cover_image=meta.cover_image, score=score.final,
            snippet=snippet,
        ))
    return SearchResult(total_hits=total, page=request.page,
                        page_size=request.page_size, results=cards)


def matches_for_book(book_id: str, ast: QueryAst, snapshot: IndexSnapshot,
                     store: CorpusStore, analyzers: Analyzers
                     ) -> list[PageMatch]:
    """Per-page highlighted lines for one book and query.

    Lines are found by re-analyzing the book with the indexing pipeline, so
    highlights agree exactly with what the index matched. A phrase spanning
    lines is attributed to the line of its first concrete token.
    """
    if not store.has_book(book_id):
        raise UnknownBook(book_id)
    book = store.load_book(book_id)
    config = analyzers.for_language(book.meta.language)

    # flat survivor token stream mirroring textproc.analyze_book
    stream = []  # (page_no, line_no, span)
    stem_stream = []
    for page in book.pages:
        for line in page.lines:
            for lt in analyze_line(line.text, config):
                if lt.is_stopword:
                    continue
                stream.append((page.page_no, line.line_no, lt.char_span))
                stem_stream.append(lt.stem)

    term_stems = {c.stem for c in ast.clauses if isinstance(c, Term)}
    phrases = [c.stems for c in ast.clauses if isinstance(c, Phrase)]

    # (page_no, line_no) -> set of spans
    hits: dict[tuple[int, int], set[tuple[int, int]]] = {}
    for (page_no, line_no, span), stem_ in zip(stream, stem_stream):
        if stem_ in term_stems:
            hits.setdefault((page_no, line_no), set()).add(span)
    for stems in phrases:
        length = len(stems)
        concrete = [(i, s) for i, s in enumerate(stems) if s is not None]
        if not concrete:
            continue
        for start in range(len(stem_stream) - length + 1):
            if all(stem_stream[start + i] == s for i, s in concrete):
                anchor_i = start + concrete[0][0]
                page_no, line_no, _ = stream[anchor_i]
                spans = hits.setdefault((page_no, line_no), set())
                for offset in range(length):
                    p, ln, span = stream[start + offset]
                    if (p, ln) == (page_no, line_no):
                        spans.add(span)

    by_page: dict[int, list[MatchedLine]] = {}
    for (page_no, line_no), spans in sorted(hits.items()):
        page = book.page(page_no)
        line = next(ln for ln in page.lines if ln.line_no == line_no)
        by_page.setdefault(page_no, []).append(MatchedLine(
            line_no=line_no, bbox=line.bbox,
            spans=tuple(sorted(spans)),
            text=normalize(line.text),
        ))
    return [
        PageMatch(page_no=page_no, image=book.page(page_no).image,
                  matched_lines=lines)
        for page_no, lines in sorted(by_page.items())
    ]


def matches_for_query(book_id: str, raw_query: str, multilingual: bool,
                      snapshot: IndexSnapshot, store: CorpusStore,
                      analyzers: Analyzers) -> list[PageMatch]:
    """matches_for_book across every query variant, merged per line.

    A book found through a transliterated variant highlights correctly
    because each variant AST is checked against the book.
    """
    lang = query_language(raw_query, FilterSet())
    ast = parse_query(raw_query, analyzers.for_language(lang))
    merged: dict[tuple[int, int], MatchedLine] = {}
    images: dict[int, Optional[str]] = {}
    for _script, variant in expand_query(ast, FilterSet(), multilingual,
                                         analyzers):
        for pm in matches_for_book(book_id, variant, snapshot, store,
                                   analyzers):
            images[pm.page_no] = pm.image
            for ml in pm.matched_lines:
                key = (pm.page_no, ml.line_no)
                prev = merged.get(key)
                if prev is None:
                    merged[key] = ml
                else:
                    merged[key] = MatchedLine(
                        line_no=ml.line_no, bbox=ml.bbox,
                        spans=tuple(sorted(set(prev.spans) | set(ml.spans))),
                        text=ml.text,
                    )
    by_page: dict[int, list[MatchedLine]] = {}
    for (page_no, _line_no), ml in sorted(merged.items()):
        by_page.setdefault(page_no, []).append(ml)
    return [
        PageMatch(page_no=page_no, image=images[page_no],
                  matched_lines=lines)
        for page_no, lines in sorted(by_page.items())
    ]
