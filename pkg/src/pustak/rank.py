"""Relevance scoring: BM25 over term statistics times a popularity boost.

Popularity (per-book view hits) multiplies the textual score through
1 + alpha*ln(1 + hits), so it can reorder near-ties without swamping
keyword relevance. Phrase clauses are weighted above scattered terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class RankingParams:
    k1: float = 1.2            # term-frequency saturation
    b: float = 0.75            # document-length normalization
    alpha: float = 0.1         # popularity boost weight
    phrase_weight: float = 2.0  # multiplier on phrase-clause scores

    def __post_init__(self):
        if self.k1 <= 0:
            raise DomainError("k1 must be > 0")
        if not 0 <= self.b <= 1:
            raise DomainError("b must be in [0, 1]")
        if self.alpha < 0:
            raise DomainError("alpha must be >= 0")
        if self.phrase_weight < 1:
            raise DomainError("phrase_weight must be >= 1")


@dataclass(frozen=True)
class DocScore:
    doc_id: int
    base: float
    boost: float
    final: float
    matched_clauses: int


def bm25_term(tf: int, df: int, n_docs: int, doc_len: float, avg_len: float,
              params: RankingParams) -> float:
    """One term's contribution for one document.

    Uses the non-negative ln(1 + ...) idf variant so terms in over half the
    corpus still score >= 0.
    """
    if tf < 0:
        raise DomainError("tf must be >= 0")
    if not 1 <= df <= n_docs:
        raise DomainError("df must be in [1, N]")
    if doc_len <= 0 or avg_len <= 0:
        raise DomainError("doc_len and avg_len must be > 0")
    idf = math.log(1.0 + (n_docs - df + 0.5) / (df + 0.5))
    saturation = (tf * (params.k1 + 1)) / (
        tf + params.k1 * (1 - params.b + params.b * doc_len / avg_len)
    )
    return idf * saturation


def popularity_boost(hits: int, alpha: float) -> float:
    """1 + alpha*ln(1 + hits); neutral at zero hits or zero alpha."""
    if hits < 0:
        raise DomainError("hits must be >= 0")
    return 1.0 + alpha * math.log1p(hits)


def score_document(doc_id: int, term_scores: list[float],
                   phrase_scores: list[float], hits: int,
                   params: RankingParams) -> DocScore:
    """Combine per-clause BM25 values into the final document score.

    term_scores/phrase_scores hold one bm25_term value per *matched*
    clause; phrase clauses use the adjacency-match count as tf and the
    count of documents with a match as df.
    """
    base = sum(term_scores) + params.phrase_weight * sum(phrase_scores)
    boost = popularity_boost(hits, params.alpha)
    return DocScore(
        doc_id=doc_id,
        base=base,
        boost=boost,
        final=base * boost,
        matched_clauses=len(term_scores) + len(phrase_scores),
    )
