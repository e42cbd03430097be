"""Tokenization and an immutable in-memory inverted index with BM25 scoring.

Three index variants are supported: full text (title+abstract+body as one
unit per document), title+abstract, and title+abstract+paragraph where every
body paragraph becomes its own index unit mapped back to the parent document.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources

from .corpus import Collection, Document
from .errors import EmptyCollection, UnknownUnit

_TOKEN_RUN = re.compile(r"[0-9a-z]+")

# Unit ids are (doc_id, unit_index) pairs; unit_index is always 0 for the
# single-unit variants.
UnitId = tuple[str, int]


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    """Stopword list shipped with the package (standard English analyzer set)."""
    text = resources.files("taskrank.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


@dataclass(frozen=True)
class Tokenizer:
    """Lowercasing alphanumeric tokenizer with stopword removal.

    Tokens are maximal ``[0-9a-z]+`` runs of the lowercased input; stopwords
    and tokens shorter than two characters are dropped.
    """

    stopwords: frozenset[str] = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.stopwords is None:
            object.__setattr__(self, "stopwords", default_stopwords())

    def tokenize(self, text: str) -> list[str]:
        return [
            t
            for t in _TOKEN_RUN.findall(text.lower())
            if len(t) >= 2 and t not in self.stopwords
        ]


def tokenize(text: str, tokenizer: Tokenizer | None = None) -> list[str]:
    """Tokenize with the given tokenizer, or the shipped default."""
    return (tokenizer or Tokenizer()).tokenize(text)


class IndexVariant(Enum):
    FULL_TEXT = "fulltext"
    TITLE_ABSTRACT = "title-abstract"
    TITLE_ABSTRACT_PARAGRAPH = "paragraph"


@dataclass(frozen=True)
class Bm25Params:
    """Okapi BM25 parameters; defaults follow common fusion-baseline settings."""

    k1: float = 0.9
    b: float = 0.4

    def __post_init__(self):
        if self.k1 <= 0:
            raise ValueError("k1 must be > 0")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError("b must be in [0, 1]")


def _unit_texts(doc: Document, variant: IndexVariant) -> list[str]:
    head = f"{doc.title} {doc.abstract}"
    if variant is IndexVariant.FULL_TEXT:
        return [" ".join([head, *doc.body])]
    if variant is IndexVariant.TITLE_ABSTRACT:
        return [head]
    if not doc.body:
        return [head]
    return [f"{head} {para}" for para in doc.body]


class InvertedIndex:
    """Immutable inverted index over one variant of a collection.

    Statistics are unit-level: for the paragraph variant a "unit" is one
    title+abstract+paragraph block, otherwise one document.
    """

    def __init__(self, collection: Collection, variant: IndexVariant,
                 tokenizer: Tokenizer | None = None):
        if len(collection) == 0:
            raise EmptyCollection("cannot index an empty collection")
        self.variant = variant
        self.tokenizer = tokenizer or Tokenizer()
        self.postings: dict[str, list[tuple[UnitId, int]]] = {}
        self.unit_lengths: dict[UnitId, int] = {}
        self.unit_parent: dict[UnitId, str] = {}
        for doc in collection:
            for k, text in enumerate(_unit_texts(doc, variant)):
                unit_id: UnitId = (doc.doc_id, k)
                tokens = self.tokenizer.tokenize(text)
                self.unit_lengths[unit_id] = len(tokens)
                self.unit_parent[unit_id] = doc.doc_id
                counts: dict[str, int] = {}
                for t in tokens:
                    counts[t] = counts.get(t, 0) + 1
                for t, tf in counts.items():
                    self.postings.setdefault(t, []).append((unit_id, tf))
        self.unit_count = len(self.unit_lengths)
        self.doc_count = len(collection)
        # Lengths are ints, so the mean is independent of insertion order.
        self.avg_unit_length = sum(self.unit_lengths.values()) / self.unit_count

    def doc_freq(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def idf(self, term: str) -> float:
        # Lucene-style formulation: non-negative for every df <= N.
        df = self.doc_freq(term)
        return math.log(1.0 + (self.unit_count - df + 0.5) / (df + 0.5))

    def units_containing(self, term: str) -> set[UnitId]:
        return {unit_id for unit_id, _ in self.postings.get(term, ())}


def build_index(collection: Collection, variant: IndexVariant,
                tokenizer: Tokenizer | None = None) -> InvertedIndex:
    return InvertedIndex(collection, variant, tokenizer)


def bm25_score(index: InvertedIndex, params: Bm25Params,
               query_tokens: list[str], unit_id: UnitId) -> float:
    """BM25 score of one unit for a token list.

    Repeated query tokens contribute once per occurrence, which is what makes
    duplication-based query term weighting work.
    """
    if unit_id not in index.unit_lengths:
        raise UnknownUnit(unit_id)
    length_norm = params.k1 * (
        1.0 - params.b + params.b * index.unit_lengths[unit_id] / index.avg_unit_length
    )
    score = 0.0
    for token in query_tokens:
        tf = 0
        for uid, freq in index.postings.get(token, ()):
            if uid == unit_id:
                tf = freq
                break
        if tf == 0:
            continue
        score += index.idf(token) * tf * (params.k1 + 1.0) / (tf + length_norm)
    return score


def search(index: InvertedIndex, params: Bm25Params,
           query_tokens: list[str], top_k: int) -> list[tuple[str, float]]:
    """Rank documents by BM25 over index units.

    Units are scored, aggregated to their parent document by maximum unit
    score, then sorted by score descending with ties broken by ascending
    doc_id. Zero-score documents are excluded.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    unit_scores: dict[UnitId, float] = {}
    for token in query_tokens:
        plist = index.postings.get(token)
        if not plist:
            continue
        idf = index.idf(token)
        for unit_id, tf in plist:
            length_norm = params.k1 * (
                1.0 - params.b
                + params.b * index.unit_lengths[unit_id] / index.avg_unit_length
            )
            contrib = idf * tf * (params.k1 + 1.0) / (tf + length_norm)
            unit_scores[unit_id] = unit_scores.get(unit_id, 0.0) + contrib
    doc_scores: dict[str, float] = {}
    for unit_id, score in unit_scores.items():
        doc_id = index.unit_parent[unit_id]
        if doc_id not in doc_scores or score > doc_scores[doc_id]:
            doc_scores[doc_id] = score
    ranked = sorted(
        ((d, s) for d, s in doc_scores.items() if s > 0.0),
        key=lambda item: (-item[1], item[0]),
    )
    return ranked[:top_k]
