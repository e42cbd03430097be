"""Reciprocal rank fusion of per-index rankings."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyInput


@dataclass(frozen=True)
class FusionConfig:
    rrf_k: float = 60.0

    def __post_init__(self):
        if self.rrf_k <= 0:
            raise ValueError("rrf_k must be > 0")


def rrf_fuse(rankings: list[list[tuple[str, float]]], config: FusionConfig,
             top_k: int) -> list[tuple[str, float]]:
    """Fuse ranked lists: fused(d) = sum over lists of 1/(rrf_k + rank(d)).

    Ranks start at 1. Input scores are ignored; only positions matter.
    Per-document sums use math.fsum, so the result is invariant to the order
    in which the input lists are given. Output is sorted by fused score
    descending, ties by ascending doc_id, truncated to ``top_k``.
    """
    if not rankings:
        raise EmptyInput("rrf_fuse needs at least one ranking")
    contributions: dict[str, list[float]] = {}
    for ranking in rankings:
        seen: set[str] = set()
        for rank, (doc_id, _score) in enumerate(ranking, start=1):
            if doc_id in seen:
                raise ValueError(f"doc_id {doc_id!r} repeated within one ranking")
            seen.add(doc_id)
            contributions.setdefault(doc_id, []).append(1.0 / (config.rrf_k + rank))
    fused = {doc_id: math.fsum(parts) for doc_id, parts in contributions.items()}
    ranked = sorted(fused.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:top_k]
