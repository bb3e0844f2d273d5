"""Exact digital baseline memory: integer accumulation + exact dot products.

Serves two purposes: the full-precision comparator for degradation numbers,
and the brute-force ground truth for noiseless-equivalence tests. Each class
accumulator is the elementwise integer sum of its bipolar supports, so
accumulator[c][r] = (#supports with +1 at r) - (#supports with -1 at r) and
|accumulator[c][r]| <= shots_seen[c]. Scores are exact int64 dot products —
no overflow for d <= 4096, shots <= 127, 8-bit queries.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, EmptyMemory
from .vectors import argmax_with_tiebreak, as_bipolar, as_query


class OracleMemory:
    """Map class_id -> int64 accumulator vector, in first-seen order."""

    def __init__(self, d: int | None = None):
        self.d = d
        self.accumulators: dict[int, np.ndarray] = {}
        self.shots_seen: dict[int, int] = {}

    def class_ids(self) -> list[int]:
        return list(self.accumulators.keys())


def oracle_learn(mem: OracleMemory, class_id: int, support) -> OracleMemory:
    """Add one bipolar support to the class accumulator (allocating zeros if new)."""
    support = as_bipolar(support, mem.d)
    if mem.d is None:
        mem.d = support.shape[0]
    elif support.shape[0] != mem.d:
        raise DimensionMismatch(f"support length {support.shape[0]}, expected {mem.d}")
    if class_id not in mem.accumulators:
        mem.accumulators[class_id] = np.zeros(mem.d, dtype=np.int64)
        mem.shots_seen[class_id] = 0
    mem.accumulators[class_id] += support
    mem.shots_seen[class_id] += 1
    return mem


def _stacked(mem: OracleMemory) -> tuple[np.ndarray, np.ndarray]:
    if not mem.accumulators:
        raise EmptyMemory("oracle memory holds no classes")
    ids = np.fromiter(mem.accumulators.keys(), dtype=np.int64)
    acc = np.stack(list(mem.accumulators.values()))
    return ids, acc


def oracle_scores(mem: OracleMemory, query) -> dict[int, int]:
    """Exact integer similarity score per class."""
    ids, acc = _stacked(mem)
    q = as_query(query, mem.d).astype(np.int64)
    scores = acc @ q
    return {int(c): int(s) for c, s in zip(ids, scores)}


def oracle_scores_batch(mem: OracleMemory, queries) -> tuple[np.ndarray, np.ndarray]:
    """(class_ids, (n_queries, n_classes) exact score matrix)."""
    ids, acc = _stacked(mem)
    q = np.asarray(queries, dtype=np.int64)
    if q.ndim == 1:
        q = q[None, :]
    if q.shape[1] != acc.shape[1]:
        raise DimensionMismatch(f"query length {q.shape[1]}, expected {acc.shape[1]}")
    return ids, q @ acc.T


def oracle_classify_batch(mem: OracleMemory, queries) -> np.ndarray:
    """Argmax class per query; ties broken by smallest class_id."""
    ids, scores = oracle_scores_batch(mem, queries)
    return argmax_with_tiebreak(scores, ids)


def oracle_classify(mem: OracleMemory, query) -> int:
    """Argmax_c sum_r query[r] * accumulator[c][r]; smallest-class_id ties."""
    q = as_query(query, mem.d)
    return int(oracle_classify_batch(mem, q[None, :])[0])
