"""Explicit memory: class-to-column allocation over a PCM crossbar.

A first-seen class triggers expansion — the next free column (0, 1, 2, ... in
first-seen order) is allocated to it and programmed with the support vector.
Subsequent supports for the same class are physically superposed: additional
SET pulses onto the same column. Memory footprint therefore grows with the
number of classes only, never with the number of shots.

Classification is an MVM over all allocated columns followed by an argmax
with ties broken toward the smallest class_id (deterministic rule).
"""

from __future__ import annotations

import warnings

import numpy as np

from .crossbar import AdcConfig, CrossbarArray, mvm_batch, program_column_bipolar
from .errors import CapacityExceeded, EmptyMemory, SaturationWarning
from .vectors import argmax_with_tiebreak, as_bipolar, as_query


class ExplicitMemory:
    """Crossbar plus class allocation table and per-class shot counters."""

    def __init__(self, array: CrossbarArray):
        self.array = array
        self.allocation: dict[int, int] = {}
        self.shots_seen: dict[int, int] = {}

    @property
    def next_free(self) -> int:
        """Next unallocated column index == number of allocated classes."""
        return len(self.allocation)

    def active_columns(self) -> np.ndarray:
        return np.arange(self.next_free, dtype=np.int64)

    def class_ids_by_column(self) -> np.ndarray:
        """Class id of each allocated column, in column order."""
        ids = np.empty(self.next_free, dtype=np.int64)
        for cid, col in self.allocation.items():
            ids[col] = cid
        return ids


def learn_support(
    em: ExplicitMemory,
    class_id: int,
    support,
    rng: np.random.Generator | None = None,
) -> ExplicitMemory:
    """Write one support: expansion for a first-seen class, superposition else.

    Raises CapacityExceeded if a new class arrives with every column taken.
    Emits SaturationWarning (non-fatal) when, in noiseless mode, some device
    in the written column is pinned at g_sat afterwards.
    """
    support = as_bipolar(support, em.array.rows)
    if class_id not in em.allocation:
        if em.next_free >= em.array.cols:
            raise CapacityExceeded(
                f"cannot allocate class {class_id}: all {em.array.cols} columns in use"
            )
        em.allocation[class_id] = em.next_free
        em.shots_seen[class_id] = 0
    col = em.allocation[class_id]
    program_column_bipolar(em.array, col, support, rng)
    em.shots_seen[class_id] += 1
    params = em.array.device_params
    if params.sigma_prog == 0.0:
        g_sat = params.g_sat
        if (em.array.g_plus[:, col] >= g_sat).any() or (
            em.array.g_minus[:, col] >= g_sat
        ).any():
            warnings.warn(
                f"column {col} (class {class_id}) has devices at g_sat after "
                f"{em.shots_seen[class_id]} shots",
                SaturationWarning,
                stacklevel=2,
            )
    return em


def similarity_scores_batch(
    em: ExplicitMemory,
    queries,
    adc: AdcConfig,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """(class_ids, (n_queries, n_classes) ADC score matrix) over allocated columns."""
    if em.next_free == 0:
        raise EmptyMemory("no classes allocated")
    codes = mvm_batch(em.array, queries, adc, em.active_columns(), rng)
    return em.class_ids_by_column(), codes


def similarity_scores(
    em: ExplicitMemory,
    query,
    adc: AdcConfig,
    rng: np.random.Generator | None = None,
) -> dict[int, int]:
    """ADC similarity score keyed by class_id (one MVM over all columns)."""
    query = as_query(query, em.array.rows)
    ids, codes = similarity_scores_batch(em, query[None, :], adc, rng)
    return {int(c): int(s) for c, s in zip(ids, codes[0])}


def classify_batch(
    em: ExplicitMemory,
    queries,
    adc: AdcConfig,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Predicted class per query; ties broken by smallest class_id."""
    ids, codes = similarity_scores_batch(em, queries, adc, rng)
    return argmax_with_tiebreak(codes, ids)


def classify(
    em: ExplicitMemory,
    query,
    adc: AdcConfig,
    rng: np.random.Generator | None = None,
) -> int:
    """Single-query classification (argmax of similarity_scores)."""
    query = as_query(query, em.array.rows)
    return int(classify_batch(em, query[None, :], adc, rng)[0])


ALLOCATION_HEADER = "class_id,column,shots_seen"


def save_allocation(em: ExplicitMemory, path) -> None:
    """Allocation table CSV: class_id,column,shots_seen in column order."""
    ids = em.class_ids_by_column()
    with open(path, "w", newline="") as fh:
        fh.write(ALLOCATION_HEADER + "\n")
        for col, cid in enumerate(ids):
            fh.write(f"{cid},{col},{em.shots_seen[int(cid)]}\n")
