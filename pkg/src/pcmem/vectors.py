"""Vector encodings and small shared numeric helpers.

Support vectors are bipolar (every element exactly -1 or +1, stored as int8);
query vectors are signed 8-bit integers in [-127, +127] (stored as int16 so
intermediate arithmetic cannot wrap). Both are plain numpy arrays run through
the validators below rather than wrapper classes.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, RangeViolation

#: Largest query-vector magnitude (signed 8-bit, symmetric: -128 is excluded).
QUERY_MAX = 127


def as_bipolar(values, rows: int | None = None) -> np.ndarray:
    """Validate ``values`` as a bipolar vector and return it as int8.

    Args:
        values: sequence or array of elements that must all be -1 or +1.
        rows: required length, or None to accept any length.

    Raises:
        RangeViolation: some element is not exactly -1 or +1.
        DimensionMismatch: length differs from ``rows``.
    """
    vec = np.asarray(values)
    if vec.ndim != 1:
        raise DimensionMismatch(f"bipolar vector must be 1-D, got shape {vec.shape}")
    if rows is not None and vec.shape[0] != rows:
        raise DimensionMismatch(
            f"bipolar vector has length {vec.shape[0]}, expected {rows}"
        )
    if not np.issubdtype(vec.dtype, np.integer):
        if not np.all(np.isin(vec, (-1, 1))):
            raise RangeViolation("bipolar vector elements must be -1 or +1")
    elif not np.all((vec == 1) | (vec == -1)):
        raise RangeViolation("bipolar vector elements must be -1 or +1")
    return vec.astype(np.int8)


def as_query(values, rows: int | None = None) -> np.ndarray:
    """Validate ``values`` as a signed 8-bit query vector and return it as int16.

    Raises:
        RangeViolation: some element is outside [-QUERY_MAX, +QUERY_MAX] or
            not an integer.
        DimensionMismatch: length differs from ``rows``.
    """
    vec = np.asarray(values)
    if vec.ndim != 1:
        raise DimensionMismatch(f"query vector must be 1-D, got shape {vec.shape}")
    if rows is not None and vec.shape[0] != rows:
        raise DimensionMismatch(
            f"query vector has length {vec.shape[0]}, expected {rows}"
        )
    if not np.issubdtype(vec.dtype, np.integer):
        if not np.all(vec == np.trunc(vec)):
            raise RangeViolation("query vector elements must be integers")
    if np.any(np.abs(vec) > QUERY_MAX):
        raise RangeViolation(
            f"query vector elements must lie in [-{QUERY_MAX}, {QUERY_MAX}]"
        )
    return vec.astype(np.int16)


def round_half_away(x):
    """Round to nearest integer with ties away from zero.

    np.round ties to even (16.5 -> 16); ADC and query quantization here tie
    away from zero (16.5 -> 17, -16.5 -> -17).
    """
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def argmax_with_tiebreak(scores: np.ndarray, class_ids: np.ndarray) -> np.ndarray:
    """Row-wise argmax of ``scores`` returning class ids, ties to smallest id.

    Args:
        scores: (n_queries, n_classes) score matrix.
        class_ids: (n_classes,) class id per column of ``scores``.

    Returns:
        (n_queries,) array of winning class ids.
    """
    scores = np.atleast_2d(scores)
    class_ids = np.asarray(class_ids, dtype=np.int64)
    top = scores.max(axis=1, keepdims=True)
    candidates = np.where(scores == top, class_ids[None, :], np.iinfo(np.int64).max)
    return candidates.min(axis=1)
