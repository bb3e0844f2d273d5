"""Differential PCM crossbar: column programming and 4-quadrant analog MVM.

The array is stored struct-of-arrays: four (rows, cols) matrices hold the
positive/negative device conductances and pulse counts. Each unit cell
encodes a signed weight w = g_plus - g_minus. Programming a bipolar vector
into a column applies one SET pulse per row, to the positive device where the
element is +1 and to the negative device where it is -1.

An MVM computes the analog column sums s_c = sum_r q_r * (read(g+) - read(g-))
and digitizes them through an idealized ADC. Signed query inputs are handled
as two read phases with digital subtraction in the physical realization; that
is numerically identical to the single-pass sum here and only matters for the
cost model. Read noise is sampled independently per device per MVM invocation
(or frozen per device, see DeviceModelParams.read_noise_mode).

Programming and reset mutate the array in place and return it; MVM is
read-only. The noisy-MVM inner loop optionally uses a numba kernel; the pure
numpy fallback consumes the identical RNG stream in the identical
(query, column, row, +/-) order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import device as dev
from .errors import ColumnOutOfRange, DimensionMismatch, EmptyActiveSet, RangeViolation
from .vectors import QUERY_MAX, as_bipolar, round_half_away

try:  # optional accelerator; the numpy path is bit-compatible on the RNG stream
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False


@dataclass(frozen=True)
class AdcConfig:
    """Output ADC model.

    full_scale is the analog magnitude mapped to the largest code; None means
    "resolve to the worst-case column magnitude rows * g_sat * QUERY_MAX of
    the target array at MVM time", which guarantees no clipping. Codes are
    clipped to [-(2**(bits-1) - 1), +(2**(bits-1) - 1)] and rounding is
    half-away-from-zero.
    """

    bits: int = 8
    full_scale: float | None = None
    rounding: str = "half-away-from-zero"

    def __post_init__(self):
        if int(self.bits) != self.bits or self.bits < 1:
            raise ValueError(f"bits must be a positive integer, got {self.bits}")
        if self.full_scale is not None and not self.full_scale > 0:
            raise ValueError(f"full_scale must be > 0, got {self.full_scale}")
        if self.rounding != "half-away-from-zero":
            raise ValueError(
                f"only 'half-away-from-zero' rounding is supported, got {self.rounding!r}"
            )

    @property
    def max_code(self) -> int:
        return 2 ** (self.bits - 1) - 1

    def resolve_full_scale(self, rows: int, g_sat: float) -> float:
        if self.full_scale is not None:
            return self.full_scale
        return rows * g_sat * QUERY_MAX


def adc_quantize(analog, adc: AdcConfig, full_scale: float) -> np.ndarray:
    """Digitize analog values: scale to codes, round half-away, clip."""
    analog = np.asarray(analog, dtype=np.float64)
    if adc.max_code == 0:
        return np.zeros(analog.shape, dtype=np.int64)
    step = full_scale / adc.max_code
    codes = round_half_away(analog / step)
    return np.clip(codes, -adc.max_code, adc.max_code).astype(np.int64)


class CrossbarArray:
    """rows x cols grid of differential PCM unit cells."""

    def __init__(
        self,
        rows: int = 256,
        cols: int = 256,
        device_params: dev.DeviceModelParams | None = None,
        rng: np.random.Generator | None = None,
    ):
        if rows < 1 or cols < 1:
            raise ValueError("rows and cols must be >= 1")
        self.rows = int(rows)
        self.cols = int(cols)
        self.device_params = device_params or dev.DeviceModelParams()
        p = self.device_params
        self.g_plus = np.full((rows, cols), p.g_reset, dtype=np.float64)
        self.g_minus = np.full((rows, cols), p.g_reset, dtype=np.float64)
        self.n_plus = np.zeros((rows, cols), dtype=np.int64)
        self.n_minus = np.zeros((rows, cols), dtype=np.int64)
        self._frozen_read_offsets = None
        if p.read_noise_mode == "frozen" and p.sigma_read > 0.0:
            if rng is None:
                raise ValueError("frozen read_noise_mode requires an rng at construction")
            self._frozen_read_offsets = p.sigma_read * rng.standard_normal((2, rows, cols))

    def effective_weights(self) -> np.ndarray:
        """Signed weight matrix w = g_plus - g_minus (no read noise)."""
        return self.g_plus - self.g_minus


def program_column_bipolar(
    array: CrossbarArray,
    col: int,
    vec,
    rng: np.random.Generator | None = None,
) -> CrossbarArray:
    """One SET pulse per row into column ``col``: +1 -> positive device,
    -1 -> negative device. Mutates and returns ``array``."""
    if not 0 <= col < array.cols:
        raise ColumnOutOfRange(f"column {col} outside [0, {array.cols})")
    vec = as_bipolar(vec, array.rows)
    pos = vec == 1
    params = array.device_params
    for mask, g_all, n_all in (
        (pos, array.g_plus, array.n_plus),
        (~pos, array.g_minus, array.n_minus),
    ):
        if not mask.any():
            continue
        g_col = g_all[:, col]
        n_col = n_all[:, col]
        g_new, n_new = dev.pulse_array(g_col[mask], n_col[mask], params, rng)
        g_col[mask] = g_new
        n_col[mask] = n_new
    return array


def reset_column(array: CrossbarArray, col: int) -> CrossbarArray:
    """RESET every device in one column; other columns untouched."""
    if not 0 <= col < array.cols:
        raise ColumnOutOfRange(f"column {col} outside [0, {array.cols})")
    p = array.device_params
    for g, n in ((array.g_plus, array.n_plus), (array.g_minus, array.n_minus)):
        dev.apply_reset_array(g[:, col], n[:, col], p)
    return array


def reset_array(array: CrossbarArray) -> CrossbarArray:
    """RESET every device in the array."""
    p = array.device_params
    for g, n in ((array.g_plus, array.n_plus), (array.g_minus, array.n_minus)):
        dev.apply_reset_array(g, n, p)
    return array


if _HAVE_NUMBA:

    @_njit(cache=True)
    def _noisy_scores_kernel(gen, q, gp, gm, sigma, out):  # pragma: no cover - jitted
        n_q, n_r = q.shape
        n_c = gp.shape[1]
        for k in range(n_q):
            for c in range(n_c):
                acc = 0.0
                for r in range(n_r):
                    xp = gp[r, c] + sigma * gen.standard_normal()
                    if xp < 0.0:
                        xp = 0.0
                    xm = gm[r, c] + sigma * gen.standard_normal()
                    if xm < 0.0:
                        xm = 0.0
                    acc += q[k, r] * (xp - xm)
                out[k, c] = acc


def _noisy_scores_numpy(rng, q, gp, gm, sigma, out):
    """Fallback with the same draw order as the kernel: (query, col, row, +/-)."""
    gp_t = np.ascontiguousarray(gp.T)
    gm_t = np.ascontiguousarray(gm.T)
    n_q = q.shape[0]
    for k in range(n_q):
        eps = rng.standard_normal((gp_t.shape[0], gp_t.shape[1], 2))
        xp = np.maximum(gp_t + sigma * eps[:, :, 0], 0.0)
        xm = np.maximum(gm_t + sigma * eps[:, :, 1], 0.0)
        out[k] = (xp - xm) @ q[k]


def _validate_queries(queries, rows: int) -> np.ndarray:
    q = np.asarray(queries)
    if q.ndim == 1:
        q = q[None, :]
    if q.ndim != 2 or q.shape[1] != rows:
        raise DimensionMismatch(
            f"query batch shape {np.asarray(queries).shape} incompatible with {rows} rows"
        )
    if not np.issubdtype(q.dtype, np.integer):
        if not np.all(q == np.trunc(q)):
            raise RangeViolation("query elements must be integers")
    if np.any(np.abs(q) > QUERY_MAX):
        raise RangeViolation(f"query elements must lie in [-{QUERY_MAX}, {QUERY_MAX}]")
    return q.astype(np.float64)


def mvm_batch(
    array: CrossbarArray,
    queries,
    adc: AdcConfig,
    active_cols,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """ADC codes for a batch of queries over the given columns.

    Equivalent to calling ``mvm`` per query in order (identical RNG stream);
    returns an (n_queries, n_active) int array aligned with ``active_cols``.
    """
    active = np.asarray(active_cols, dtype=np.int64).ravel()
    if active.size == 0:
        raise EmptyActiveSet("active_cols is empty")
    if active.min() < 0 or active.max() >= array.cols:
        raise ColumnOutOfRange(f"active column outside [0, {array.cols})")
    q = _validate_queries(queries, array.rows)
    params = array.device_params
    fs = adc.resolve_full_scale(array.rows, params.g_sat)

    if params.sigma_read > 0.0 and params.read_noise_mode == "per_mvm":
        if rng is None:
            raise ValueError("rng required when sigma_read > 0")
        gp = np.ascontiguousarray(array.g_plus[:, active])
        gm = np.ascontiguousarray(array.g_minus[:, active])
        analog = np.empty((q.shape[0], active.size), dtype=np.float64)
        if _HAVE_NUMBA:
            _noisy_scores_kernel(rng, q, gp, gm, params.sigma_read, analog)
        else:
            _noisy_scores_numpy(rng, q, gp, gm, params.sigma_read, analog)
    else:
        if array._frozen_read_offsets is not None:
            xp = np.maximum(array.g_plus + array._frozen_read_offsets[0], 0.0)
            xm = np.maximum(array.g_minus + array._frozen_read_offsets[1], 0.0)
            weights = (xp - xm)[:, active]
        else:
            weights = array.g_plus[:, active] - array.g_minus[:, active]
        analog = q @ weights
    return adc_quantize(analog, adc, fs)


def mvm(
    array: CrossbarArray,
    query,
    adc: AdcConfig,
    active_cols,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Single-query 4-quadrant MVM; returns one ADC code per active column."""
    return mvm_batch(array, np.asarray(query)[None, :], adc, active_cols, rng)[0]


SNAPSHOT_HEADER = "row,col,g_plus,g_minus,n_plus,n_minus"


def save_snapshot(array: CrossbarArray, path) -> None:
    """Dump full device state as CSV (row-major), float fields round-trip exactly."""
    with open(path, "w", newline="") as fh:
        fh.write(SNAPSHOT_HEADER + "\n")
        for r in range(array.rows):
            for c in range(array.cols):
                fh.write(
                    f"{r},{c},{array.g_plus[r, c]:.17g},{array.g_minus[r, c]:.17g},"
                    f"{array.n_plus[r, c]},{array.n_minus[r, c]}\n"
                )


def load_snapshot(
    path,
    device_params: dev.DeviceModelParams | None = None,
    rng: np.random.Generator | None = None,
) -> CrossbarArray:
    """Rebuild a CrossbarArray from a save_snapshot CSV."""
    import csv

    from .errors import ParseError

    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != SNAPSHOT_HEADER.split(","):
            raise ParseError(f"{path}: expected header {SNAPSHOT_HEADER!r}, got {header}")
        records = [
            (int(r), int(c), float(gp), float(gm), int(np_), int(nm))
            for r, c, gp, gm, np_, nm in reader
        ]
    if not records:
        raise ParseError(f"{path}: snapshot holds no cells")
    rows = max(rec[0] for rec in records) + 1
    cols = max(rec[1] for rec in records) + 1
    if len(records) != rows * cols:
        raise ParseError(f"{path}: expected {rows * cols} cells, got {len(records)}")
    array = CrossbarArray(rows, cols, device_params, rng=rng)
    for r, c, gp, gm, np_, nm in records:
        array.g_plus[r, c] = gp
        array.g_minus[r, c] = gm
        array.n_plus[r, c] = np_
        array.n_minus[r, c] = nm
    return array
