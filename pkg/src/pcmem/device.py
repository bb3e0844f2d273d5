"""Stochastic model of a single PCM device under RESET / progressive SET pulses.

Conductance is kept in normalized units: a fully reset device sits at
``g_reset`` (0 by default) and progressive crystallization saturates at
``g_sat`` (1 by default). Two mean-increment shapes are supported:

* ``linear``: each SET pulse adds (g_sat - g_reset)/n_span until saturation,
  so n_span pulses traverse the full dynamic range.
* ``saturating-exponential``: each pulse adds sat_rate * (g_sat - g), giving
  the mean curve g(n) = g_sat - (g_sat - g_reset) * (1 - sat_rate)**n.

Per-pulse programming noise is additive Gaussian (std ``sigma_prog``) clamped
to [0, g_sat]; read noise is additive Gaussian (std ``sigma_read``) clamped
below at 0 only.

In noiseless linear mode the conductance is maintained exactly as the
closed-form function of the pulse count (see ``linear_trajectory``), which
guarantees g == g_sat *exactly* once pulse_count >= n_span even when
(g_sat - g_reset)/n_span is not representable in binary floating point.
All randomness flows through an explicitly passed numpy Generator.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

INCREMENT_SHAPES = ("linear", "saturating-exponential")


@dataclass(frozen=True)
class DeviceModelParams:
    """Physical parameters shared by every device in an array.

    Attributes:
        g_reset: normalized conductance after RESET.
        g_sat: normalized saturation conductance (upper clamp).
        n_span: SET pulses needed to traverse the dynamic range (linear mode).
        increment_shape: "linear" or "saturating-exponential".
        sat_rate: per-pulse rate lambda for the saturating mode.
        sigma_prog: std of per-pulse Gaussian programming noise.
        sigma_read: std of additive Gaussian read noise.
        read_noise_mode: "per_mvm" re-samples read noise on every MVM;
            "frozen" samples one offset per device at array construction.
    """

    g_reset: float = 0.0
    g_sat: float = 1.0
    n_span: int = 8
    increment_shape: str = "linear"
    sat_rate: float = 0.3
    sigma_prog: float = 0.0
    sigma_read: float = 0.0
    read_noise_mode: str = "per_mvm"

    def __post_init__(self):
        if not self.g_reset < self.g_sat:
            raise ValueError(f"g_reset ({self.g_reset}) must be < g_sat ({self.g_sat})")
        if int(self.n_span) != self.n_span or self.n_span < 1:
            raise ValueError(f"n_span must be a positive integer, got {self.n_span}")
        if self.increment_shape not in INCREMENT_SHAPES:
            raise ValueError(
                f"increment_shape must be one of {INCREMENT_SHAPES}, "
                f"got {self.increment_shape!r}"
            )
        if self.increment_shape == "saturating-exponential" and not 0 < self.sat_rate <= 1:
            raise ValueError(f"sat_rate must be in (0, 1], got {self.sat_rate}")
        if self.sigma_prog < 0:
            raise ValueError("sigma_prog must be >= 0")
        if self.sigma_read < 0:
            raise ValueError("sigma_read must be >= 0")
        if self.read_noise_mode not in ("per_mvm", "frozen"):
            raise ValueError(
                f"read_noise_mode must be 'per_mvm' or 'frozen', "
                f"got {self.read_noise_mode!r}"
            )

    @property
    def delta_g(self) -> float:
        """Mean per-pulse increment in linear mode."""
        return (self.g_sat - self.g_reset) / self.n_span


@dataclass(frozen=True)
class PcmDeviceState:
    """Conductance plus SET-pulse count since the last RESET."""

    conductance: float = 0.0
    pulse_count: int = 0


def linear_trajectory(pulse_count, params: DeviceModelParams):
    """Noiseless linear-mode conductance as a function of pulse count.

    Exactly g_sat for pulse_count >= n_span; the pre-saturation branch is the
    affine interpolation g_reset + (g_sat - g_reset) * (n / n_span).
    Accepts scalars or arrays.
    """
    n = np.asarray(pulse_count)
    frac = np.minimum(n, params.n_span) / params.n_span
    g = np.where(
        n >= params.n_span,
        params.g_sat,
        params.g_reset + (params.g_sat - params.g_reset) * frac,
    )
    return g if g.ndim else float(g)


def reset(device: PcmDeviceState, params: DeviceModelParams | None = None) -> PcmDeviceState:
    """Return the fully reset state: conductance g_reset, pulse_count 0."""
    g_reset = params.g_reset if params is not None else 0.0
    return PcmDeviceState(conductance=g_reset, pulse_count=0)


def pulse_array(
    g: np.ndarray,
    n: np.ndarray,
    params: DeviceModelParams,
    rng: np.random.Generator | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Apply one SET pulse to every device in (g, n); returns (g', n').

    Vectorized core shared by the scalar op and the crossbar. Draws exactly
    g.size normal variates when sigma_prog > 0, none otherwise.
    """
    n_next = n + 1
    if params.increment_shape == "linear":
        if params.sigma_prog == 0.0:
            g_next = linear_trajectory(n_next, params)
            return np.asarray(g_next, dtype=np.float64), n_next
        delta = params.delta_g
    else:
        delta = params.sat_rate * (params.g_sat - g)
    g_next = g + delta
    if params.sigma_prog > 0.0:
        if rng is None:
            raise ValueError("rng required when sigma_prog > 0")
        g_next = g_next + params.sigma_prog * rng.standard_normal(np.shape(g))
    return np.clip(g_next, 0.0, params.g_sat), n_next


def apply_set_pulse(
    device: PcmDeviceState,
    params: DeviceModelParams,
    rng: np.random.Generator | None = None,
) -> PcmDeviceState:
    """One SET pulse: mean increment per ``increment_shape`` plus clamped noise."""
    g, n = pulse_array(
        np.float64(device.conductance), np.int64(device.pulse_count), params, rng
    )
    return PcmDeviceState(conductance=float(g), pulse_count=int(n))


def read_conductance(
    device: PcmDeviceState,
    params: DeviceModelParams,
    rng: np.random.Generator | None = None,
) -> float:
    """Read the device: conductance + Normal(0, sigma_read), clamped to >= 0."""
    g = device.conductance
    if params.sigma_read > 0.0:
        if rng is None:
            raise ValueError("rng required when sigma_read > 0")
        g = g + params.sigma_read * rng.standard_normal()
    return max(float(g), 0.0)


def apply_reset_array(g: np.ndarray, n: np.ndarray, params: DeviceModelParams) -> None:
    """In-place RESET of every device in the views (g, n)."""
    g[...] = params.g_reset
    n[...] = 0


def conductance_curve(
    params: DeviceModelParams,
    n_devices: int,
    n_pulses: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Empirical mean/std of conductance vs. pulse index over a device ensemble.

    Simulates ``n_devices`` independent devices from RESET through
    ``n_pulses`` SET pulses and returns an (n_pulses + 1, 3) array with
    columns (pulse_index, mean, std); row 0 is the reset state.
    """
    if n_devices < 1:
        raise ValueError("n_devices must be >= 1")
    if n_pulses < 0:
        raise ValueError("n_pulses must be >= 0")
    g = np.full(n_devices, params.g_reset, dtype=np.float64)
    n = np.zeros(n_devices, dtype=np.int64)
    # deterministic dynamics keep all devices identical; np.std would still
    # report ~1e-17 from mean-subtraction rounding, so pin the spread to 0
    spread = (lambda a: float(a.std())) if params.sigma_prog > 0 else (lambda a: 0.0)
    table = np.empty((n_pulses + 1, 3), dtype=np.float64)
    table[0] = (0.0, g.mean(), spread(g))
    for k in range(1, n_pulses + 1):
        g, n = pulse_array(g, n, params, rng)
        table[k] = (float(k), g.mean(), spread(g))
    return table


def write_curve_csv(table: np.ndarray, path) -> None:
    """Write a conductance_curve table as CSV: header ``pulse,mean,std``."""
    with open(path, "w", newline="") as fh:
        fh.write("pulse,mean,std\n")
        for pulse, mean, std in table:
            fh.write(f"{int(pulse)},{mean:.8g},{std:.8g}\n")


def read_curve_csv(path) -> np.ndarray:
    """Load a CSV written by write_curve_csv back into an (n, 3) array."""
    import csv

    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["pulse", "mean", "std"]:
            raise ValueError(f"unexpected curve header: {reader.fieldnames}")
        for rec in reader:
            rows.append((float(rec["pulse"]), float(rec["mean"]), float(rec["std"])))
    return np.asarray(rows, dtype=np.float64)


def noiseless(params: DeviceModelParams) -> DeviceModelParams:
    """Copy of ``params`` with both noise channels switched off."""
    return replace(params, sigma_prog=0.0, sigma_read=0.0)
