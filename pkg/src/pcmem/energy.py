"""Analytic energy/latency model of programming and similarity search.

Pulse energy integrates the SET current waveform: a flat segment at peak
current plus a linearly ramped trailing edge (energy weight 1/2), i.e.
E = v_source * i_peak * (t_flat + t_trail / 2). A class update programs the
d elements of one column serially; multiple class updates within a session
can proceed column-parallel (time divided by the number of simultaneously
programmed columns, energy unchanged — every pulse costs energy).

Similarity-search cost is a lump parameter per query (e_query covers DAC,
PCM read and ADC; no finer breakdown is available). The normalized per-class-
vector search energy REPORTED_SEARCH_ENERGY_PER_VECTOR_J is exposed as a
reported constant: it does not follow from e_query by any documented column
count, so it is never derived here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .protocol import ProtocolSpec

PROGRAMMING_MODES = ("serial", "column_parallel")

#: Reported normalized search energy per 256-length class vector (undecomposed).
REPORTED_SEARCH_ENERGY_PER_VECTOR_J = 19.1e-12


@dataclass(frozen=True)
class EnergyTimeParams:
    """Pulse-level physical parameters plus lump per-query costs."""

    v_source: float = 2.34
    i_peak: float = 150e-6
    t_flat: float = 5e-9
    t_trail: float = 40e-9
    t_query: float = 520e-9
    e_query: float = 7.74e-9
    programming_mode: str = "column_parallel"
    e_pulse_from_scratch_ratio: float = 4.7

    def __post_init__(self):
        for name in ("v_source", "i_peak", "t_flat", "t_trail", "t_query", "e_query"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.programming_mode not in PROGRAMMING_MODES:
            raise ValueError(
                f"programming_mode must be one of {PROGRAMMING_MODES}, "
                f"got {self.programming_mode!r}"
            )
        if self.e_pulse_from_scratch_ratio < 1:
            raise ValueError("e_pulse_from_scratch_ratio must be >= 1")


def pulse_energy(params: EnergyTimeParams) -> float:
    """Energy of one SET pulse: flat segment plus triangular trailing edge."""
    return params.v_source * params.i_peak * (params.t_flat + params.t_trail / 2.0)


def class_update_cost(d: int, params: EnergyTimeParams) -> tuple[float, float]:
    """(seconds, joules) to program one d-element class vector, serial in-column."""
    if d < 1:
        raise ValueError("d must be >= 1")
    time = d * (params.t_flat + params.t_trail)
    return time, d * pulse_energy(params)


def sessions_update_cost(
    n_updates: int, n_parallel_columns: int, d: int, params: EnergyTimeParams
) -> tuple[float, float]:
    """(seconds, joules) for n_updates class updates.

    Energy is mode-independent (every pulse is paid for); time divides by the
    column parallelism in column_parallel mode and is strictly serial
    otherwise.
    """
    if n_updates < 1:
        raise ValueError("n_updates must be >= 1")
    if n_parallel_columns < 1:
        raise ValueError("n_parallel_columns must be >= 1")
    t_class, e_class = class_update_cost(d, params)
    energy = n_updates * e_class
    if params.programming_mode == "column_parallel":
        time = math.ceil(n_updates / n_parallel_columns) * t_class
    else:
        time = n_updates * t_class
    return time, energy


def evaluation_cost(n_queries: int, params: EnergyTimeParams) -> tuple[float, float]:
    """(seconds, joules) to evaluate n_queries similarity searches."""
    if n_queries < 1:
        raise ValueError("n_queries must be >= 1")
    return n_queries * params.t_query, n_queries * params.e_query


@dataclass(frozen=True)
class InSituComparison:
    """In-situ superposition vs. decode-and-reprogram-from-scratch energies."""

    ratio: float
    in_situ_per_element_j: float
    scratch_per_element_j: float
    in_situ_column_j: float
    scratch_column_j: float


def in_situ_vs_scratch(params: EnergyTimeParams, d: int = 256) -> InSituComparison:
    """Per-element and per-column energy comparison at the configured ratio."""
    e_in = pulse_energy(params)
    ratio = params.e_pulse_from_scratch_ratio
    return InSituComparison(
        ratio=ratio,
        in_situ_per_element_j=e_in,
        scratch_per_element_j=ratio * e_in,
        in_situ_column_j=d * e_in,
        scratch_column_j=d * ratio * e_in,
    )


@dataclass(frozen=True)
class SessionCost:
    session_index: int
    n_updates: int
    n_parallel_columns: int
    prog_time_s: float
    prog_energy_j: float
    n_queries: int
    eval_time_s: float
    eval_energy_j: float


@dataclass(frozen=True)
class EnergyReport:
    """Per-session phase costs plus totals for one protocol shape."""

    d: int
    sessions: tuple[SessionCost, ...]
    total_prog_time_s: float
    total_prog_energy_j: float
    total_eval_time_s: float
    total_eval_energy_j: float
    comparison: InSituComparison

    @property
    def total_time_s(self) -> float:
        return self.total_prog_time_s + self.total_eval_time_s

    @property
    def total_energy_j(self) -> float:
        return self.total_prog_energy_j + self.total_eval_energy_j


def protocol_energy_report(
    spec: ProtocolSpec, params: EnergyTimeParams, d: int
) -> EnergyReport:
    """Cost every session of ``spec``: ways*shots column updates (ways columns
    programmable in parallel) plus classes_seen*queries_per_class searches."""
    sessions = []
    for s in range(1, spec.n_sessions + 1):
        ways = spec.session_ways(s)
        shots = spec.session_shots(s)
        n_updates = ways * shots
        prog_t, prog_e = sessions_update_cost(n_updates, ways, d, params)
        n_queries = spec.classes_seen(s) * spec.queries_per_class
        eval_t, eval_e = evaluation_cost(n_queries, params)
        sessions.append(
            SessionCost(s, n_updates, ways, prog_t, prog_e, n_queries, eval_t, eval_e)
        )
    return EnergyReport(
        d=d,
        sessions=tuple(sessions),
        total_prog_time_s=sum(x.prog_time_s for x in sessions),
        total_prog_energy_j=sum(x.prog_energy_j for x in sessions),
        total_eval_time_s=sum(x.eval_time_s for x in sessions),
        total_eval_energy_j=sum(x.eval_energy_j for x in sessions),
        comparison=in_situ_vs_scratch(params, d),
    )


_PREFIXES = ((0, ""), (-3, "m"), (-6, "u"), (-9, "n"), (-12, "p"))


def si(value: float, unit: str) -> str:
    """Engineering-prefix rendering, 3 significant digits (8.775e-12 J -> 8.78 pJ).

    Rounds half away from zero in decimal, so 8.775 becomes 8.78 rather than
    the 8.77 that binary %.3g would produce. The value is first snapped to 12
    significant digits, which strips accumulated float dust (a product that
    lands 1 ulp under 8.775e-12 still renders as 8.78 pJ).
    """
    for exp10, prefix in _PREFIXES:
        if value >= 10.0**exp10:
            break
    x = Decimal(f"{float(value):.12g}").scaleb(-exp10)
    if x == 0:
        text = "0"
    else:
        lead = x.adjusted()
        rounded = x.scaleb(-lead).quantize(Decimal("1.00"), rounding=ROUND_HALF_UP)
        text = format(rounded.scaleb(lead).normalize(), "f")
    return f"{text} {prefix}{unit}"


def report_text(report: EnergyReport, params: EnergyTimeParams) -> str:
    """Key-value rendering of an EnergyReport (deterministic)."""
    t_class, e_class = class_update_cost(report.d, params)
    e_pulse = pulse_energy(params)
    lines = [
        f"d: {report.d}",
        f"programming_mode: {params.programming_mode}",
        f"pulse_energy_j: {e_pulse:.6g} ({si(e_pulse, 'J')})",
        f"class_update_time_s: {t_class:.6g} ({si(t_class, 's')})",
        f"class_update_energy_j: {e_class:.6g} ({si(e_class, 'J')})",
        f"query_time_s: {params.t_query:.6g} ({si(params.t_query, 's')})",
        f"query_energy_j: {params.e_query:.6g} ({si(params.e_query, 'J')})",
    ]
    for x in report.sessions:
        lines.append(
            f"session {x.session_index}: n_updates={x.n_updates} "
            f"prog_time_s={x.prog_time_s:.6g} ({si(x.prog_time_s, 's')}) "
            f"prog_energy_j={x.prog_energy_j:.6g} ({si(x.prog_energy_j, 'J')}) "
            f"n_queries={x.n_queries} eval_time_s={x.eval_time_s:.6g} "
            f"({si(x.eval_time_s, 's')}) eval_energy_j={x.eval_energy_j:.6g} "
            f"({si(x.eval_energy_j, 'J')})"
        )
    c = report.comparison
    lines += [
        f"total_prog_time_s: {report.total_prog_time_s:.6g} "
        f"({si(report.total_prog_time_s, 's')})",
        f"total_prog_energy_j: {report.total_prog_energy_j:.6g} "
        f"({si(report.total_prog_energy_j, 'J')})",
        f"total_eval_time_s: {report.total_eval_time_s:.6g} "
        f"({si(report.total_eval_time_s, 's')})",
        f"total_eval_energy_j: {report.total_eval_energy_j:.6g} "
        f"({si(report.total_eval_energy_j, 'J')})",
        f"total_time_s: {report.total_time_s:.6g} ({si(report.total_time_s, 's')})",
        f"total_energy_j: {report.total_energy_j:.6g} ({si(report.total_energy_j, 'J')})",
        f"in_situ_per_element_j: {c.in_situ_per_element_j:.6g} "
        f"({si(c.in_situ_per_element_j, 'J')})",
        f"from_scratch_per_element_j: {c.scratch_per_element_j:.6g} "
        f"({si(c.scratch_per_element_j, 'J')})",
        f"in_situ_column_j: {c.in_situ_column_j:.6g} ({si(c.in_situ_column_j, 'J')})",
        f"from_scratch_column_j: {c.scratch_column_j:.6g} "
        f"({si(c.scratch_column_j, 'J')})",
        f"from_scratch_ratio: {c.ratio:.6g}",
        f"reported_search_energy_per_vector_j: "
        f"{REPORTED_SEARCH_ENERGY_PER_VECTOR_J:.6g} "
        f"({si(REPORTED_SEARCH_ENERGY_PER_VECTOR_J, 'J')})",
    ]
    return "\n".join(lines) + "\n"


REPORT_CSV_HEADER = (
    "session,n_updates,n_parallel_columns,prog_time_s,prog_energy_j,"
    "n_queries,eval_time_s,eval_energy_j"
)


def write_report_csv(report: EnergyReport, path) -> None:
    """Per-session phase costs as CSV, with a final ``total`` row."""
    with open(path, "w", newline="") as fh:
        fh.write(REPORT_CSV_HEADER + "\n")
        for x in report.sessions:
            fh.write(
                f"{x.session_index},{x.n_updates},{x.n_parallel_columns},"
                f"{x.prog_time_s:.10g},{x.prog_energy_j:.10g},{x.n_queries},"
                f"{x.eval_time_s:.10g},{x.eval_energy_j:.10g}\n"
            )
        fh.write(
            f"total,,,{report.total_prog_time_s:.10g},{report.total_prog_energy_j:.10g},,"
            f"{report.total_eval_time_s:.10g},{report.total_eval_energy_j:.10g}\n"
        )
