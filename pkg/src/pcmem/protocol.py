"""Few-shot class-incremental session protocol over EM and oracle in lockstep.

A run is one base session (base_ways classes, base_shots supports each)
followed by incremental_sessions few-shot sessions (ways_per_session novel
classes, shots_per_class supports each). After the writes of every session,
queries_per_class queries are evaluated for every class seen so far, against
both the PCM explicit memory and the exact integer oracle; identical support
and query samples are presented to both, so per-session degradation is
attributable purely to device/ADC effects.

RNG discipline: the run RNG is split once into a workload stream and a device
stream (rng.spawn(2)), so the sampled workload is bit-identical regardless of
device-noise settings. Within a session, supports are drawn class-major, then
queries class-major in one batch per class (the batch consumes the stream
exactly like per-query draws would).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crossbar import AdcConfig, CrossbarArray
from .device import DeviceModelParams
from .errors import ConfigInvalid, LengthMismatch
from .memory import ExplicitMemory, classify_batch, learn_support
from .oracle import OracleMemory, oracle_classify_batch, oracle_learn
from .workload import (
    EmbeddingDataset,
    SyntheticWorkloadParams,
    gen_prototypes,
    gen_query_batch,
    gen_support,
)


@dataclass(frozen=True)
class ProtocolSpec:
    """Session structure; defaults follow the 60-base + 8x5-way 5-shot shape."""

    base_ways: int = 60
    base_shots: int = 5
    incremental_sessions: int = 8
    ways_per_session: int = 5
    shots_per_class: int = 5
    queries_per_class: int = 100
    seed: int | None = None

    def __post_init__(self):
        for name in (
            "base_ways",
            "base_shots",
            "ways_per_session",
            "shots_per_class",
            "queries_per_class",
        ):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.incremental_sessions < 0:
            raise ValueError("incremental_sessions must be >= 0")

    @property
    def n_sessions(self) -> int:
        return 1 + self.incremental_sessions

    @property
    def total_classes(self) -> int:
        return self.base_ways + self.incremental_sessions * self.ways_per_session

    def session_ways(self, session_index: int) -> int:
        return self.base_ways if session_index == 1 else self.ways_per_session

    def session_shots(self, session_index: int) -> int:
        return self.base_shots if session_index == 1 else self.shots_per_class

    def classes_seen(self, session_index: int) -> int:
        return self.base_ways + (session_index - 1) * self.ways_per_session


@dataclass(frozen=True)
class SessionResult:
    session_index: int
    classes_seen: int
    accuracy_imc: float
    accuracy_oracle: float
    degradation: float  # accuracy_oracle - accuracy_imc


def _evaluate_session(
    em: ExplicitMemory,
    orc: OracleMemory,
    session_index: int,
    class_queries: list[tuple[int, np.ndarray]],
    adc: AdcConfig,
    dev_rng: np.random.Generator,
    query_log: list | None,
) -> SessionResult:
    """Classify every (class_id, query batch) pair against EM and oracle."""
    total = 0
    correct_imc = 0
    correct_orc = 0
    for class_id, queries in class_queries:
        pred_imc = classify_batch(em, queries, adc, dev_rng)
        pred_orc = oracle_classify_batch(orc, queries)
        total += queries.shape[0]
        correct_imc += int(np.sum(pred_imc == class_id))
        correct_orc += int(np.sum(pred_orc == class_id))
        if query_log is not None:
            for i, (pi, po) in enumerate(zip(pred_imc, pred_orc)):
                query_log.append((session_index, class_id, i, int(pi), int(po)))
    acc_imc = correct_imc / total
    acc_orc = correct_orc / total
    return SessionResult(
        session_index=session_index,
        classes_seen=em.next_free,
        accuracy_imc=acc_imc,
        accuracy_oracle=acc_orc,
        degradation=acc_orc - acc_imc,
    )


def _run_synthetic(
    spec: ProtocolSpec,
    workload: SyntheticWorkloadParams,
    em: ExplicitMemory,
    orc: OracleMemory,
    adc: AdcConfig,
    wl_rng: np.random.Generator,
    dev_rng: np.random.Generator,
    query_log: list | None,
    last_session: int,
) -> list[SessionResult]:
    prototypes = gen_prototypes(spec.total_classes, workload, wl_rng)
    results = []
    next_class = 0
    for s in range(1, last_session + 1):
        ways = spec.session_ways(s)
        shots = spec.session_shots(s)
        for class_id in range(next_class, next_class + ways):
            for _ in range(shots):
                support = gen_support(prototypes[class_id], workload.flip_prob, wl_rng)
                learn_support(em, class_id, support, dev_rng)
                oracle_learn(orc, class_id, support)
        next_class += ways
        class_queries = [
            (cid, gen_query_batch(prototypes[cid], workload.query_noise,
                                  spec.queries_per_class, wl_rng))
            for cid in range(next_class)
        ]
        results.append(
            _evaluate_session(em, orc, s, class_queries, adc, dev_rng, query_log)
        )
    return results


def _validate_dataset(spec: ProtocolSpec, ds: EmbeddingDataset, rows: int) -> list[int]:
    if ds.d != rows:
        raise ConfigInvalid(f"embedding dimension {ds.d} != array rows {rows}")
    sessions = ds.sessions()
    if len(sessions) != spec.n_sessions:
        raise ConfigInvalid(
            f"dataset has {len(sessions)} sessions, spec wants {spec.n_sessions}"
        )
    seen: set[int] = set()
    for k, session in enumerate(sessions, start=1):
        ways = spec.session_ways(k)
        shots = spec.session_shots(k)
        supports = ds.supports(session)
        new_classes = {cid for cid, _ in supports}
        if new_classes & seen:
            raise ConfigInvalid(
                f"session {session}: supports reference previously seen classes "
                f"{sorted(new_classes & seen)}"
            )
        if len(new_classes) != ways:
            raise ConfigInvalid(
                f"session {session}: {len(new_classes)} novel classes, spec wants {ways}"
            )
        per_class: dict[int, int] = {}
        for cid, _ in supports:
            per_class[cid] = per_class.get(cid, 0) + 1
        bad = {c: n for c, n in per_class.items() if n != shots}
        if bad:
            raise ConfigInvalid(
                f"session {session}: support counts {bad} differ from spec shots {shots}"
            )
        seen |= new_classes
        q_per_class: dict[int, int] = {}
        for cid, _ in ds.queries(session):
            if cid not in seen:
                raise ConfigInvalid(
                    f"session {session}: query for unseen class {cid}"
                )
            q_per_class[cid] = q_per_class.get(cid, 0) + 1
        if set(q_per_class) != seen or any(
            n != spec.queries_per_class for n in q_per_class.values()
        ):
            raise ConfigInvalid(
                f"session {session}: queries must cover every seen class exactly "
                f"{spec.queries_per_class} times"
            )
    return sessions


def _run_embeddings(
    spec: ProtocolSpec,
    ds: EmbeddingDataset,
    em: ExplicitMemory,
    orc: OracleMemory,
    adc: AdcConfig,
    dev_rng: np.random.Generator,
    query_log: list | None,
    last_session: int,
) -> list[SessionResult]:
    sessions = _validate_dataset(spec, ds, em.array.rows)
    results = []
    for k, session in enumerate(sessions[:last_session], start=1):
        for class_id, support in ds.supports(session):
            learn_support(em, class_id, support, dev_rng)
            oracle_learn(orc, class_id, support)
        by_class: dict[int, list[np.ndarray]] = {}
        for class_id, query in ds.queries(session):
            by_class.setdefault(class_id, []).append(query)
        class_queries = [
            (cid, np.stack(qs)) for cid, qs in sorted(by_class.items())
        ]
        results.append(
            _evaluate_session(em, orc, k, class_queries, adc, dev_rng, query_log)
        )
    return results


def run_protocol(
    spec: ProtocolSpec,
    workload: SyntheticWorkloadParams | EmbeddingDataset,
    device_params: DeviceModelParams | None = None,
    adc: AdcConfig | None = None,
    rng: np.random.Generator | None = None,
    cols: int = 256,
    query_log: list | None = None,
    return_state: bool = False,
    through_session: int | None = None,
):
    """Run the full protocol; returns the list of SessionResult in order.

    With return_state=True, returns (results, em, oracle) instead. query_log,
    if a list, receives one (session, class_id, query_index, pred_imc,
    pred_oracle) tuple per evaluated query. through_session truncates the run
    after that session (writes and evaluation included).
    """
    device_params = device_params or DeviceModelParams()
    adc = adc or AdcConfig()
    if spec.total_classes > cols:
        raise ConfigInvalid(
            f"{spec.total_classes} classes exceed the {cols}-column array"
        )
    last_session = spec.n_sessions if through_session is None else through_session
    if not 1 <= last_session <= spec.n_sessions:
        raise ConfigInvalid(
            f"through_session must lie in [1, {spec.n_sessions}], got {through_session}"
        )
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    wl_rng, dev_rng = rng.spawn(2)
    d = workload.d
    array = CrossbarArray(rows=d, cols=cols, device_params=device_params, rng=dev_rng)
    em = ExplicitMemory(array)
    orc = OracleMemory(d=d)
    if isinstance(workload, EmbeddingDataset):
        results = _run_embeddings(
            spec, workload, em, orc, adc, dev_rng, query_log, last_session
        )
    else:
        results = _run_synthetic(
            spec, workload, em, orc, adc, wl_rng, dev_rng, query_log, last_session
        )
    if return_state:
        return results, em, orc
    return results


@dataclass(frozen=True)
class ComparisonSummary:
    """Per-session accuracy gaps (reference - run) plus worst/best."""

    gaps: tuple[float, ...]
    worst: float
    best: float


def compare_runs(
    imc: list[SessionResult], reference: list[SessionResult]
) -> ComparisonSummary:
    """Per-session accuracy_imc gaps of ``imc`` against ``reference``."""
    if len(imc) != len(reference):
        raise LengthMismatch(f"{len(imc)} sessions vs {len(reference)}")
    gaps = tuple(r.accuracy_imc - i.accuracy_imc for i, r in zip(imc, reference))
    return ComparisonSummary(gaps=gaps, worst=max(gaps), best=min(gaps))


def average_results(per_seed: list[list[SessionResult]]) -> list[SessionResult]:
    """Seed-average of several runs of the same spec (elementwise means)."""
    if not per_seed:
        raise LengthMismatch("no runs to average")
    n_sessions = len(per_seed[0])
    for run in per_seed:
        if len(run) != n_sessions:
            raise LengthMismatch("runs have differing session counts")
    out = []
    for k in range(n_sessions):
        rows = [run[k] for run in per_seed]
        classes = {r.classes_seen for r in rows}
        if len(classes) != 1:
            raise LengthMismatch(f"session {k + 1}: inconsistent classes_seen {classes}")
        acc_i = float(np.mean([r.accuracy_imc for r in rows]))
        acc_o = float(np.mean([r.accuracy_oracle for r in rows]))
        out.append(
            SessionResult(
                session_index=rows[0].session_index,
                classes_seen=rows[0].classes_seen,
                accuracy_imc=acc_i,
                accuracy_oracle=acc_o,
                degradation=acc_o - acc_i,
            )
        )
    return out


RESULTS_HEADER = "session,classes_seen,acc_imc,acc_oracle,degradation"


def write_results_csv(results: list[SessionResult], path) -> None:
    """Session results CSV (schema: RESULTS_HEADER); deterministic formatting."""
    with open(path, "w", newline="") as fh:
        fh.write(RESULTS_HEADER + "\n")
        for r in results:
            fh.write(
                f"{r.session_index},{r.classes_seen},{r.accuracy_imc:.10g},"
                f"{r.accuracy_oracle:.10g},{r.degradation:.10g}\n"
            )


QUERY_LOG_HEADER = "session,class_id,query_index,pred_imc,pred_oracle"


def write_query_log_csv(query_log: list[tuple], path) -> None:
    """Optional per-query debug log CSV."""
    with open(path, "w", newline="") as fh:
        fh.write(QUERY_LOG_HEADER + "\n")
        for session, class_id, qi, pi, po in query_log:
            fh.write(f"{session},{class_id},{qi},{pi},{po}\n")
