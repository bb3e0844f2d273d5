"""Synthetic workload generators and embedding-file ingestion.

Stands in for the frozen feature-extraction controller: class prototypes are
i.i.d. uniform bipolar vectors (quasi-orthogonal in high dimension — pairwise
normalized dots concentrate near 0 with std 1/sqrt(d)); supports are
prototypes with elements flipped independently with probability flip_prob;
queries are prototypes plus Gaussian noise, scaled and quantized to signed
8-bit. Externally computed support/query vectors can be replayed from a CSV
embedding file instead.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ParseError, RangeViolation
from .vectors import QUERY_MAX, round_half_away

ROLES = ("support", "query")


@dataclass(frozen=True)
class SyntheticWorkloadParams:
    """Knobs of the synthetic controller stand-in.

    flip_prob is the per-element probability that a support differs from its
    class prototype; query_noise is the std of Gaussian noise added to the
    real-valued prototype before 8-bit quantization. Both default to 0 so the
    noiseless configuration reproduces prototypes exactly. ``seed`` is only a
    convenience for standalone generator use; protocol runs own their RNG.
    """

    d: int = 256
    flip_prob: float = 0.0
    query_noise: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if not 0.0 <= self.flip_prob < 0.5:
            raise ValueError(f"flip_prob must be in [0, 0.5), got {self.flip_prob}")
        if self.query_noise < 0:
            raise ValueError(f"query_noise must be >= 0, got {self.query_noise}")


def gen_prototypes(
    n_classes: int, params: SyntheticWorkloadParams, rng: np.random.Generator
) -> np.ndarray:
    """(n_classes, d) int8 matrix of i.i.d. uniform +/-1 prototypes."""
    if n_classes < 1:
        raise ValueError("n_classes must be >= 1")
    return (rng.integers(0, 2, size=(n_classes, params.d)) * 2 - 1).astype(np.int8)


def gen_support(prototype, flip_prob: float, rng: np.random.Generator) -> np.ndarray:
    """Bipolar support: each prototype element flipped with probability flip_prob."""
    prototype = np.asarray(prototype, dtype=np.int8)
    if flip_prob == 0.0:
        return prototype.copy()
    flips = rng.random(prototype.shape[0]) < flip_prob
    return np.where(flips, -prototype, prototype).astype(np.int8)


def gen_query(prototype, query_noise: float, rng: np.random.Generator) -> np.ndarray:
    """Signed 8-bit query from a prototype plus Gaussian noise.

    q_r = clamp(round(QUERY_MAX * (p_r + z_r) / (1 + 3 * sigma)), -127, 127)
    with z ~ Normal(0, sigma^2); sigma = 0 reproduces +/-127 exactly.
    """
    prototype = np.asarray(prototype, dtype=np.float64)
    if query_noise > 0.0:
        prototype = prototype + query_noise * rng.standard_normal(prototype.shape[0])
    scaled = QUERY_MAX * prototype / (1.0 + 3.0 * query_noise)
    q = round_half_away(scaled)
    return np.clip(q, -QUERY_MAX, QUERY_MAX).astype(np.int16)


def gen_query_batch(
    prototype, query_noise: float, n: int, rng: np.random.Generator
) -> np.ndarray:
    """(n, d) queries for one prototype; same RNG stream as n gen_query calls."""
    prototype = np.asarray(prototype, dtype=np.float64)
    block = np.tile(prototype, (n, 1))
    if query_noise > 0.0:
        block = block + query_noise * rng.standard_normal((n, prototype.shape[0]))
    scaled = QUERY_MAX * block / (1.0 + 3.0 * query_noise)
    return np.clip(round_half_away(scaled), -QUERY_MAX, QUERY_MAX).astype(np.int16)


@dataclass
class EmbeddingRecord:
    session: int
    class_id: int
    role: str
    vector: np.ndarray


@dataclass
class EmbeddingDataset:
    """Externally computed controller outputs, grouped by session on demand."""

    d: int
    records: list[EmbeddingRecord] = field(default_factory=list)

    def sessions(self) -> list[int]:
        return sorted({r.session for r in self.records})

    def supports(self, session: int) -> list[tuple[int, np.ndarray]]:
        return [
            (r.class_id, r.vector)
            for r in self.records
            if r.session == session and r.role == "support"
        ]

    def queries(self, session: int) -> list[tuple[int, np.ndarray]]:
        return [
            (r.class_id, r.vector)
            for r in self.records
            if r.session == session and r.role == "query"
        ]


def embedding_header(d: int) -> list[str]:
    return ["session", "class_id", "role"] + [f"e{i}" for i in range(d)]


def load_embeddings(path) -> EmbeddingDataset:
    """Parse and validate an embedding CSV (see embedding_header for schema).

    Supports must be strictly bipolar, queries signed 8-bit integers; every
    violation is reported with its line number.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError(f"{path}: empty file")
        if header[:3] != ["session", "class_id", "role"] or len(header) < 4:
            raise ParseError(
                f"{path}: header must start with session,class_id,role,e0,..."
            )
        d = len(header) - 3
        if header[3:] != [f"e{i}" for i in range(d)]:
            raise ParseError(f"{path}: embedding columns must be e0..e{d - 1}")
        records = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != d + 3:
                raise DimensionMismatch(
                    f"{path}:{lineno}: expected {d + 3} fields, got {len(row)}"
                )
            try:
                session = int(row[0])
                class_id = int(row[1])
                elements = np.array([int(x) for x in row[3:]], dtype=np.int64)
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: non-integer field ({exc})") from exc
            role = row[2]
            if role not in ROLES:
                raise ParseError(f"{path}:{lineno}: role must be one of {ROLES}, got {role!r}")
            if role == "support":
                if not np.all((elements == 1) | (elements == -1)):
                    raise RangeViolation(
                        f"{path}:{lineno}: support elements must be -1 or +1"
                    )
                vector = elements.astype(np.int8)
            else:
                if np.any(np.abs(elements) > QUERY_MAX):
                    raise RangeViolation(
                        f"{path}:{lineno}: query elements must lie in "
                        f"[-{QUERY_MAX}, {QUERY_MAX}]"
                    )
                vector = elements.astype(np.int16)
            records.append(EmbeddingRecord(session, class_id, role, vector))
    return EmbeddingDataset(d=d, records=records)


def save_embeddings(dataset: EmbeddingDataset, path) -> None:
    """Inverse of load_embeddings (round-trips exactly)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(embedding_header(dataset.d))
        for rec in dataset.records:
            writer.writerow(
                [rec.session, rec.class_id, rec.role] + [int(x) for x in rec.vector]
            )
