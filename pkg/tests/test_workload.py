"""Synthetic prototype/support/query generators and embedding CSV I/O."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcmem.errors import DimensionMismatch, ParseError, RangeViolation
from pcmem.workload import (
    EmbeddingDataset,
    EmbeddingRecord,
    SyntheticWorkloadParams,
    embedding_header,
    gen_prototypes,
    gen_query,
    gen_query_batch,
    gen_support,
    load_embeddings,
    save_embeddings,
)


class TestPrototypes:
    def test_shape_dtype_and_values(self):
        params = SyntheticWorkloadParams(d=64)
        protos = gen_prototypes(10, params, np.random.default_rng(0))
        assert protos.shape == (10, 64)
        assert protos.dtype == np.int8
        assert set(np.unique(protos)) <= {-1, 1}

    def test_deterministic_under_seed(self):
        params = SyntheticWorkloadParams(d=32)
        a = gen_prototypes(5, params, np.random.default_rng(3))
        b = gen_prototypes(5, params, np.random.default_rng(3))
        np.testing.assert_array_equal(a, b)

    def test_quasi_orthogonality(self):
        # pairwise dots of independent bipolar vectors have mean 0, std sqrt(d);
        # for d=256 a |dot| above 72 (4.5 sigma) across 100 classes is essentially
        # impossible, while any systematic correlation would blow past it
        params = SyntheticWorkloadParams(d=256)
        protos = gen_prototypes(100, params, np.random.default_rng(42)).astype(np.int64)
        gram = protos @ protos.T
        off = gram[~np.eye(100, dtype=bool)]
        assert np.abs(off).max() <= 72
        assert abs(off.mean()) < 2.0
        assert 0.7 * 256 < off.var() < 1.3 * 256


class TestSupports:
    def test_zero_flip_returns_exact_copy(self):
        rng = np.random.default_rng(1)
        p = gen_prototypes(1, SyntheticWorkloadParams(d=40), rng)[0]
        s = gen_support(p, 0.0, rng)
        np.testing.assert_array_equal(s, p)
        assert s is not p  # caller may mutate freely

    def test_support_stays_bipolar(self):
        rng = np.random.default_rng(2)
        p = gen_prototypes(1, SyntheticWorkloadParams(d=100), rng)[0]
        for _ in range(20):
            s = gen_support(p, 0.3, rng)
            assert set(np.unique(s)) <= {-1, 1}

    def test_flip_rate_matches_probability(self):
        rng = np.random.default_rng(9)
        d, beta, trials = 256, 0.25, 500
        p = gen_prototypes(1, SyntheticWorkloadParams(d=d), rng)[0]
        hamming = np.array(
            [(gen_support(p, beta, rng) != p).sum() for _ in range(trials)]
        )
        # mean d*beta = 64, sem = sqrt(d*beta*(1-beta)/trials) ~ 0.31
        assert abs(hamming.mean() - d * beta) < 1.5
        assert hamming.min() > 30 and hamming.max() < 100


class TestQueries:
    def test_noiseless_query_is_full_scale_prototype(self):
        rng = np.random.default_rng(4)
        p = gen_prototypes(1, SyntheticWorkloadParams(d=24), rng)[0]
        q = gen_query(p, 0.0, rng)
        assert q.dtype == np.int16
        np.testing.assert_array_equal(q, 127 * p.astype(np.int16))

    def test_noisy_query_clamped_to_8bit(self):
        rng = np.random.default_rng(5)
        p = gen_prototypes(1, SyntheticWorkloadParams(d=512), rng)[0]
        q = gen_query(p, 1.5, rng)
        assert q.min() >= -127 and q.max() <= 127

    def test_noise_shrinks_correlation(self):
        rng = np.random.default_rng(6)
        p = gen_prototypes(1, SyntheticWorkloadParams(d=4096), rng)[0]
        clean = gen_query(p, 0.0, rng) @ p.astype(np.int64)
        noisy = gen_query(p, 0.8, rng) @ p.astype(np.int64)
        assert 0 < noisy < clean

    def test_batch_consumes_same_stream_as_loop(self):
        p = gen_prototypes(1, SyntheticWorkloadParams(d=33), np.random.default_rng(7))[0]
        r1 = np.random.default_rng(11)
        batch = gen_query_batch(p, 0.4, 6, r1)
        r2 = np.random.default_rng(11)
        singles = np.stack([gen_query(p, 0.4, r2) for _ in range(6)])
        np.testing.assert_array_equal(batch, singles)
        assert r1.standard_normal() == r2.standard_normal()

    @settings(max_examples=30)
    @given(sigma=st.floats(0.0, 2.0), seed=st.integers(0, 2**16))
    def test_query_always_in_range(self, sigma, seed):
        rng = np.random.default_rng(seed)
        p = gen_prototypes(1, SyntheticWorkloadParams(d=64), rng)[0]
        q = gen_query(p, sigma, rng)
        assert np.all(np.abs(q) <= 127)


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            SyntheticWorkloadParams(d=0)
        with pytest.raises(ValueError):
            SyntheticWorkloadParams(flip_prob=0.5)
        with pytest.raises(ValueError):
            SyntheticWorkloadParams(flip_prob=-0.1)
        with pytest.raises(ValueError):
            SyntheticWorkloadParams(query_noise=-1.0)
        with pytest.raises(ValueError):
            gen_prototypes(0, SyntheticWorkloadParams(), np.random.default_rng(0))


def _dataset(d=4):
    recs = [
        EmbeddingRecord(0, 0, "support", np.array([1, -1, 1, 1], dtype=np.int8)),
        EmbeddingRecord(0, 1, "support", np.array([-1, -1, 1, -1], dtype=np.int8)),
        EmbeddingRecord(0, 0, "query", np.array([127, -127, 100, 90], dtype=np.int16)),
        EmbeddingRecord(1, 2, "support", np.array([1, 1, 1, 1], dtype=np.int8)),
        EmbeddingRecord(1, 2, "query", np.array([5, 0, -3, 127], dtype=np.int16)),
    ]
    return EmbeddingDataset(d=d, records=recs)


class TestEmbeddingIO:
    def test_header_layout(self):
        assert embedding_header(3) == ["session", "class_id", "role", "e0", "e1", "e2"]

    def test_round_trip(self, tmp_path):
        ds = _dataset()
        path = tmp_path / "emb.csv"
        save_embeddings(ds, path)
        back = load_embeddings(path)
        assert back.d == 4
        assert back.sessions() == [0, 1]
        assert len(back.records) == 5
        for a, b in zip(back.records, ds.records):
            assert (a.session, a.class_id, a.role) == (b.session, b.class_id, b.role)
            np.testing.assert_array_equal(a.vector, b.vector)
        assert back.supports(0)[1][0] == 1
        assert back.queries(1)[0][0] == 2

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_embeddings(tmp_path / "nope.csv")

    @pytest.mark.parametrize(
        "rows,exc,needle",
        [
            ([], ParseError, "empty"),
            (["a,b,c,e0"], ParseError, "header"),
            (["session,class_id,role,e0,e9"], ParseError, "e0"),
            (["session,class_id,role,e0,e1", "0,0,support,1"], DimensionMismatch, ":2:"),
            (["session,class_id,role,e0,e1", "0,0,support,1,2"], RangeViolation, ":2:"),
            (["session,class_id,role,e0,e1", "0,0,query,1,500"], RangeViolation, ":2:"),
            (["session,class_id,role,e0,e1", "0,0,probe,1,1"], ParseError, "role"),
            (["session,class_id,role,e0,e1", "0,x,support,1,1"], ParseError, ":2:"),
            (
                [
                    "session,class_id,role,e0,e1",
                    "0,0,support,1,1",
                    "0,0,support,1,1.5",
                ],
                ParseError,
                ":3:",
            ),
        ],
    )
    def test_malformed_files_pinpoint_line(self, tmp_path, rows, exc, needle):
        path = tmp_path / "bad.csv"
        path.write_text("\n".join(rows) + ("\n" if rows else ""))
        with pytest.raises(exc) as info:
            load_embeddings(path)
        assert needle in str(info.value)
