"""Analytic energy/latency model: pulse, class update, session, report."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pcmem.energy import (
    REPORTED_SEARCH_ENERGY_PER_VECTOR_J,
    EnergyTimeParams,
    class_update_cost,
    evaluation_cost,
    in_situ_vs_scratch,
    protocol_energy_report,
    pulse_energy,
    report_text,
    sessions_update_cost,
    si,
    write_report_csv,
)
from pcmem.protocol import ProtocolSpec

DEFAULT = EnergyTimeParams()


class TestPulse:
    def test_default_pulse_energy(self):
        # 2.34 V * 150 uA * (5 ns + 40 ns / 2) = 8.775 pJ
        assert pulse_energy(DEFAULT) == pytest.approx(8.775e-12, abs=1e-17)

    def test_trailing_edge_carries_half_weight(self):
        p = EnergyTimeParams(t_flat=5e-9, t_trail=2e-9)
        assert pulse_energy(p) == pytest.approx(2.34 * 150e-6 * 6e-9)

    def test_linear_in_voltage_and_current(self):
        doubled_v = EnergyTimeParams(v_source=2 * 2.34)
        doubled_i = EnergyTimeParams(i_peak=2 * 150e-6)
        assert pulse_energy(doubled_v) == pytest.approx(2 * pulse_energy(DEFAULT))
        assert pulse_energy(doubled_i) == pytest.approx(2 * pulse_energy(DEFAULT))


class TestClassUpdate:
    def test_256_element_column(self):
        t, e = class_update_cost(256, DEFAULT)
        assert t == pytest.approx(11.52e-6, rel=1e-12)
        assert e == pytest.approx(2.2464e-9, rel=1e-12)
        # rounded presentation values
        assert round(t * 1e6, 1) == 11.5
        assert round(e * 1e9, 2) == 2.25

    def test_scales_with_dimension(self):
        t1, e1 = class_update_cost(1, DEFAULT)
        t64, e64 = class_update_cost(64, DEFAULT)
        assert t64 == pytest.approx(64 * t1)
        assert e64 == pytest.approx(64 * e1)

    def test_invalid_dimension(self):
        with pytest.raises(ValueError):
            class_update_cost(0, DEFAULT)


class TestSessionUpdates:
    def test_25_updates_5_parallel_columns(self):
        t, e = sessions_update_cost(25, 5, 256, DEFAULT)
        assert t == pytest.approx(57.6e-6, rel=1e-12)
        assert e == pytest.approx(56.16e-9, rel=1e-12)

    def test_serial_mode_multiplies_time_not_energy(self):
        serial = EnergyTimeParams(programming_mode="serial")
        t, e = sessions_update_cost(25, 5, 256, serial)
        assert t == pytest.approx(288e-6, rel=1e-12)
        assert e == pytest.approx(56.16e-9, rel=1e-12)

    def test_single_update_equals_class_update(self):
        assert sessions_update_cost(1, 1, 256, DEFAULT) == class_update_cost(256, DEFAULT)

    def test_partial_last_wave_rounds_up(self):
        t_class, _ = class_update_cost(256, DEFAULT)
        t, _ = sessions_update_cost(26, 5, 256, DEFAULT)
        assert t == pytest.approx(6 * t_class)

    def test_validation(self):
        with pytest.raises(ValueError):
            sessions_update_cost(0, 5, 256, DEFAULT)
        with pytest.raises(ValueError):
            sessions_update_cost(5, 0, 256, DEFAULT)

    @given(n=st.integers(1, 400), npar=st.integers(1, 60))
    def test_time_bracketed_by_perfect_and_no_parallelism(self, n, npar):
        t_class, e_class = class_update_cost(256, DEFAULT)
        t, e = sessions_update_cost(n, npar, 256, DEFAULT)
        assert e == pytest.approx(n * e_class, rel=1e-12)
        assert t <= n * t_class * (1 + 1e-12)
        assert t >= (n / npar) * t_class * (1 - 1e-12)
        assert t == pytest.approx(math.ceil(n / npar) * t_class, rel=1e-12)


class TestEvaluation:
    def test_ten_thousand_queries(self):
        t, e = evaluation_cost(10_000, DEFAULT)
        assert t == pytest.approx(5.2e-3, rel=1e-12)
        assert e == pytest.approx(77.4e-6, rel=1e-12)
        # the often-quoted 77.3 uJ rounds the same quantity down; stay within 0.2%
        assert abs(e - 77.3e-6) / 77.3e-6 < 2e-3

    def test_single_query(self):
        assert evaluation_cost(1, DEFAULT) == (520e-9, 7.74e-9)

    def test_zero_queries_rejected(self):
        with pytest.raises(ValueError):
            evaluation_cost(0, DEFAULT)

    @given(n=st.integers(1, 10_000), k=st.integers(1, 8))
    def test_homogeneous_in_query_count(self, n, k):
        t1, e1 = evaluation_cost(n, DEFAULT)
        tk, ek = evaluation_cost(k * n, DEFAULT)
        assert tk == pytest.approx(k * t1, rel=1e-12)
        assert ek == pytest.approx(k * e1, rel=1e-12)


class TestInSituComparison:
    def test_default_ratio_and_columns(self):
        c = in_situ_vs_scratch(DEFAULT, d=256)
        assert c.ratio == 4.7
        assert c.in_situ_per_element_j == pytest.approx(8.775e-12)
        assert c.scratch_per_element_j == pytest.approx(4.7 * 8.775e-12)
        assert c.in_situ_column_j == pytest.approx(2.2464e-9, rel=1e-12)
        assert c.scratch_column_j == pytest.approx(10.56e-9, rel=1e-3)

    def test_ratio_below_one_rejected(self):
        with pytest.raises(ValueError):
            EnergyTimeParams(e_pulse_from_scratch_ratio=0.5)


class TestProtocolReport:
    def test_totals_are_sums_of_parts(self):
        spec = ProtocolSpec()
        report = protocol_energy_report(spec, DEFAULT, d=256)
        assert len(report.sessions) == 9
        assert report.total_prog_time_s == pytest.approx(
            sum(x.prog_time_s for x in report.sessions)
        )
        assert report.total_prog_energy_j == pytest.approx(
            sum(x.prog_energy_j for x in report.sessions)
        )
        assert report.total_eval_energy_j == pytest.approx(
            sum(x.eval_energy_j for x in report.sessions)
        )
        assert report.total_time_s == pytest.approx(
            report.total_prog_time_s + report.total_eval_time_s
        )
        assert report.total_energy_j == pytest.approx(
            report.total_prog_energy_j + report.total_eval_energy_j
        )

    def test_default_shape_session_numbers(self):
        report = protocol_energy_report(ProtocolSpec(), DEFAULT, d=256)
        base = report.sessions[0]
        assert base.n_updates == 300 and base.n_parallel_columns == 60
        assert base.prog_time_s == pytest.approx(57.6e-6, rel=1e-12)
        assert base.n_queries == 6000
        inc = report.sessions[3]
        assert inc.n_updates == 25 and inc.n_parallel_columns == 5
        assert inc.prog_time_s == pytest.approx(57.6e-6, rel=1e-12)
        assert inc.n_queries == 75 * 100
        # 500 total column updates, 72000 total queries
        assert report.total_prog_energy_j == pytest.approx(500 * 2.2464e-9, rel=1e-9)
        assert report.total_eval_time_s == pytest.approx(72_000 * 520e-9, rel=1e-12)

    def test_report_text_pretty_values(self):
        report = protocol_energy_report(ProtocolSpec(), DEFAULT, d=256)
        text = report_text(report, DEFAULT)
        for needle in ("8.78 pJ", "57.6 us", "2.25 nJ", "11.5 us", "4.7", "19.1 pJ"):
            assert needle in text

    def test_csv_layout_and_total_row(self, tmp_path):
        report = protocol_energy_report(ProtocolSpec(), DEFAULT, d=256)
        path = tmp_path / "energy.csv"
        write_report_csv(report, path)
        lines = path.read_text().splitlines()
        assert lines[0] == (
            "session,n_updates,n_parallel_columns,prog_time_s,prog_energy_j,"
            "n_queries,eval_time_s,eval_energy_j"
        )
        assert len(lines) == 1 + 9 + 1
        first = lines[1].split(",")
        assert first[:3] == ["1", "300", "60"]
        total = lines[-1].split(",")
        assert total[0] == "total"
        assert float(total[3]) == pytest.approx(report.total_prog_time_s)
        assert float(total[4]) == pytest.approx(report.total_prog_energy_j)
        assert float(total[7]) == pytest.approx(report.total_eval_energy_j)


class TestSiFormatter:
    @pytest.mark.parametrize(
        "value,unit,expected",
        [
            (8.775e-12, "J", "8.78 pJ"),
            (2.2464e-9, "J", "2.25 nJ"),
            (57.6e-6, "s", "57.6 us"),
            (11.52e-6, "s", "11.5 us"),
            (5.2e-3, "s", "5.2 ms"),
            (77.4e-6, "J", "77.4 uJ"),
            (1.5, "s", "1.5 s"),
            (19.1e-12, "J", "19.1 pJ"),
        ],
    )
    def test_engineering_prefixes(self, value, unit, expected):
        assert si(value, unit) == expected

    def test_reported_search_constant_is_not_derived(self):
        # exposed verbatim; changing pulse parameters must not move it
        assert REPORTED_SEARCH_ENERGY_PER_VECTOR_J == 19.1e-12
        bigger = EnergyTimeParams(v_source=10.0)
        assert pulse_energy(bigger) != pulse_energy(DEFAULT)
        assert REPORTED_SEARCH_ENERGY_PER_VECTOR_J == 19.1e-12
