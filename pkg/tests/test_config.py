"""YAML config parsing, schema validation, error reporting."""

import pytest

from pcmem.config import (
    SCHEMA_VERSION,
    CurveParams,
    RunConfig,
    config_from_mapping,
    load_config,
    resolved_text,
)
from pcmem.errors import ConfigInvalid

FULL_YAML = """\
schema_version: 1
protocol:
  base_ways: 10
  base_shots: 2
  incremental_sessions: 3
  ways_per_session: 2
  shots_per_class: 2
  queries_per_class: 7
device:
  g_reset: 0.0
  n_span: 8
  sigma_prog: 0.05
  sigma_read: 0.02
adc:
  bits: 8
workload:
  d: 64
  flip_prob: 0.1
  query_noise: 0.3
energy:
  programming_mode: serial
curve:
  n_devices: 100
  n_pulses: 12
cols: 32
out_dir: results/run1
seeds: [4, 5, 6]
"""


class TestDefaults:
    def test_minimal_config(self):
        cfg = config_from_mapping({"schema_version": 1})
        assert cfg.schema_version == SCHEMA_VERSION
        assert cfg.protocol.base_ways == 60
        assert cfg.device.sigma_prog == 0.0
        assert cfg.adc.bits == 8
        assert cfg.workload.d == 256
        assert cfg.embeddings is None
        assert cfg.cols == 256
        assert cfg.out_dir == "out"
        assert cfg.seeds == (0,)
        assert cfg.curve == CurveParams()

    def test_curve_params_validation(self):
        with pytest.raises(ValueError):
            CurveParams(n_devices=0)
        with pytest.raises(ValueError):
            CurveParams(n_pulses=-1)


class TestFullFile:
    def test_every_section_lands(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text(FULL_YAML)
        cfg = load_config(path)
        assert cfg.protocol.base_ways == 10
        assert cfg.protocol.queries_per_class == 7
        assert cfg.device.sigma_prog == 0.05
        assert cfg.workload.flip_prob == 0.1
        assert cfg.energy.programming_mode == "serial"
        assert cfg.curve.n_pulses == 12
        assert cfg.cols == 32
        assert cfg.out_dir == "results/run1"
        assert cfg.seeds == (4, 5, 6)

    def test_scalar_seed_coerced_to_tuple(self):
        cfg = config_from_mapping({"schema_version": 1, "seeds": 9})
        assert cfg.seeds == (9,)

    def test_embeddings_path_accepted(self):
        cfg = config_from_mapping({"schema_version": 1, "embeddings": "emb.csv"})
        assert cfg.embeddings == "emb.csv"


class TestRejections:
    def test_schema_version_required(self):
        with pytest.raises(ConfigInvalid) as info:
            config_from_mapping({}, source="cfg.yaml")
        assert "schema_version" in str(info.value)

    def test_wrong_schema_version(self):
        with pytest.raises(ConfigInvalid) as info:
            config_from_mapping({"schema_version": 2})
        assert "unsupported" in str(info.value)

    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigInvalid) as info:
            config_from_mapping({"schema_version": 1, "divice": {}}, source="c.yaml")
        assert "divice" in str(info.value)

    def test_unknown_section_key_reports_dotted_path(self):
        with pytest.raises(ConfigInvalid) as info:
            config_from_mapping(
                {"schema_version": 1, "device": {"sigma_porg": 0.1}}, source="c.yaml"
            )
        assert "device.sigma_porg" in str(info.value)

    def test_section_value_error_wrapped(self):
        with pytest.raises(ConfigInvalid) as info:
            config_from_mapping({"schema_version": 1, "device": {"n_span": 0}})
        assert "device" in str(info.value)

    def test_section_must_be_mapping(self):
        with pytest.raises(ConfigInvalid):
            config_from_mapping({"schema_version": 1, "adc": [1, 2]})

    def test_workload_and_embeddings_exclusive(self):
        with pytest.raises(ConfigInvalid) as info:
            config_from_mapping(
                {"schema_version": 1, "workload": {"d": 8}, "embeddings": "x.csv"}
            )
        assert "mutually exclusive" in str(info.value)

    @pytest.mark.parametrize(
        "patch",
        [
            {"cols": 0},
            {"cols": "many"},
            {"out_dir": 7},
            {"seeds": []},
            {"seeds": ["a"]},
            {"seeds": "0,1"},
            {"embeddings": 3},
        ],
    )
    def test_bad_scalar_fields(self, patch):
        data = {"schema_version": 1, **patch}
        with pytest.raises(ConfigInvalid):
            config_from_mapping(data)

    def test_top_level_must_be_mapping(self):
        with pytest.raises(ConfigInvalid):
            config_from_mapping([1, 2, 3])


class TestLoadConfig:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigInvalid) as info:
            load_config(tmp_path / "absent.yaml")
        assert "absent.yaml" in str(info.value)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        with pytest.raises(ConfigInvalid) as info:
            load_config(path)
        assert "empty" in str(info.value)

    def test_syntax_error_carries_line_and_column(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("schema_version: 1\nprotocol:\n  base_ways: [1, 2\n")
        with pytest.raises(ConfigInvalid) as info:
            load_config(path)
        message = str(info.value)
        assert "broken.yaml:" in message
        # a line:column position must be present
        tail = message.split("broken.yaml:", 1)[1]
        line, col = tail.split(":")[:2]
        assert line.isdigit() and col.isdigit()


class TestResolvedText:
    def test_flat_dotted_rendering(self):
        text = resolved_text(RunConfig())
        assert text.startswith("schema_version: 1\n")
        assert "protocol.base_ways: 60" in text
        assert "device.sigma_prog: 0.0" in text
        assert "adc.bits: 8" in text
        assert "workload.d: 256" in text
        assert "curve.n_pulses: 20" in text
        assert "seeds: [0]" in text
        assert text.endswith("\n")
