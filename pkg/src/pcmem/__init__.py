"""Device-level simulator of a PCM-crossbar explicit memory for few-shot
class-incremental learning: progressive-crystallization device model,
differential crossbar with 4-quadrant MVM and ADC quantization, session
protocol against an exact integer oracle, and an analytic energy/latency
model."""

__version__ = "0.1.0"

from .crossbar import AdcConfig, CrossbarArray, mvm, program_column_bipolar
from .device import DeviceModelParams, PcmDeviceState
from .energy import EnergyReport, EnergyTimeParams
from .memory import ExplicitMemory, classify, learn_support, similarity_scores
from .oracle import OracleMemory, oracle_classify, oracle_learn
from .protocol import ProtocolSpec, SessionResult, compare_runs, run_protocol
from .workload import EmbeddingDataset, SyntheticWorkloadParams

__all__ = [
    "AdcConfig",
    "CrossbarArray",
    "DeviceModelParams",
    "EmbeddingDataset",
    "EnergyReport",
    "EnergyTimeParams",
    "ExplicitMemory",
    "OracleMemory",
    "PcmDeviceState",
    "ProtocolSpec",
    "SessionResult",
    "SyntheticWorkloadParams",
    "classify",
    "compare_runs",
    "learn_support",
    "mvm",
    "oracle_classify",
    "oracle_learn",
    "program_column_bipolar",
    "run_protocol",
    "similarity_scores",
]
