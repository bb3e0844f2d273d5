"""Exception and warning types shared across the package."""


class PcmemError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(PcmemError):
    """A vector's length does not match the array dimension it targets."""


class ColumnOutOfRange(PcmemError):
    """A column index is outside [0, cols)."""


class EmptyActiveSet(PcmemError):
    """An MVM was requested over an empty set of columns."""


class CapacityExceeded(PcmemError):
    """A new class was presented but every column is already allocated."""


class EmptyMemory(PcmemError):
    """A query was issued against a memory holding no classes."""


class LengthMismatch(PcmemError):
    """Two result lists that must align have different lengths."""


class RangeViolation(PcmemError):
    """A vector element is outside its permitted range."""


class ParseError(PcmemError):
    """An input file is syntactically or structurally malformed."""


class ConfigInvalid(PcmemError):
    """A configuration failed schema or semantic validation."""


class SaturationWarning(UserWarning):
    """A programmed column contains a device pinned at g_sat (non-fatal)."""
