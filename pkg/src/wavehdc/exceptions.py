"""Exception hierarchy shared by every layer of the package."""


class WaveHDCError(Exception):
    """Base class for all package errors."""


class DimensionError(WaveHDCError, ValueError):
    """Invalid dimension or mismatched dimensions between operands."""


class EmptyInputError(WaveHDCError, ValueError):
    pass


class RangeError(WaveHDCError, ValueError):
    """A scalar parameter lies outside its admissible interval."""


class UndefinedSimilarityError(WaveHDCError, ValueError):
    pass


class SamplingRateError(WaveHDCError, ValueError):
    pass


class InsufficientWindowError(WaveHDCError, ValueError):
    """A recording is shorter than the window the operation needs."""


class GridMismatchError(WaveHDCError, ValueError):
    """Two waveforms or spectra live on different sample/frequency grids."""


class InvalidPlanError(WaveHDCError, ValueError):
    pass


class CalibrationError(WaveHDCError, ValueError):
    pass


class DegenerateFitError(CalibrationError):
    pass


class UndefinedSNRError(WaveHDCError, ValueError):
    pass


class StabilityError(WaveHDCError, ValueError):
    pass


class GeometryError(WaveHDCError, ValueError):
    pass


class ConfigError(WaveHDCError, ValueError):
    """Config text failed schema validation; ``path`` names the offending field."""

    def __init__(self, message, path=None):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
        self.message = message


class UsageError(WaveHDCError):
    pass


class FormatError(WaveHDCError, ValueError):
    """Malformed file on disk (bad magic, truncated block, bad CSV)."""


class ConventionError(WaveHDCError, ValueError):
    """Operation not defined for the requested comb convention or synthesis mode."""
