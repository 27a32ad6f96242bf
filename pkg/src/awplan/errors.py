"""Exception hierarchy shared across the package."""


class AwplanError(Exception):
    """Base class for every error raised by this package."""


class SchemaError(AwplanError):
    """An input document does not match the expected shape or field types."""


class TopologyError(AwplanError):
    """A topology violates its invariants or a path cannot be resolved on it."""


class SpectrumError(AwplanError):
    """A spectrum placement or partition operation is not allowed."""


class CalibrationError(AwplanError):
    """The calibration data set is insufficient or internally inconsistent."""


class PlanningError(AwplanError):
    """A planning request cannot be evaluated."""


class AdaptationError(AwplanError):
    """A power-leveling computation received unusable inputs."""
