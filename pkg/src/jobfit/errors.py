"""Exception hierarchy shared across the package."""


class JobfitError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(JobfitError):
    """Invalid configuration value or malformed config file."""


class DataFormatError(JobfitError):
    """Malformed or inconsistent input data (logs, embedding tables)."""


class GraphError(JobfitError):
    """Graph construction or adjacency application failure."""


class NumericsError(JobfitError):
    """Non-finite values encountered during propagation, loss, or gradients."""


class SamplingError(JobfitError):
    """Negative sampling could not find an eligible user."""


class TrainingError(JobfitError):
    """Training cannot proceed (empty splits, degenerate setup)."""


class CheckpointError(JobfitError):
    """Corrupt checkpoint file or mismatch with the requested setup."""
