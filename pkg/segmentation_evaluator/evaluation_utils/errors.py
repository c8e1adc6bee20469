"""Exceptions raised by the evaluation modules."""


class EvaluationError(Exception):
    """Base class for errors the command line reports with a diagnostic."""


class LabelImageError(EvaluationError):
    """A label image could not be read, decoded or encoded."""


class GridError(EvaluationError):
    """A grid spec is malformed or does not fit the image."""


class DimensionMismatchError(EvaluationError):
    """Two compared images differ in width or height."""


class BackgroundMismatchError(EvaluationError):
    """Two compared images use different background labels."""


class PairingError(EvaluationError):
    """Truth and test files could not be paired by filename."""


class ConfigError(EvaluationError):
    """Invalid run configuration."""
