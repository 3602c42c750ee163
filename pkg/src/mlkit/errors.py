"""Exception hierarchy shared by every mlkit module."""


class MlkitError(Exception):
    """Base class for all errors raised by mlkit."""


class ParseError(MlkitError):
    """Malformed text input (CSV, model text payload, flag values)."""


class ShapeError(MlkitError):
    """Dimension mismatch between an input and what an operation expects."""


class ValidationError(MlkitError):
    """Input violates an operation's preconditions."""


class RankDeficiencyError(MlkitError):
    """Singular linear system; regularization would make it solvable."""


class DivergenceError(MlkitError):
    """An optimizer produced a non-finite loss or gradient."""

    def __init__(self, message, iteration):
        super().__init__(message)
        self.iteration = iteration


class ModelIOError(MlkitError):
    """Base class for model file errors."""


class NotAModelFileError(ModelIOError):
    """Magic bytes do not identify a model file."""


class UnknownModelTypeError(ModelIOError):
    """Envelope names a model type with no registered reader."""


class NewerVersionError(ModelIOError):
    """Model file was written by a newer version than this reader."""


class CorruptModelFileError(ModelIOError):
    """Envelope or payload is truncated or malformed."""

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class RegistrationError(MlkitError):
    """Invalid or duplicate registration in the method registry."""


class UnknownMethodError(MlkitError):
    """No registered method under the requested name."""


class MissingParameterError(MlkitError):
    """A required input parameter is absent from the pack."""


class ParamTypeError(MlkitError):
    """A parameter value does not match its declared type."""
