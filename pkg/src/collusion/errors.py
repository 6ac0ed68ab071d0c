"""Exception hierarchy shared across the toolkit."""


class CollusionError(Exception):
    """Base class for every error raised by this package."""


class InvalidPairError(CollusionError, ValueError):
    """A player pair was built from two identical ids."""


class DomainError(CollusionError, ValueError):
    """An argument lies outside an operation's mathematical domain."""


class EmptyDatasetError(CollusionError):
    """Parsing produced zero accepted matches."""


class ConfigError(CollusionError, ValueError):
    """A simulation or detection configuration is infeasible."""


class EmptyDataError(CollusionError, ValueError):
    """A model was fit on fewer than two rows."""


class NonFiniteFeatureError(CollusionError, ValueError):
    """Feature matrix contains NaN or infinity."""


class WidthMismatchError(CollusionError, ValueError):
    """A feature vector's width does not match the model."""


class VersionMismatchError(CollusionError):
    """A serialized model carries an unsupported format version."""


class CorruptModelError(CollusionError):
    """A serialized model could not be decoded."""


class UnknownPlayerError(CollusionError, LookupError):
    """A referenced player does not exist in the graph."""


class EmptyAfterFilterError(CollusionError):
    """Filtering left nothing to score; `stage` names the filter."""

    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage
