"""Exception hierarchy shared by every hyperdoa module."""


class HyperDoaError(Exception):
    """Base class for all errors raised by hyperdoa."""


class ConfigurationError(HyperDoaError, ValueError):
    """Invalid array, scenario, smoothing or experiment configuration."""


class DomainError(HyperDoaError, ValueError):
    """Argument outside its mathematical domain (e.g. angle beyond +-90 deg)."""


class ShapeError(HyperDoaError, ValueError):
    pass


class DegenerateInputError(HyperDoaError, ValueError):
    """Input that makes a normalisation step divide by (nearly) zero."""


class LabelError(HyperDoaError, ValueError):
    pass


class TrainingError(HyperDoaError, ValueError):
    pass


class StateError(HyperDoaError, RuntimeError):
    """Operation invoked on an object in the wrong lifecycle state."""


class DecodingError(HyperDoaError, RuntimeError):
    """Greedy peak selection could not place the requested number of peaks."""

    def __init__(self, message, found=0):
        super().__init__(message)
        self.found = found


class FormatError(HyperDoaError, ValueError):
    """Malformed dataset, model or report file."""


class VersionError(FormatError):
    pass


class TruncatedFileError(FormatError):
    pass


class ReportError(HyperDoaError, ValueError):
    pass
