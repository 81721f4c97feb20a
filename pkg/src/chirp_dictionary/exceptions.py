"""Exception hierarchy of the package.

Parameter problems derive from :class:`ValueError` so that callers which only
know the standard library can still catch them.
"""


class ChirpDictionaryError(Exception):
    """Base class of all errors raised by ``chirp_dictionary``."""


class InvalidParameterError(ChirpDictionaryError, ValueError):
    """A physical or numerical parameter is outside its admissible range."""


class GridMismatchError(InvalidParameterError):
    """Signals, grids or waveforms that must share a sampling grid do not."""


class AliasingError(InvalidParameterError):
    """The IF sampling bound ``f_s >= 2*gamma*|t_d - t_ref|`` is violated."""


class SpreadTooLargeError(AliasingError):
    """No reference delay can satisfy the aliasing bound for every scatterer."""


class SceneConfigError(InvalidParameterError):
    """A scene configuration document is missing a field or holds a bad value."""

    def __init__(self, field: str, message: str) -> None:
        self.field = field
        super().__init__(f"{field}: {message}")


class PulseFileError(ChirpDictionaryError):
    """A pulse file could not be decoded."""


class BadMagicError(PulseFileError):
    pass


class UnsupportedVersionError(PulseFileError):
    pass


class TruncatedPulseError(PulseFileError):
    pass


class NumericalCheckError(ChirpDictionaryError):
    """A numerical invariant did not hold within its tolerance."""


class UndersamplingWarning(UserWarning):
    """The sampling frequency is below twice the chirp bandwidth."""
