"""Exception types shared across the package."""


class SivicError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(SivicError, ValueError):
    """Invalid configuration value or unparseable configuration file."""


class DiagonalizationError(SivicError, RuntimeError):
    """The eigensolver failed to converge."""


class DoubletError(SivicError, RuntimeError):
    """Eigenstates cannot be grouped into nuclear doublets.

    Raised when the nuclear splitting is not resolvable from the electron
    splitting (e.g. at zero field, where Kramers degeneracy scrambles the
    electron spin expectation values).  Callers should supply explicit
    doublet indices in that case.
    """


class DegenerateAxisError(SivicError, RuntimeError):
    """A nuclear quantization axis is undefined (vanishing splitting or
    collinear fields)."""


class AmbiguousPairingError(SivicError, RuntimeError):
    """Nuclear sublevels of the two doublets cannot be matched unambiguously."""


class SynthesisError(SivicError, RuntimeError):
    """Invalid synthesis setup (bad bounds, unknown gate, ...)."""
