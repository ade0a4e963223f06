"""Exception hierarchy shared by all spinchan modules."""


class SpinChanError(Exception):
    """Base class for every error raised by spinchan."""


class InvalidSizeError(SpinChanError, ValueError):
    """A network size or arm length is outside the family's valid range."""


class ContractViolation(SpinChanError, ValueError):
    """An input or output broke a numerical contract (symmetry, trace, sign...)."""


class TruncationError(ContractViolation):
    """The Kraus sum did not reach the requested completeness."""

    def __init__(self, message, required_l_max=None):
        super().__init__(message)
        self.required_l_max = required_l_max


class InstabilityError(ContractViolation):
    """The fixed-step integrator drifted beyond its tolerance."""


class NotFoundError(SpinChanError, LookupError):
    """A requested spectral feature does not exist."""
