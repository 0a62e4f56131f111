class DigammaZerosError(Exception):
    """Base class for every error raised by this package."""


class PoleError(DigammaZerosError, ValueError):
    def __init__(self, x):
        super().__init__(f"argument {x!r} is within the pole guard of a non-positive integer")
        self.x = x


class DomainError(DigammaZerosError, ValueError):
    pass


class DegenerateError(DigammaZerosError, ValueError):
    pass


class ZeroFindingError(DigammaZerosError, RuntimeError):
    """A zero of psi or psi_G could not be isolated or refined."""

    def __init__(self, family, index, reason, samples=None):
        msg = f"{family} zero k={index}: {reason}"
        if samples is not None:
            msg += f" (sampled values: {samples})"
        super().__init__(msg)
        self.family = family
        self.index = index
        self.reason = reason
        self.samples = samples


class NoRootFoundError(DigammaZerosError, RuntimeError):
    def __init__(self, message, scan=None):
        super().__init__(message)
        self.scan = scan
