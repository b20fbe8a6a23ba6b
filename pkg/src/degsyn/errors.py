"""Exception types shared across the package."""


class DegsynError(Exception):
    """Base class for all degsyn errors."""


class InvalidInputError(DegsynError):
    """Malformed or dimensionally inconsistent input."""


class InvalidDegradationError(DegsynError):
    """Degradation parameters outside their domain (e.g. nonpositive cutoff)."""


class UnstableSystemError(DegsynError):
    """Operation requires a Hurwitz system but got an unstable one."""


class SingularResolventError(DegsynError):
    """jwI - A is singular at a requested frequency."""


class PreconditionViolationError(DegsynError):
    """A documented precondition of a synthesis operation does not hold."""


class DivergenceError(DegsynError):
    """Simulated state left the representable range."""

    def __init__(self, step: int, time: float):
        super().__init__(f"state diverged (non-finite) at step {step}, t = {time:.6g} s")
        self.step = step
        self.time = time
