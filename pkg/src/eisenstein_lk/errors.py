class EisensteinLKError(Exception):
    """Base class for every error raised by this package."""


class InvariantViolation(EisensteinLKError, ValueError):
    """A pair (a, b) drifted off |a|^2 - |b|^2 = 1; renormalise with ``project_to_group``."""


class BranchError(EisensteinLKError, ValueError):
    """The element lies outside the principal domain of the group logarithm."""


class DomainError(EisensteinLKError, ValueError):
    pass


class PoleError(EisensteinLKError, ValueError):
    pass


class NonConvergence(EisensteinLKError, RuntimeError):
    pass


class MethodDisagreement(EisensteinLKError, RuntimeError):
    """Finite-difference and analytic rho tensors differ by more than the tolerance."""


class NotInvariantised(EisensteinLKError, ValueError):
    pass


class WindowMismatch(EisensteinLKError, ValueError):
    pass


class ConfigError(EisensteinLKError, ValueError):
    pass


class OutOfRange(EisensteinLKError, ValueError):
    pass
