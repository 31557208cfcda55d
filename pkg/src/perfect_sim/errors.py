"""Exception types raised by samplers, oracles and the CLI."""


class PerfectSimError(Exception):
    """Base class for all package errors."""


class DomainError(PerfectSimError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class DepthExceeded(PerfectSimError, RuntimeError):
    """The recursion hit its depth cap without halting.

    Raised instead of returning a value: a truncated perfect sampler is biased.
    """

    def __init__(self, max_depth):
        super().__init__(f"recursion did not halt within max_depth={max_depth}")
        self.max_depth = max_depth


class ContractViolation(PerfectSimError, RuntimeError):
    """An internal precondition was broken by the caller."""


class StateSpaceTooLarge(PerfectSimError, ValueError):
    pass


class MonotonicityViolation(PerfectSimError, RuntimeError):
    """A bounding-chain step left the lower chain above the upper one."""


class SingularSystem(PerfectSimError, ValueError):
    """The stationary equations have no unique solution (reducible chain)."""


class InadequateCounts(PerfectSimError, ValueError):
    """Too few samples for the chi-square approximation to hold."""


class EmptyInput(PerfectSimError, ValueError):
    pass
