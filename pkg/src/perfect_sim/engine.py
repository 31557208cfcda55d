"""Generic driver for recursive perfect simulation.

A sampler is described by a *kernel*: given the current problem and a random
stream, it draws this level's randomness and either halts with a value or
asks for a sample from a child problem together with a post-processor that
turns the child's sample into one for the current level.

The driver runs the recursion with an explicit stack instead of Python call
recursion, so deep chains (slow factories, many CFTP doublings) never touch
the interpreter's recursion limit.

Example
-------
>>> from perfect_sim.randomness import stream_from_seed
>>> def kernel(problem, stream):
...     u = 1 + int(6 * stream.uniform())
...     return Halt(u) if u <= 5 else Recurse(problem.params)
>>> rec = run(Problem(None), kernel, stream_from_seed(1))
>>> 1 <= rec.value <= 5
True
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional, Union

from .errors import DepthExceeded, DomainError


@dataclass(frozen=True, slots=True)
class Problem:
    """The target at one level: opaque sampler parameters plus the depth."""

    params: Any
    depth: int = 0


@dataclass(frozen=True, slots=True)
class Halt:
    value: Any


@dataclass(frozen=True, slots=True)
class Recurse:
    """Descend into ``child``; ``post`` maps the child's sample to ours.

    ``post=None`` means the identity map, the common case for rejection
    samplers and factories.
    """

    child: Any
    post: Optional[Callable[[Any], Any]] = None


RecursionOutcome = Union[Halt, Recurse]
Kernel = Callable[[Problem, Any], RecursionOutcome]


@dataclass(frozen=True)
class RunLimits:
    max_depth: int = 10**6

    def __post_init__(self):
        if self.max_depth < 1:
            raise DomainError("max_depth must be at least 1")


@dataclass(frozen=True, slots=True)
class SampleRecord:
    """One perfect sample with its cost.

    ``depth`` is the deepest level reached (0 when the root halts).
    """

    value: Any
    depth: int
    randomness_units: int
    flips: int = 0


@dataclass(frozen=True, slots=True)
class Censored:
    """A truncated run that reached its depth cap without halting."""

    depth_cap: int
    randomness_units: int
    flips: int = 0


def _drive(root, kernel, stream, cap, coin):
    """Run the recursion up to depth ``cap``.

    Returns ``(value, depth, draws, flips)`` or ``None`` if the kernel asked
    to descend past ``cap``.
    """
    draws0 = stream.draw_counter
    flips0 = coin.flips_used() if coin is not None else 0
    problem = root if isinstance(root, Problem) else Problem(root)
    base = problem.depth
    pending = []
    while True:
        outcome = kernel(problem, stream)
        if type(outcome) is Halt:
            break
        if problem.depth - base >= cap:
            return None
        if outcome.post is not None:
            pending.append(outcome.post)
        problem = Problem(outcome.child, problem.depth + 1)
    value = outcome.value
    for post in reversed(pending):
        value = post(value)
    flips = coin.flips_used() - flips0 if coin is not None else 0
    return value, problem.depth - base, stream.draw_counter - draws0, flips


def run(root, kernel: Kernel, stream, limits: RunLimits = RunLimits(), coin=None) -> SampleRecord:
    """Draw one exact sample from the root problem.

    Parameters
    ----------
    root : Problem or any
        Root problem; a bare value is wrapped as ``Problem(root)``.
    kernel : callable
        ``kernel(problem, stream) -> Halt | Recurse``. All randomness must
        come from ``stream`` (or ``coin``).
    stream : RandomStream
    limits : RunLimits
        Levels ``0..max_depth`` may be evaluated; asking to go deeper raises.
    coin : optional
        Coin whose flips should be billed to this sample.

    Raises
    ------
    DepthExceeded
        If the kernel has not halted by ``limits.max_depth``.
    """
    out = _drive(root, kernel, stream, limits.max_depth, coin)
    if out is None:
        raise DepthExceeded(limits.max_depth)
    return SampleRecord(*out)


def run_truncated(root, kernel: Kernel, stream, depth_cap: int, coin=None):
    """Like :func:`run` but gives up quietly once ``depth_cap`` is reached.

    Returns a :class:`SampleRecord` when the recursion halts at some depth
    ``<= depth_cap`` and :class:`Censored` otherwise.
    """
    if depth_cap < 0:
        raise DomainError("depth_cap must be nonnegative")
    draws0 = stream.draw_counter
    flips0 = coin.flips_used() if coin is not None else 0
    out = _drive(root, kernel, stream, depth_cap, coin)
    if out is None:
        flips = coin.flips_used() - flips0 if coin is not None else 0
        return Censored(depth_cap, stream.draw_counter - draws0, flips)
    return SampleRecord(*out)
