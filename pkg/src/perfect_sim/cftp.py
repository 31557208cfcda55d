"""Coupling from the past.

An :class:`UpdateFunction` is a deterministic map ``phi(state, u)`` that
preserves the target distribution. A block of randomness for ``t`` steps is
a flat float array of ``block_size(t)`` uniforms; ``apply`` runs the
``t``-fold composition over it.

A *detector* decides whether a block maps the whole state space to a single
state. It must be sound (never report a coalescence that did not happen) but
may miss some. Two are provided: exhaustive enumeration, and bounding
chains for monotone updates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .engine import Halt, Problem, Recurse, RunLimits, SampleRecord, run
from .errors import DomainError, MonotonicityViolation, StateSpaceTooLarge

MAX_ENUMERATED_STATES = 10**4


@dataclass(frozen=True, slots=True)
class Coalesced:
    state: Any


class _NotCoalesced:
    __slots__ = ()

    def __repr__(self):
        return "NOT_COALESCED"

    def __bool__(self):
        return False


NOT_COALESCED = _NotCoalesced()


class UpdateFunction:
    """Base class for stationary update functions.

    Subclasses set ``uniforms_per_step`` and implement :meth:`step`, and
    :meth:`states` when the state space can be enumerated. Override
    :meth:`apply` when there is a faster way to run many steps.
    """

    uniforms_per_step = 1

    def step(self, state, u):
        raise NotImplementedError

    def apply(self, state, block):
        k = self.uniforms_per_step
        for j in range(0, len(block) - k + 1, k):
            state = self.step(state, block[j:j + k])
        return state

    def block_size(self, t: int) -> int:
        return self.uniforms_per_step * t

    def states(self):
        raise StateSpaceTooLarge(f"{type(self).__name__} does not enumerate its state space")

    def key(self, state):
        """Hashable identity of a state."""
        return state

    def leq(self, x, y) -> bool:
        """Partial order used by the monotone detector."""
        raise NotImplementedError(f"{type(self).__name__} has no partial order")

    def apply_pair(self, lo, hi, block):
        """Run two chains under one block, checking ``lo <= hi`` after each step.

        Returns the evolved pair. Raises MonotonicityViolation on a bad step.
        """
        k = self.uniforms_per_step
        for j in range(0, len(block) - k + 1, k):
            u = block[j:j + k]
            lo, hi = self.step(lo, u), self.step(hi, u)
            if not self.leq(lo, hi):
                raise MonotonicityViolation(f"bounding chains crossed at step {j // k}")
        return lo, hi


class FiniteChainUpdate(UpdateFunction):
    """Update on ``{0, ..., n-1}`` driven by one uniform per step."""

    def __init__(self, n_states: int, step_fn: Callable[[int, float], int], name: str = "chain"):
        self.n_states = n_states
        self._step_fn = step_fn
        self.name = name

    def __repr__(self):
        return f"FiniteChainUpdate({self.name!r}, n_states={self.n_states})"

    def step(self, state, u):
        return self._step_fn(state, float(u[0]))

    def apply(self, state, block):
        f = self._step_fn
        for u in block.tolist():
            state = f(state, u)
        return state

    def states(self):
        return list(range(self.n_states))

    def leq(self, x, y):
        return x <= y


def _reflecting_step(x, u):
    if u < 1 / 3:
        return x - 1 if x > 0 else 0
    if u > 2 / 3:
        return x + 1 if x < 2 else 2
    return x


def reflecting_walk() -> FiniteChainUpdate:
    """Lazy walk on {0,1,2}: down if u < 1/3, up if u > 2/3, else hold.

    Moves off the ends are replaced by holding, so the chain is doubly
    stochastic and its stationary law is uniform.
    """
    return FiniteChainUpdate(3, _reflecting_step, "reflecting")


RESET_PROB = 0.2


def _reset_step(x, u):
    if u < RESET_PROB:
        return 0
    if (u - RESET_PROB) < (1 - RESET_PROB) / 2:
        return x - 1 if x > 0 else 0
    return x + 1 if x < 2 else 2


def reset_walk() -> FiniteChainUpdate:
    """Jump to 0 with probability 0.2, otherwise a fair +-1 step held at the ends.

    A single step coalesces exactly when the reset fires.
    """
    return FiniteChainUpdate(3, _reset_step, "reset-walk")


TOY_CHAINS = {"reflecting": reflecting_walk, "reset-walk": reset_walk}


def exhaustive_detector(update: UpdateFunction, t: int, block):
    """Apply the ``t``-step map to every state; coalesced iff one image."""
    states = update.states()
    if len(states) > MAX_ENUMERATED_STATES:
        raise StateSpaceTooLarge(f"{len(states)} states exceeds {MAX_ENUMERATED_STATES}")
    first = None
    first_key = None
    for x in states:
        y = update.apply(x, block)
        k = update.key(y)
        if first is None:
            first, first_key = y, k
        elif k != first_key:
            return NOT_COALESCED
    return Coalesced(first)


def monotone_detector(update: UpdateFunction, t: int, block, bottom, top):
    """Run only the extremal states; coalesced iff they meet."""
    lo, hi = update.apply_pair(bottom, top, block)
    if update.key(lo) == update.key(hi):
        return Coalesced(lo)
    return NOT_COALESCED


def make_monotone_detector(bottom, top):
    """Bind the extremal states so the result fits the detector signature."""

    def detector(update, t, block):
        return monotone_detector(update, t, block, bottom, top)

    return detector


def _post_apply(update, block):
    def post(x):
        return update.apply(x, block)

    return post


def _cftp_kernel(update, detector, grow):
    def kernel(problem: Problem, stream):
        t = problem.params
        block = stream.uniforms(update.block_size(t))
        found = detector(update, t, block)
        if isinstance(found, Coalesced):
            return Halt(found.state)
        # the stored block is what the detector saw; it is replayed verbatim
        return Recurse(2 * t if grow else t, _post_apply(update, block))

    return kernel


def cftp_single(update: UpdateFunction, detector, stream, limits: RunLimits = RunLimits()) -> SampleRecord:
    """One-step CFTP: each level draws one step's worth of uniforms."""
    return run(Problem(1), _cftp_kernel(update, detector, grow=False), stream, limits)


def cftp_doubling(update: UpdateFunction, detector, t0: int, stream, max_doublings: int = 64) -> SampleRecord:
    """Doubling CFTP: level ``k`` looks ``t0 * 2**k`` steps into the past.

    If level ``k`` does not coalesce, the sample from level ``k+1`` is pushed
    through the full ``t0 * 2**k``-step block drawn at level ``k``.
    """
    if t0 < 1:
        raise DomainError("t0 must be a positive integer")
    return run(Problem(int(t0)), _cftp_kernel(update, detector, grow=True), stream, RunLimits(max_doublings))
