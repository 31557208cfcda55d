"""Bernoulli factories built on the recursion engine.

Each factory turns flips of a coin with unknown probability ``p`` (plus
external uniforms from a stream) into one flip of an ``f(p)`` coin. The coin
is only ever touched through ``flip()``; ``flips_used()`` is read by the
engine for accounting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .engine import Halt, Problem, Recurse, RunLimits, SampleRecord, run
from .errors import ContractViolation, DomainError
from .randomness import bernoulli, exponential

# Piece 3 becomes available once i >= PIECE3_FACTOR / eps.
PIECE3_FACTOR = 4.6


def _von_neumann_kernel(coin):
    def kernel(problem, stream):
        a = coin.flip()
        b = coin.flip()
        if a != b:
            return Halt(a)
        return Recurse(None)

    return kernel


def von_neumann_record(coin, stream, limits: RunLimits = RunLimits()) -> SampleRecord:
    """Fair bit from a biased coin; ``depth + 1`` is the number of rounds."""
    return run(Problem(None), _von_neumann_kernel(coin), stream, limits, coin=coin)


def von_neumann(coin, stream, limits: RunLimits = RunLimits()) -> int:
    return von_neumann_record(coin, stream, limits).value


def _exp_kernel(coin):
    def kernel(problem, stream):
        c = problem.params
        u2 = exponential(stream, c)
        if u2 >= 1.0:
            return Halt(1)
        if coin.flip():
            return Halt(0)
        return Recurse(c * (1.0 - u2))

    return kernel


def exp_factory_record(coin, C: float, stream, limits: RunLimits = RunLimits()) -> SampleRecord:
    """Flip an ``exp(-C p)`` coin."""
    if not C > 0:
        raise DomainError(f"C must be positive, got {C}")
    return run(Problem(float(C)), _exp_kernel(coin), stream, limits, coin=coin)


def exp_factory(coin, C: float, stream, limits: RunLimits = RunLimits()) -> int:
    return exp_factory_record(coin, C, stream, limits).value


@dataclass(frozen=True, slots=True)
class LinearFactoryState:
    """Target ``(C p)**i``, times ``(C-1)p/(1-p)`` when ``has_tail`` is set."""

    i: int
    has_tail: bool
    C: float
    eps: float

    @property
    def alpha(self) -> float:
        return (1.0 + self.eps / 2.0) ** (-self.i)

    @property
    def halted(self) -> bool:
        return self.i == 0 and not self.has_tail


def lf_piece1(state: LinearFactoryState, coin) -> LinearFactoryState:
    """Spend one p-coin flip to lower the exponent by one.

    Heads leaves ``(C p)**(i-1)``; tails leaves the same times the tail factor.
    """
    if state.has_tail or state.i < 1:
        raise ContractViolation(f"piece 1 needs i >= 1 and no tail, got {state}")
    return LinearFactoryState(state.i - 1, not coin.flip(), state.C, state.eps)


def lf_piece2(state: LinearFactoryState, stream) -> LinearFactoryState:
    """Trade the tail factor for one more ``C p`` factor.

    A known ``(C-1)/C`` coin decides whether the tail survives. No p-coin
    flip is consumed.
    """
    if not state.has_tail:
        raise ContractViolation(f"piece 2 needs a pending tail, got {state}")
    keep_tail = not bernoulli(stream, (state.C - 1.0) / state.C)
    return LinearFactoryState(state.i + 1, keep_tail, state.C, state.eps)


def piece3_ready(state: LinearFactoryState) -> bool:
    return state.i >= PIECE3_FACTOR / state.eps


def lf_piece3(state: LinearFactoryState, stream):
    """Thin by ``alpha = (1 + eps/2)**-i``.

    Returns ``0`` (final output) on tails, or the state with
    ``C <- C (1 + eps/2)`` and ``eps <- eps/2`` on heads.
    """
    if state.has_tail or not piece3_ready(state):
        raise ContractViolation(f"piece 3 needs no tail and i >= {PIECE3_FACTOR}/eps, got {state}")
    if not bernoulli(stream, state.alpha):
        return 0
    return LinearFactoryState(state.i, False, state.C * (1.0 + state.eps / 2.0), state.eps / 2.0)


def _linear_kernel(coin):
    def kernel(problem, stream):
        state = problem.params
        if state.has_tail:
            return Recurse(lf_piece2(state, stream))
        if state.i == 0:
            return Halt(1)
        if piece3_ready(state):
            nxt = lf_piece3(state, stream)
            if not isinstance(nxt, LinearFactoryState):
                return Halt(0)
            return Recurse(nxt)
        return Recurse(lf_piece1(state, coin))

    return kernel


def check_linear_params(C: float, eps: float) -> None:
    if not (math.isfinite(C) and C > 1.0):
        raise DomainError(f"C must exceed 1, got {C}")
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")


def linear_factory_record(coin, C: float, eps: float, stream, limits: RunLimits = RunLimits()) -> SampleRecord:
    """Flip a ``C p`` coin, valid whenever ``C p <= 1 - eps``.

    Outside that range the output distribution is not guaranteed; such
    inputs usually surface as :class:`~perfect_sim.errors.DepthExceeded`.
    """
    check_linear_params(C, eps)
    root = LinearFactoryState(1, False, float(C), float(eps))
    return run(Problem(root), _linear_kernel(coin), stream, limits, coin=coin)


def linear_factory(coin, C: float, eps: float, stream, limits: RunLimits = RunLimits()) -> int:
    return linear_factory_record(coin, C, eps, stream, limits).value
