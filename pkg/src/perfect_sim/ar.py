"""Acceptance/rejection as a recursion kernel.

Each level draws one proposal; if it lands in the acceptance set the run
halts with it, otherwise the same problem is posed again and its answer is
passed through unchanged.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from .engine import Halt, Problem, Recurse, RunLimits, SampleRecord, run
from .errors import DomainError


@dataclass(frozen=True)
class ARProblem:
    """Sample ``proposal`` conditioned on ``accept``.

    ``acceptance_mass`` is the proposal probability of the acceptance set,
    if known; the sampler itself never looks at it.
    """

    proposal: Callable[[Any], Any]
    accept: Callable[[Any], bool]
    acceptance_mass: Optional[float] = None


def ar_kernel(problem: Problem, stream):
    prob = problem.params
    x = prob.proposal(stream)
    if prob.accept(x):
        return Halt(x)
    return Recurse(prob)


def ar_sample(prob: ARProblem, stream, limits: RunLimits = RunLimits()) -> SampleRecord:
    return run(Problem(prob), ar_kernel, stream, limits)


def _six_sided(stream):
    return 1 + min(int(6 * stream.uniform()), 5)


DIE_PROBLEM = ARProblem(_six_sided, lambda x: x <= 5, acceptance_mass=5 / 6)


def die_kernel(problem: Problem, stream):
    """Roll a fair d6 and keep 1..5; the problem parameters are ignored."""
    x = _six_sided(stream)
    if x <= 5:
        return Halt(x)
    return Recurse(problem.params)


def die_five(stream) -> int:
    return ar_sample(DIE_PROBLEM, stream).value


class FiniteProposal:
    """Inverse-CDF draw from an explicit probability table (one uniform)."""

    def __init__(self, values, probs):
        probs = np.asarray(probs, dtype=float)
        if len(values) != len(probs) or len(values) == 0:
            raise DomainError("values and probabilities must be nonempty and of equal length")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
            raise DomainError("probabilities must be nonnegative and sum to 1")
        self.values = list(values)
        self.probs = probs
        self._cdf = np.cumsum(probs)
        self._cdf[-1] = 1.0

    def __call__(self, stream):
        u = stream.uniform()
        k = int(np.searchsorted(self._cdf, u, side="right"))
        return self.values[min(k, len(self.values) - 1)]


def table_problem(values, probs, accept_set) -> ARProblem:
    """AR problem for a finite proposal table and an explicit acceptance set."""
    proposal = FiniteProposal(values, probs)
    accept_set = frozenset(accept_set)
    unknown = accept_set - set(proposal.values)
    if unknown:
        raise DomainError(f"accept set contains values not in the table: {sorted(map(str, unknown))}")
    mass = float(sum(p for v, p in zip(proposal.values, proposal.probs) if v in accept_set))
    if mass <= 0:
        raise DomainError("acceptance set has zero proposal mass; sampler would never halt")
    return ARProblem(proposal, accept_set.__contains__, acceptance_mass=mass)


def read_table(path):
    """Read a two-column ``value,probability`` CSV. A header row is skipped."""
    values, probs = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 2:
                raise DomainError(f"expected two columns, got {row!r}")
            value, p = row[0].strip(), row[1].strip()
            try:
                probs.append(float(p))
            except ValueError:
                if not values:
                    continue  # header
                raise DomainError(f"bad probability {p!r}") from None
            values.append(value)
    return values, probs
