"""Exact reference distributions.

These use only enumeration and linear algebra; nothing here shares code with
the samplers they are used to check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, SingularSystem, StateSpaceTooLarge

MAX_ISING_VERTICES = 20


@dataclass(frozen=True)
class ProbabilityTable:
    """Finite distribution as parallel tuples of states and probabilities."""

    states: tuple
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", tuple(self.states))
        if probs.ndim != 1 or len(probs) != len(self.states):
            raise DomainError("states and probabilities must have equal length")
        if np.any(probs < 0):
            raise DomainError("probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise DomainError(f"probabilities sum to {probs.sum()!r}, not 1")
        if len(set(self.states)) != len(self.states):
            raise DomainError("duplicate states in probability table")

    def __len__(self):
        return len(self.states)

    def as_dict(self):
        return dict(zip(self.states, self.probs.tolist()))

    def __getitem__(self, state):
        return self.as_dict()[state]


def _spin_matrix(n):
    """All 2**n spin vectors; row k has spin +1 at vertex v iff bit v of k is set."""
    k = np.arange(2**n, dtype=np.int64)[:, None]
    bits = (k >> np.arange(n, dtype=np.int64)) & 1
    return (2 * bits - 1).astype(np.int8)


def ising_energies(graph, spins: np.ndarray) -> np.ndarray:
    if len(graph.edges) == 0:
        return np.zeros(len(spins))
    e = np.asarray(graph.edges)
    return -np.sum(spins[:, e[:, 0]].astype(np.int64) * spins[:, e[:, 1]], axis=1).astype(float)


def exact_ising_distribution(graph, beta: float) -> ProbabilityTable:
    """Ising measure ``exp(-beta H(x)) / Z`` by enumerating every configuration.

    States are ``+``/``-`` strings in vertex order.
    """
    n = graph.n_vertices
    if n > MAX_ISING_VERTICES:
        raise StateSpaceTooLarge(f"{n} vertices: 2**{n} states exceeds the enumeration guard")
    if beta < 0:
        raise DomainError("beta must be nonnegative")
    spins = _spin_matrix(n)
    logw = -beta * ising_energies(graph, spins)
    logw -= logw.max()
    w = np.exp(logw)
    probs = w / w.sum()
    chars = np.where(spins > 0, "+", "-")
    states = ["".join(row) for row in chars]
    return ProbabilityTable(states, probs)


def magnetization_table(table: ProbabilityTable) -> ProbabilityTable:
    """Collapse a spin-string table onto total magnetization."""
    acc = {}
    for s, p in zip(table.states, table.probs):
        m = s.count("+") - s.count("-")
        acc[m] = acc.get(m, 0.0) + p
    keys = sorted(acc)
    probs = np.array([acc[k] for k in keys])
    return ProbabilityTable(keys, probs / probs.sum())


def stationary_of_chain(P, rcond: float = 1e-12) -> ProbabilityTable:
    """Solve ``pi P = pi``, ``sum(pi) = 1`` directly.

    Raises
    ------
    SingularSystem
        If the stationary law is not unique (for instance a chain with two
        absorbing states).
    """
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    if P.ndim != 2 or P.shape != (n, n) or n == 0 or n > 100:
        raise DomainError("transition matrix must be square with at most 100 states")
    if np.any(P < 0) or np.max(np.abs(P.sum(axis=1) - 1.0)) > 1e-12:
        raise DomainError("rows must be nonnegative and sum to 1")
    A = P.T - np.eye(n)
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] <= rcond * sv[0]:
        raise SingularSystem("stationary distribution is not unique")
    pi = np.linalg.solve(A, b)
    resid = np.max(np.abs(pi @ P - pi))
    if resid > 1e-10 or np.any(pi < -1e-12):
        raise SingularSystem(f"linear solve residual {resid:.3g} too large")
    pi = np.clip(pi, 0.0, None)
    return ProbabilityTable(range(n), pi / pi.sum())
