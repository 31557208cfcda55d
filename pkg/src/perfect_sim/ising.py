"""Ferromagnetic Ising model and its single-site heat-bath update.

States are int8 arrays of +1/-1 spins indexed by vertex; grid vertices are
numbered row-major. The heat-bath step uses two uniforms: the first picks a
site, the second sets its spin to +1 when it falls below
``exp(b S) / (exp(b S) + exp(-b S))``, with ``S`` the neighbour spin sum.
For ``beta >= 0`` the step is monotone in the componentwise order, so the
all-minus and all-plus chains bound every other chain.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .cftp import UpdateFunction
from .errors import DomainError, MonotonicityViolation, StateSpaceTooLarge


@dataclass(frozen=True)
class Graph:
    n_vertices: int
    edges: tuple

    def __post_init__(self):
        for a, b in self.edges:
            if not (0 <= a < self.n_vertices and 0 <= b < self.n_vertices) or a == b:
                raise DomainError(f"bad edge {(a, b)} for {self.n_vertices} vertices")

    @cached_property
    def csr(self):
        """``(ptr, idx)`` int64 arrays listing each vertex's neighbours."""
        nbrs = [[] for _ in range(self.n_vertices)]
        for a, b in self.edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        ptr = np.zeros(self.n_vertices + 1, dtype=np.int64)
        ptr[1:] = np.cumsum([len(x) for x in nbrs])
        idx = np.array([w for x in nbrs for w in x], dtype=np.int64)
        return ptr, idx

    @cached_property
    def max_degree(self) -> int:
        ptr, _ = self.csr
        return int(np.max(np.diff(ptr))) if self.n_vertices else 0


def grid_graph(width: int, height: int) -> Graph:
    """Free-boundary ``width x height`` square lattice."""
    if width < 1 or height < 1:
        raise DomainError("grid dimensions must be positive")
    edges = []
    for r in range(height):
        for c in range(width):
            v = r * width + c
            if c + 1 < width:
                edges.append((v, v + 1))
            if r + 1 < height:
                edges.append((v, v + width))
    return Graph(width * height, tuple(edges))


def hamiltonian(graph: Graph, spins) -> float:
    """``H(x) = -sum over edges of x(i) x(j)``."""
    return -float(sum(int(spins[a]) * int(spins[b]) for a, b in graph.edges))


def heatbath_prob_plus(beta: float, s: int) -> float:
    """``exp(b s) / (exp(b s) + exp(-b s))``, written to avoid overflow."""
    z = 2.0 * beta * s
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def encode(spins) -> str:
    return "".join("+" if x > 0 else "-" for x in spins)


def decode(text: str) -> np.ndarray:
    if any(ch not in "+-" for ch in text):
        raise DomainError(f"spin string may only contain '+' and '-': {text!r}")
    return np.array([1 if ch == "+" else -1 for ch in text], dtype=np.int8)


@dataclass(frozen=True)
class IsingConfig:
    graph: Graph
    spins: tuple
    beta: float

    def __post_init__(self):
        if len(self.spins) != self.graph.n_vertices:
            raise DomainError("spin vector length must equal the number of vertices")
        if any(x not in (-1, 1) for x in self.spins):
            raise DomainError("spins must be +1 or -1")
        if not self.beta >= 0:
            raise DomainError("beta must be nonnegative")


def ising_heatbath_update(config: IsingConfig, u_site: float, u_threshold: float) -> IsingConfig:
    """One heat-bath step on an immutable configuration (reference version)."""
    n = config.graph.n_vertices
    v = min(int(u_site * n), n - 1)
    ptr, idx = config.graph.csr
    s = sum(config.spins[w] for w in idx[ptr[v]:ptr[v + 1]])
    new = list(config.spins)
    new[v] = 1 if u_threshold < heatbath_prob_plus(config.beta, s) else -1
    return IsingConfig(config.graph, tuple(new), config.beta)


class IsingHeatBath(UpdateFunction):
    """Heat-bath stationary update for the Ising measure on ``graph``.

    States are int8 arrays; :meth:`apply` returns a new array and never
    mutates its input.
    """

    uniforms_per_step = 2

    def __init__(self, graph: Graph, beta: float):
        if not beta >= 0:
            raise DomainError("beta must be nonnegative for a ferromagnetic, monotone update")
        self.graph = graph
        self.beta = float(beta)
        self._ptr, self._idx = graph.csr
        self._max_deg = graph.max_degree
        self._prob_plus = np.array(
            [heatbath_prob_plus(self.beta, s) for s in range(-self._max_deg, self._max_deg + 1)]
        )

    def __repr__(self):
        return f"IsingHeatBath(n={self.graph.n_vertices}, beta={self.beta})"

    @property
    def n(self):
        return self.graph.n_vertices

    def bottom(self):
        return np.full(self.n, -1, dtype=np.int8)

    def top(self):
        return np.full(self.n, 1, dtype=np.int8)

    def step(self, state, u):
        return self.apply(state, np.asarray(u, dtype=float))

    def apply(self, state, block):
        out = np.array(state, dtype=np.int8, copy=True)
        kernels.heatbath_apply(out, self._ptr, self._idx, self._prob_plus, self._max_deg,
                               np.ascontiguousarray(block, dtype=float))
        return out

    def apply_pair(self, lo, hi, block):
        lo = np.array(lo, dtype=np.int8, copy=True)
        hi = np.array(hi, dtype=np.int8, copy=True)
        if not self.leq(lo, hi):
            raise MonotonicityViolation("bounding chains start out of order")
        bad = kernels.heatbath_apply_pair(lo, hi, self._ptr, self._idx, self._prob_plus,
                                          self._max_deg, np.ascontiguousarray(block, dtype=float))
        if bad >= 0:
            raise MonotonicityViolation(f"bounding chains crossed at step {bad}")
        return lo, hi

    def states(self):
        if 2**self.n > 10**4:
            raise StateSpaceTooLarge(f"2**{self.n} Ising states is too many to enumerate")
        return [np.array(x, dtype=np.int8) for x in itertools.product((-1, 1), repeat=self.n)]

    def key(self, state):
        return state.tobytes()

    def leq(self, x, y):
        return bool(np.all(x <= y))
