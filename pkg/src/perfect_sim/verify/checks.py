"""Checks of the one-level correctness identities and the truncation sandwich."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction

from scipy import integrate

from ..engine import Censored, run_truncated
from ..errors import DomainError
from ..randomness import stream_from_seed
from .report import VerificationReport

P_GRID = tuple(round(0.05 * k, 2) for k in range(1, 13))
C_GRID = (1.5, 2.0, 4.0)
I_GRID = tuple(range(1, 11))
EPS_GRID = (0.1, 0.2, 0.5)
EXP_C_GRID = (0.5, 1.0, 2.0, 4.0)

IDENTITY_TOL = 1e-12
QUADRATURE_TOL = 1e-10

FAMILIES = ("die", "von_neumann", "exp_factory", "linear_piece1", "linear_piece2", "linear_piece3")


def truncation_bound_check(kernel, root, target, caps, n, seed, n_sigma=4.0) -> VerificationReport:
    """Estimate both sides of the depth-truncation sandwich for every state.

    For a depth cap ``c`` the runs that halt at depth ``<= c`` estimate
    ``P(X = s, T <= c)`` and the censored runs estimate ``P(T > c)``. With
    ``pi`` the target, the checks are

        P(X = s, T <= c)              <= pi(s) + n_sigma * se
        pi(s) <= P(X = s, T <= c) + P(T > c) + n_sigma * se

    where ``se`` is the binomial standard error of the estimated side.
    Every cap reuses the same seed, so runs are coupled across caps.
    """
    report = VerificationReport()
    pi = target.as_dict()
    for cap in caps:
        stream = stream_from_seed(seed)
        done = Counter()
        censored = 0
        for _ in range(n):
            out = run_truncated(root, kernel, stream, cap)
            if isinstance(out, Censored):
                censored += 1
            else:
                done[out.value] += 1
        extra = set(done) - set(pi)
        if extra:
            raise DomainError(f"sampler produced states outside the target: {sorted(map(str, extra))[:5]}")
        tail = censored / n
        for s, p in pi.items():
            low = done[s] / n
            se = math.sqrt(low * (1 - low) / n)
            report.add(f"sandwich_lower[cap={cap},state={s}]", low - p, n_sigma * se,
                       low - p <= n_sigma * se, n, seed)
            up = low + tail
            se = math.sqrt(up * (1 - up) / n)
            report.add(f"sandwich_upper[cap={cap},state={s}]", p - up, n_sigma * se,
                       p - up <= n_sigma * se, n, seed)
    return report


def _close(report, name, lhs, rhs, tol):
    err = abs(lhs - rhs) / max(1.0, abs(lhs))
    report.add(name, err, tol, err <= tol)


def _die(report, grid, tol):
    exact = Fraction(1, 6) + Fraction(1, 6) * Fraction(1, 5)
    report.add("local[die,exact]", float(abs(exact - Fraction(1, 5))), 0.0, exact == Fraction(1, 5))
    _close(report, "local[die,float]", 1 / 6 + (1 / 6) * (1 / 5), 1 / 5, 1e-15)


def _von_neumann(report, grid, tol):
    for p in grid.get("p", P_GRID):
        rhs = p * (1 - p) * 1 + (p**2 + (1 - p) ** 2) * 0.5 + (1 - p) * p * 0
        _close(report, f"local[von_neumann,p={p}]", 0.5, rhs, tol)


def exp_factory_rhs(C: float, p: float) -> float:
    """Halting branch plus the quadrature of the recursive branch."""
    val, _ = integrate.quad(lambda u: C * math.exp(-C * u) * math.exp(-C * (1 - u) * p),
                            0.0, 1.0, epsabs=1e-14, epsrel=1e-13)
    return math.exp(-C) + (1 - p) * val


def _exp_factory(report, grid, tol):
    for C, p in itertools.product(grid.get("C", EXP_C_GRID), grid.get("p", P_GRID)):
        _close(report, f"local[exp_factory,C={C},p={p}]", math.exp(-C * p), exp_factory_rhs(C, p), tol)


def _tail(C, p):
    return (C - 1) * p / (1 - p)


def _linear_piece1(report, grid, tol):
    for C, p, i in itertools.product(grid.get("C", C_GRID), grid.get("p", P_GRID), grid.get("i", I_GRID)):
        lhs = (C * p) ** i
        rhs = p * (C * p) ** (i - 1) + (1 - p) * (C * p) ** (i - 1) * _tail(C, p)
        _close(report, f"local[linear_piece1,C={C},p={p},i={i}]", lhs, rhs, tol)


def _linear_piece2(report, grid, tol):
    for C, p, i in itertools.product(grid.get("C", C_GRID), grid.get("p", P_GRID), grid.get("i", I_GRID)):
        lhs = (C * p) ** i * _tail(C, p)
        rhs = (C - 1) / C * (C * p) ** (i + 1) + (1 / C) * (C * p) ** (i + 1) * _tail(C, p)
        _close(report, f"local[linear_piece2,C={C},p={p},i={i}]", lhs, rhs, tol)


def _linear_piece3(report, grid, tol):
    keys = (grid.get("C", C_GRID), grid.get("p", P_GRID), grid.get("i", I_GRID), grid.get("eps", EPS_GRID))
    for C, p, i, eps in itertools.product(*keys):
        g = (C * p) ** i
        alpha = (1 + eps / 2) ** (-i)
        rhs = alpha * (g / alpha) + (1 - alpha) * 0.0
        _close(report, f"local[linear_piece3,C={C},p={p},i={i},eps={eps}]", g, rhs, tol)


_CHECKERS = {
    "die": _die,
    "von_neumann": _von_neumann,
    "exp_factory": _exp_factory,
    "linear_piece1": _linear_piece1,
    "linear_piece2": _linear_piece2,
    "linear_piece3": _linear_piece3,
}


def local_correctness_check(family: str, grid=None, tol=None) -> VerificationReport:
    """Evaluate a sampler family's one-level identity over a parameter grid.

    ``grid`` may override any of the keys ``p``, ``C``, ``i``, ``eps``. The
    error measure is ``|lhs - rhs| / max(1, |lhs|)``.
    """
    if family not in _CHECKERS:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if tol is None:
        tol = QUADRATURE_TOL if family == "exp_factory" else IDENTITY_TOL
    report = VerificationReport()
    _CHECKERS[family](report, dict(grid or {}), tol)
    return report
