"""End-to-end statistical checks, grouped the way ``perfect-sim verify`` runs them.

Every function takes explicit sample sizes, seeds and tolerances and returns
a :class:`VerificationReport`. Defaults are the desk-scale settings used by
the acceptance suite.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np
from scipy import stats

from ..ar import DIE_PROBLEM, ar_sample, die_kernel
from ..cftp import (
    Coalesced,
    cftp_doubling,
    cftp_single,
    exhaustive_detector,
    make_monotone_detector,
    monotone_detector,
    reflecting_walk,
    reset_walk,
)
from ..engine import Problem
from ..errors import MonotonicityViolation
from ..factory import exp_factory_record, linear_factory_record, von_neumann_record
from ..ising import IsingHeatBath, encode, grid_graph
from ..randomness import CoinSource, stream_from_seed
from .checks import FAMILIES, local_correctness_check, truncation_bound_check
from .oracles import ProbabilityTable, exact_ising_distribution, magnetization_table, stationary_of_chain
from .report import VerificationReport
from .stats import binomial_sigma, chi_square_gof

ALPHA = 1e-4
N_SIGMA = 4.0
REL_TOL = 0.05
FLIP_BOUND_CONSTANT = 9.5

# Independent transition matrices for the toy chains, written out by hand.
REFLECTING_P = np.array([[2 / 3, 1 / 3, 0.0], [1 / 3, 1 / 3, 1 / 3], [0.0, 1 / 3, 2 / 3]])
RESET_WALK_P = np.array([[0.6, 0.4, 0.0], [0.6, 0.0, 0.4], [0.2, 0.4, 0.4]])

LINEAR_CONFIGS = ((2.0, 0.2), (1.5, 0.1), (4.0, 0.5))


def _chi_square(report, name, counts, table, alpha, n, seed):
    stat, _ = chi_square_gof(counts, table)
    crit = float(stats.chi2.isf(alpha, len(table) - 1))
    report.add(name, stat, crit, stat <= crit, n, seed)


def _mean_check(report, name, mean, target, n, seed, n_sigma):
    sigma = binomial_sigma(target, n)
    dev = abs(mean - target)
    report.add(name, dev, n_sigma * sigma, dev <= n_sigma * sigma, n, seed)


def _rel_check(report, name, value, target, n, seed, rel_tol):
    dev = abs(value - target) / target
    report.add(name, dev, rel_tol, dev <= rel_tol, n, seed)


def ar_die(n=10**5, seed=1001, alpha=ALPHA, rel_tol=REL_TOL):
    """Uniformity of the five-sided die and its mean proposal count (6/5)."""
    report = VerificationReport()
    stream = stream_from_seed(seed)
    faces = Counter()
    proposals = 0
    for _ in range(n):
        rec = ar_sample(DIE_PROBLEM, stream)
        faces[rec.value] += 1
        proposals += rec.depth + 1
    uniform5 = ProbabilityTable(range(1, 6), np.full(5, 0.2))
    _chi_square(report, "ar_die.chi_square", faces, uniform5, alpha, n, seed)
    _rel_check(report, "ar_die.mean_proposals", proposals / n, 6 / 5, n, seed, rel_tol)
    return report


def von_neumann_suite(ps=(0.1, 0.3, 0.5), n=10**5, seed=2001, n_sigma=N_SIGMA, rel_tol=REL_TOL):
    report = VerificationReport()
    for k, p in enumerate(ps):
        s = seed + k
        stream, coin = stream_from_seed(s), CoinSource(p, stream_from_seed(s, 1))
        ones = rounds = 0
        for _ in range(n):
            rec = von_neumann_record(coin, stream)
            ones += rec.value
            rounds += rec.depth + 1
        _mean_check(report, f"von_neumann.mean[p={p}]", ones / n, 0.5, n, s, n_sigma)
        _rel_check(report, f"von_neumann.rounds[p={p}]", rounds / n, 1 / (2 * p * (1 - p)), n, s, rel_tol)
    return report


def exp_factory_suite(Cs=(0.5, 1.0, 2.0), ps=(0.2, 0.5), n=10**5, seed=3001, n_sigma=N_SIGMA):
    report = VerificationReport()
    k = 0
    for C in Cs:
        for p in ps:
            s = seed + k
            k += 1
            stream, coin = stream_from_seed(s), CoinSource(p, stream_from_seed(s, 1))
            ones = sum(exp_factory_record(coin, C, stream).value for _ in range(n))
            _mean_check(report, f"exp_factory.mean[C={C},p={p}]", ones / n, math.exp(-C * p), n, s, n_sigma)
    return report


def linear_factory_suite(configs=LINEAR_CONFIGS, n=10**4, seed=4001, n_sigma=N_SIGMA,
                         flip_constant=FLIP_BOUND_CONSTANT):
    """Mean ``C p`` and the mean-flip bound at ``C p = 1 - eps`` and half that."""
    report = VerificationReport()
    k = 0
    for C, eps in configs:
        for p in ((1 - eps) / C, (1 - eps) / (2 * C)):
            s = seed + k
            k += 1
            stream, coin = stream_from_seed(s), CoinSource(p, stream_from_seed(s, 1))
            ones = 0
            for _ in range(n):
                ones += linear_factory_record(coin, C, eps, stream).value
            tag = f"C={C},eps={eps},p={p:.6g}"
            _mean_check(report, f"linear_factory.mean[{tag}]", ones / n, C * p, n, s, n_sigma)
            bound = flip_constant * C / eps
            mean_flips = coin.flips_used() / n
            report.add(f"linear_factory.flips[{tag}]", mean_flips, bound, mean_flips <= bound, n, s)
    return report


def cftp_toys(n=10**5, seed=5001, alpha=ALPHA):
    """Doubling CFTP on the reflecting walk and one-step CFTP on the reset walk."""
    report = VerificationReport()
    update = reflecting_walk()
    stream = stream_from_seed(seed)
    counts = Counter(cftp_doubling(update, exhaustive_detector, 2, stream).value for _ in range(n))
    _chi_square(report, "cftp.reflecting_doubling.chi_square", counts, stationary_of_chain(REFLECTING_P),
                alpha, n, seed)

    update = reset_walk()
    stream = stream_from_seed(seed + 1)
    counts = Counter(cftp_single(update, exhaustive_detector, stream).value for _ in range(n))
    _chi_square(report, "cftp.reset_walk_single.chi_square", counts, stationary_of_chain(RESET_WALK_P),
                alpha, n, seed + 1)
    return report


def cftp_ising(betas=(0.2, 0.4), width=3, height=3, n=2 * 10**5, seed=6001, alpha=ALPHA, t0=None):
    """Monotone doubling CFTP against exact enumeration.

    Bins by full state when every expected count is at least 5, otherwise by
    magnetization.
    """
    report = VerificationReport()
    graph = grid_graph(width, height)
    for k, beta in enumerate(betas):
        s = seed + k
        update = IsingHeatBath(graph, beta)
        detector = make_monotone_detector(update.bottom(), update.top())
        stream = stream_from_seed(s)
        start = t0 or graph.n_vertices
        counts = Counter(encode(cftp_doubling(update, detector, start, stream).value) for _ in range(n))
        table = exact_ising_distribution(graph, beta)
        if n * table.probs.min() >= 5:
            _chi_square(report, f"cftp.ising[{width}x{height},beta={beta}].states", counts, table, alpha, n, s)
        else:
            mag = Counter()
            for state, c in counts.items():
                mag[state.count("+") - state.count("-")] += c
            _chi_square(report, f"cftp.ising[{width}x{height},beta={beta}].magnetization", mag,
                        magnetization_table(table), alpha, n, s)
    return report


def monotonicity_and_soundness(n_pairs=10**4, n_blocks=10**3, seed=7001, beta=0.4, t_blocks=8):
    """Order preservation of coupled heat-bath steps and detector agreement."""
    report = VerificationReport()
    rng = np.random.default_rng(seed)
    update = IsingHeatBath(grid_graph(3, 3), beta)
    violations = 0
    for _ in range(n_pairs):
        a = rng.choice(np.array([-1, 1], dtype=np.int8), size=update.n)
        b = rng.choice(np.array([-1, 1], dtype=np.int8), size=update.n)
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        try:
            update.apply_pair(lo, hi, rng.random(2))
        except MonotonicityViolation:
            violations += 1
    report.add("ising.monotonicity_violations", violations, 0, violations == 0, n_pairs, seed)

    small = IsingHeatBath(grid_graph(2, 2), beta)
    bottom, top = small.bottom(), small.top()
    disagreements = coalesced = 0
    for _ in range(n_blocks):
        block = rng.random(small.block_size(t_blocks))
        found = monotone_detector(small, t_blocks, block, bottom, top)
        if isinstance(found, Coalesced):
            coalesced += 1
            exact = exhaustive_detector(small, t_blocks, block)
            if not (isinstance(exact, Coalesced) and small.key(exact.state) == small.key(found.state)):
                disagreements += 1
    report.add("ising.detector_soundness_disagreements", disagreements, 0, disagreements == 0, n_blocks, seed)
    report.add("ising.detector_soundness_nonvacuous", -coalesced, -1, coalesced >= 1, n_blocks, seed)
    return report


def truncation_sandwich(caps=(0, 1, 2, 3, 4, 5), n=10**5, seed=8001, n_sigma=N_SIGMA):
    """Sandwich bounds for the die at depth caps 0..5.

    A depth cap ``c`` estimates ``P(T < c + 1)``, so caps 0..5 cover the
    bound at ``i = 1..5`` whether ``i`` is read as a cap or as ``c + 1``.
    """
    target = ProbabilityTable(range(1, 6), np.full(5, 0.2))
    return truncation_bound_check(die_kernel, Problem(None), target, caps, n, seed, n_sigma)


def local_correctness():
    report = VerificationReport()
    for family in FAMILIES:
        report.extend(local_correctness_check(family))
    return report


# (check, seed offset); offsets equal each function's default seed, so
# run_suite(name, 0) reproduces the defaults exactly.
SUITES = {
    "ar": ((ar_die, 1001),),
    "factory": ((von_neumann_suite, 2001), (exp_factory_suite, 3001), (linear_factory_suite, 4001)),
    "cftp": ((cftp_toys, 5001), (cftp_ising, 6001), (monotonicity_and_soundness, 7001)),
    "bounds": ((truncation_sandwich, 8001), (local_correctness, None)),
}


def run_suite(name: str, seed: int = 0) -> VerificationReport:
    """Run one suite, or all of them, with every check's seed offset by ``seed``."""
    names = list(SUITES) if name == "all" else [name]
    report = VerificationReport()
    for key in names:
        for fn, offset in SUITES[key]:
            if offset is None:
                report.extend(fn())
            else:
                report.extend(fn(seed=(seed + offset) % 2**64))
    return report
