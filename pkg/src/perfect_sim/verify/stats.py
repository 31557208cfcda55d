"""Goodness-of-fit and summary statistics."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from ..errors import DomainError, EmptyInput, InadequateCounts


def chi_square_gof(observed, expected):
    """Pearson chi-square of ``observed`` counts against a probability table.

    Parameters
    ----------
    observed : mapping or sequence
        Counts keyed by state, or a sequence aligned with ``expected.states``.
        States missing from a mapping count as zero; states absent from the
        table are an error.
    expected : ProbabilityTable

    Returns
    -------
    (statistic, p_value) with ``len(expected) - 1`` degrees of freedom.
    """
    if isinstance(observed, dict) or isinstance(observed, Counter):
        extra = set(observed) - set(expected.states)
        if extra:
            raise DomainError(f"observed states not in table: {sorted(map(str, extra))[:5]}")
        counts = np.array([observed.get(s, 0) for s in expected.states], dtype=float)
    else:
        counts = np.asarray(observed, dtype=float)
        if counts.shape != expected.probs.shape:
            raise DomainError("observed counts do not match the table")
    n = counts.sum()
    pmin = expected.probs.min()
    if pmin <= 0 or n * pmin < 5:
        raise InadequateCounts(f"minimum expected cell count {n * pmin:.3g} < 5")
    e = n * expected.probs
    stat = float(np.sum((counts - e) ** 2 / e))
    return stat, float(stats.chi2.sf(stat, len(counts) - 1))


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


@dataclass
class EmpiricalSummary:
    n: int
    mean: float
    variance: float
    band: tuple
    depth_hist: dict = field(default_factory=dict)
    flips_hist: dict = field(default_factory=dict)


def empirical_report(records, n_sigma: float = 4.0) -> EmpiricalSummary:
    """Mean, variance and a ``n_sigma`` band for numeric sample values."""
    if not records:
        raise EmptyInput("no records to summarise")
    x = np.array([float(r.value) for r in records])
    n = len(x)
    mean = float(x.mean())
    var = float(x.var())
    half = n_sigma * math.sqrt(var / n)
    return EmpiricalSummary(
        n=n,
        mean=mean,
        variance=var,
        band=(mean - half, mean + half),
        depth_hist=dict(sorted(Counter(r.depth for r in records).items())),
        flips_hist=dict(sorted(Counter(r.flips for r in records).items())),
    )
