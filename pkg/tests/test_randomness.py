import inspect
import math
import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from perfect_sim import factory
from perfect_sim.errors import DomainError
from perfect_sim.randomness import (
    CoinSource,
    RandomStream,
    SequenceCoin,
    bernoulli,
    exponential,
    flip,
    flips_used,
    stream_from_seed,
    uniform01,
)


def test_same_seed_same_sequence():
    a, b = stream_from_seed(42), stream_from_seed(42)
    assert [a.uniform() for _ in range(1000)] == [b.uniform() for _ in range(1000)]


def test_different_seeds_differ_early():
    a, b = stream_from_seed(1), stream_from_seed(2)
    assert [a.uniform() for _ in range(10)] != [b.uniform() for _ in range(10)]


@given(st.integers(0, 2**64 - 1), st.lists(st.integers(0, 700), min_size=1, max_size=8))
@settings(max_examples=50, deadline=None)
def test_block_and_scalar_draws_share_one_sequence(seed, sizes):
    ref = stream_from_seed(seed).uniforms(sum(sizes) + len(sizes))
    s = stream_from_seed(seed)
    got = []
    for n in sizes:
        got.append(s.uniform())
        got.extend(s.uniforms(n).tolist())
    assert got == ref.tolist()
    assert s.draw_counter == len(ref)


def test_range_of_first_million():
    u = stream_from_seed(7).uniforms(10**6)
    assert u.min() >= 0.0 and u.max() < 1.0


def test_uniform_mean_and_ks():
    s = stream_from_seed(11)
    u = s.uniforms(10**6)
    assert abs(u.mean() - 0.5) < 4 * (1 / math.sqrt(12)) / 1e3
    assert stats.kstest(u, "uniform").pvalue > 1e-4


def test_uniform01_bumps_counter():
    s = stream_from_seed(3)
    before = s.draw_counter
    uniform01(s)
    assert s.draw_counter == before + 1


@pytest.mark.parametrize("seed", [-1, 2**64, 1.5])
def test_bad_seed(seed):
    with pytest.raises(DomainError):
        RandomStream(seed)


def test_bernoulli_edges_and_mean():
    s = stream_from_seed(5)
    assert all(bernoulli(s, 0.0) == 0 for _ in range(1000))
    assert all(bernoulli(s, 1.0) == 1 for _ in range(1000))
    n = 10**5
    mean = sum(bernoulli(s, 0.75) for _ in range(n)) / n
    assert abs(mean - 0.75) <= 4 * math.sqrt(0.75 * 0.25 / n)


@pytest.mark.parametrize("q", [-0.1, 1.1, float("nan")])
def test_bernoulli_domain(q):
    with pytest.raises(DomainError):
        bernoulli(stream_from_seed(0), q)


class _ZeroStream:
    draw_counter = 0

    def uniform(self):
        return 0.0


def test_exponential_inverse_cdf_at_zero():
    assert exponential(_ZeroStream(), 3.0) == 0.0


def test_exponential_moments():
    s = stream_from_seed(9)
    n = 10**5
    x = np.array([exponential(s, 1.0) for _ in range(n)])
    assert abs(x.mean() - 1.0) <= 4 * 1.0 / math.sqrt(n)
    y = np.array([exponential(s, 2.0) for _ in range(n)])
    tail = math.exp(-2.0)
    assert abs(np.mean(y >= 1) - tail) <= 4 * math.sqrt(tail * (1 - tail) / n)
    assert s.draw_counter == 2 * n


@pytest.mark.parametrize("rate", [0.0, -1.0])
def test_exponential_domain(rate):
    with pytest.raises(DomainError):
        exponential(stream_from_seed(0), rate)


def test_coin_edges_and_counter():
    s = stream_from_seed(1)
    one, zero = CoinSource(1.0, s), CoinSource(0.0, s)
    assert all(one.flip() == 1 for _ in range(500))
    assert all(zero.flip() == 0 for _ in range(500))
    c = CoinSource(0.3, stream_from_seed(2))
    assert flips_used(c) == 0
    seen = []
    for _ in range(7):
        flip(c)
        seen.append(flips_used(c))
    assert seen == sorted(seen) and flips_used(c) == 7


def test_coin_mean():
    c = CoinSource(0.3, stream_from_seed(4))
    n = 10**5
    mean = sum(c.flip() for _ in range(n)) / n
    assert abs(mean - 0.3) <= 4 * math.sqrt(0.21 / n)


def test_coin_hides_probability():
    c = CoinSource(0.3, stream_from_seed(4))
    public = {name for name in dir(c) if not name.startswith("_")}
    assert public == {"flip", "flips_used"}
    assert not hasattr(c, "p")
    assert "0.3" not in repr(c)


def test_factories_never_read_coin_internals():
    src = inspect.getsource(factory)
    assert "_CoinSource__p" not in src and "__p" not in src
    assert "coin._" not in src
    assert set(re.findall(r"\bcoin\.(\w+)", src)) == {"flip"}


def test_sequence_coin_replays_and_runs_out():
    c = SequenceCoin([1, 0, 1])
    assert [c.flip() for _ in range(3)] == [1, 0, 1]
    with pytest.raises(IndexError):
        c.flip()


def test_independent_streams_uncorrelated():
    a = stream_from_seed(1001).uniforms(10**5)
    b = stream_from_seed(1002).uniforms(10**5)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.01
    c = stream_from_seed(1001, 1).uniforms(10**5)
    assert abs(np.corrcoef(a, c)[0, 1]) < 0.01
