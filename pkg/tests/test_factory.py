import math

import numpy as np
import pytest

from perfect_sim.engine import RunLimits
from perfect_sim.errors import ContractViolation, DepthExceeded, DomainError
from perfect_sim.factory import (
    LinearFactoryState,
    exp_factory,
    exp_factory_record,
    lf_piece1,
    lf_piece2,
    lf_piece3,
    linear_factory,
    linear_factory_record,
    von_neumann,
    von_neumann_record,
)
from perfect_sim.randomness import CoinSource, RecordingCoin, SequenceCoin, stream_from_seed


class FixedStream:
    """Stream stub returning one constant uniform."""

    def __init__(self, u):
        self.u = u
        self.draw_counter = 0

    def uniform(self):
        self.draw_counter += 1
        return self.u


def coin_and_stream(p, seed):
    return CoinSource(p, stream_from_seed(seed, 1)), stream_from_seed(seed)


def within(mean, target, n, k=4.0):
    return abs(mean - target) <= k * math.sqrt(target * (1 - target) / n)


# --- Von Neumann -----------------------------------------------------------

def test_von_neumann_fair_coin_rounds():
    coin, s = coin_and_stream(0.5, 10)
    n = 10**5
    recs = [von_neumann_record(coin, s) for _ in range(n)]
    assert within(sum(r.value for r in recs) / n, 0.5, n)
    rounds = sum(r.depth + 1 for r in recs) / n
    assert abs(rounds - 2.0) / 2.0 <= 0.05
    assert coin.flips_used() == 2 * sum(r.depth + 1 for r in recs)


def test_von_neumann_biased_coin():
    coin, s = coin_and_stream(0.1, 11)
    n = 10**5
    assert within(sum(von_neumann(coin, s) for _ in range(n)) / n, 0.5, n)


def test_von_neumann_degenerate_coin():
    coin, s = coin_and_stream(1.0, 12)
    with pytest.raises(DepthExceeded):
        von_neumann(coin, s, RunLimits(1000))


def test_von_neumann_swap_symmetry():
    for seed in range(200):
        rec_coin = RecordingCoin(CoinSource(0.3, stream_from_seed(seed, 1)))
        out = von_neumann(rec_coin, stream_from_seed(seed))
        bits = rec_coin.bits
        swapped = [bits[j ^ 1] for j in range(len(bits))]
        assert von_neumann(SequenceCoin(swapped), stream_from_seed(seed)) == 1 - out


# --- exponential -----------------------------------------------------------

def test_exp_factory_mean():
    coin, s = coin_and_stream(0.5, 20)
    n = 10**5
    assert within(sum(exp_factory(coin, 1.0, s) for _ in range(n)) / n, math.exp(-0.5), n)


def test_exp_factory_p_zero_always_one():
    coin, s = coin_and_stream(0.0, 21)
    assert all(exp_factory(coin, 2.0, s) == 1 for _ in range(10**4))


def test_exp_factory_halting_branch_uses_no_flips():
    coin, s = coin_and_stream(0.7, 22)
    recs = [exp_factory_record(coin, 1.5, s) for _ in range(5000)]
    no_flip = [r for r in recs if r.flips == 0]
    assert no_flip and all(r.value == 1 and r.depth == 0 for r in no_flip)
    # a first exponential draw >= 1 forces output 1 with no flip
    big = FixedStream(0.99)  # -log(0.01)/C > 1 for C = 1.5
    rec = exp_factory_record(SequenceCoin([]), 1.5, big)
    assert rec.value == 1 and rec.flips == 0


def test_exp_factory_domain():
    coin, s = coin_and_stream(0.5, 23)
    for C in (0.0, -1.0):
        with pytest.raises(DomainError):
            exp_factory(coin, C, s)


# --- linear pieces ---------------------------------------------------------

def test_piece1_branches_and_flip_count():
    st = LinearFactoryState(1, False, 2.0, 0.2)
    coin = SequenceCoin([1])
    nxt = lf_piece1(st, coin)
    assert nxt == LinearFactoryState(0, False, 2.0, 0.2) and nxt.halted
    assert coin.flips_used() == 1
    coin = SequenceCoin([0])
    assert lf_piece1(LinearFactoryState(3, False, 2.0, 0.2), coin) == LinearFactoryState(2, True, 2.0, 0.2)
    assert coin.flips_used() == 1


def test_piece1_contract():
    with pytest.raises(ContractViolation):
        lf_piece1(LinearFactoryState(0, False, 2.0, 0.2), SequenceCoin([1]))
    with pytest.raises(ContractViolation):
        lf_piece1(LinearFactoryState(2, True, 2.0, 0.2), SequenceCoin([1]))


def test_piece2_branches():
    st = LinearFactoryState(1, True, 2.0, 0.2)
    assert lf_piece2(st, FixedStream(0.0)) == LinearFactoryState(2, False, 2.0, 0.2)
    assert lf_piece2(st, FixedStream(0.9)) == LinearFactoryState(2, True, 2.0, 0.2)
    with pytest.raises(ContractViolation):
        lf_piece2(LinearFactoryState(1, False, 2.0, 0.2), FixedStream(0.0))


def test_piece2_repeats_geometric():
    s = stream_from_seed(30)
    n = 20000
    total = 0
    for _ in range(n):
        st = LinearFactoryState(0, True, 2.0, 0.2)
        while st.has_tail:
            st = lf_piece2(st, s)
            total += 1
    assert abs(total / n - 2.0) / 2.0 <= 0.05


def test_piece3_alpha_and_branches():
    st = LinearFactoryState(23, False, 2.0, 0.2)
    assert st.alpha == pytest.approx(1 / 1.1**23, rel=1e-12)
    assert st.alpha == pytest.approx(0.1117, abs=5e-5)
    assert lf_piece3(st, FixedStream(0.5)) == 0
    heads = lf_piece3(st, FixedStream(0.01))
    assert heads.i == 23 and not heads.has_tail
    assert heads.C == pytest.approx(2.2) and heads.eps == pytest.approx(0.1)


def test_piece3_contract():
    with pytest.raises(ContractViolation):
        lf_piece3(LinearFactoryState(5, False, 2.0, 0.2), FixedStream(0.0))


# --- composite linear factory ----------------------------------------------

def test_linear_factory_mean_and_flips():
    coin, s = coin_and_stream(0.4, 40)
    n = 10**4
    ones = sum(linear_factory(coin, 2.0, 0.2, s) for _ in range(n))
    assert within(ones / n, 0.8, n)
    assert coin.flips_used() / n <= 95


def test_linear_factory_p_zero():
    coin, s = coin_and_stream(0.0, 41)
    assert all(linear_factory(coin, 2.0, 0.2, s) == 0 for _ in range(2000))


def test_linear_factory_at_boundary():
    coin, s = coin_and_stream(0.6, 42)
    n = 10**4
    assert within(sum(linear_factory(coin, 1.5, 0.1, s) for _ in range(n)) / n, 0.9, n)


@pytest.mark.parametrize("C,eps", [(1.0, 0.2), (0.5, 0.2), (2.0, 0.0), (2.0, 1.0), (float("inf"), 0.1)])
def test_linear_factory_domain(C, eps):
    coin, s = coin_and_stream(0.1, 43)
    with pytest.raises(DomainError):
        linear_factory(coin, C, eps, s)


def _flip_bound_grid():
    pts = []
    for C in (1.5, 2.0, 4.0):
        for eps in (0.1, 0.2, 0.5):
            for k in range(1, 13):
                p = 0.05 * k
                if C * p <= 1 - eps + 1e-12:
                    pts.append((C, eps, p))
    return pts


@pytest.mark.slow
def test_flip_bound_over_grid():
    n = 10**4
    for j, (C, eps, p) in enumerate(_flip_bound_grid()):
        coin, s = coin_and_stream(p, 5000 + j)
        for _ in range(n):
            linear_factory(coin, C, eps, s)
        assert coin.flips_used() / n <= 9.5 * C / eps, (C, eps, p)


# --- stopping-time property ------------------------------------------------

FACTORIES = {
    "von_neumann": lambda coin, s: von_neumann_record(coin, s),
    "exp": lambda coin, s: exp_factory_record(coin, 2.0, s),
    "linear": lambda coin, s: linear_factory_record(coin, 2.0, 0.2, s),
}


@pytest.mark.parametrize("name", sorted(FACTORIES))
def test_output_depends_only_on_flips_read(name):
    fac = FACTORIES[name]
    rng = np.random.default_rng(7)
    for seed in range(100):
        rec_coin = RecordingCoin(CoinSource(0.35, stream_from_seed(seed, 1)))
        first = fac(rec_coin, stream_from_seed(seed))
        assert first.flips == len(rec_coin.bits)
        extended = rec_coin.bits + rng.integers(0, 2, size=50).tolist()
        again = fac(SequenceCoin(extended), stream_from_seed(seed))
        assert (again.value, again.flips, again.depth) == (first.value, first.flips, first.depth)
