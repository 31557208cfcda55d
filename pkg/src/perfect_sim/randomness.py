"""Seeded random streams and coins.

Every base uniform comes from a PCG64 generator seeded through
``numpy.random.SeedSequence``. PCG64 has period 2**128 and produces the same
doubles on every platform, so fixed-seed runs are reproducible bit for bit.

Two kinds of coin exist and are kept apart on purpose:

* :func:`bernoulli` flips a coin whose probability the caller knows.
* :class:`CoinSource` hides its probability; a Bernoulli factory can only
  call :meth:`CoinSource.flip` and :meth:`CoinSource.flips_used`.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

SEED_MAX = 2**64 - 1
_CHUNK = 512


class RandomStream:
    """An infinite, deterministic sequence of uniforms on [0, 1).

    Scalar draws are served from a small buffer; block draws continue the
    same sequence, so interleaving the two never changes what comes out.
    ``draw_counter`` counts every uniform handed out.
    """

    __slots__ = ("seed", "substream", "draw_counter", "_gen", "_buf", "_pos")

    def __init__(self, seed: int, substream: int = 0):
        if not isinstance(seed, (int, np.integer)) or not 0 <= seed <= SEED_MAX:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
        self.seed = int(seed)
        self.substream = int(substream)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.substream,))
        self._gen = np.random.Generator(np.random.PCG64(ss))
        self._buf = np.empty(0)
        self._pos = 0
        self.draw_counter = 0

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, substream={self.substream}, draws={self.draw_counter})"

    def uniform(self) -> float:
        if self._pos >= len(self._buf):
            self._buf = self._gen.random(_CHUNK)
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        self.draw_counter += 1
        return float(u)

    def uniforms(self, n: int) -> np.ndarray:
        """Return the next ``n`` uniforms as a fresh float64 array."""
        if n < 0:
            raise DomainError("block size must be nonnegative")
        avail = len(self._buf) - self._pos
        if n <= avail:
            out = self._buf[self._pos:self._pos + n].copy()
            self._pos += n
        else:
            out = np.empty(n)
            out[:avail] = self._buf[self._pos:]
            out[avail:] = self._gen.random(n - avail)
            self._buf = np.empty(0)
            self._pos = 0
        self.draw_counter += n
        return out


def stream_from_seed(seed: int, substream: int = 0) -> RandomStream:
    return RandomStream(seed, substream)


def uniform01(s: RandomStream) -> float:
    return s.uniform()


def bernoulli(s: RandomStream, q: float) -> int:
    """Flip a coin of known probability ``q`` using one base uniform."""
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {q}")
    return 1 if s.uniform() < q else 0


def exponential(s: RandomStream, rate: float) -> float:
    """Inverse-CDF exponential draw; exactly one base uniform per call."""
    if not rate > 0.0:
        raise DomainError(f"rate must be positive, got {rate}")
    return -math.log1p(-s.uniform()) / rate


class CoinSource:
    """A Bernoulli(p) coin whose ``p`` cannot be read back.

    Parameters
    ----------
    p : float
        Success probability, fixed at construction.
    stream : RandomStream
        Backing randomness; should not be shared with the factory's own
        external uniforms.
    """

    __slots__ = ("__p", "_stream", "_flips")

    def __init__(self, p: float, stream: RandomStream):
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"coin probability must lie in [0, 1], got {p}")
        self.__p = float(p)
        self._stream = stream
        self._flips = 0

    def __repr__(self):
        return f"CoinSource(flips={self._flips})"

    def flip(self) -> int:
        self._flips += 1
        return 1 if self._stream.uniform() < self.__p else 0

    def flips_used(self) -> int:
        return self._flips


class SequenceCoin:
    """A coin that replays a fixed bit sequence.

    Used to check that a factory's output depends only on the flips it
    actually read. Asking for more bits than supplied raises ``IndexError``.
    """

    def __init__(self, bits):
        self._bits = [int(b) for b in bits]
        self._flips = 0

    def flip(self) -> int:
        b = self._bits[self._flips]
        self._flips += 1
        return b

    def flips_used(self) -> int:
        return self._flips


class RecordingCoin:
    """Wraps another coin and remembers every bit it served."""

    def __init__(self, coin):
        self._coin = coin
        self.bits = []

    def flip(self) -> int:
        b = self._coin.flip()
        self.bits.append(b)
        return b

    def flips_used(self) -> int:
        return self._coin.flips_used()


def flip(c) -> int:
    return c.flip()


def flips_used(c) -> int:
    return c.flips_used()
