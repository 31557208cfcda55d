"""Recursive perfect simulation with exact-output guarantees."""

from .engine import Censored, Halt, Problem, Recurse, RunLimits, SampleRecord, run, run_truncated
from .errors import DepthExceeded, DomainError
from .kernels import BACKEND
from .randomness import CoinSource, RandomStream, stream_from_seed

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Censored",
    "CoinSource",
    "DepthExceeded",
    "DomainError",
    "Halt",
    "Problem",
    "RandomStream",
    "Recurse",
    "RunLimits",
    "SampleRecord",
    "run",
    "run_truncated",
    "stream_from_seed",
]
