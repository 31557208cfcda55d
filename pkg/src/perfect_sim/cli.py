"""``perfect-sim`` command line.

Sampler subcommands print one record per sample (JSONL by default, or CSV
with a header row). Sample ``k`` draws from streams seeded with
``seed + k``, so any sample can be reproduced on its own. Exit codes: 0 on
success, 1 on a runtime error such as a run that never halts, 2 on bad
usage.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import ar, cftp, factory
from .engine import RunLimits
from .errors import PerfectSimError
from .ising import IsingHeatBath, encode, grid_graph
from .randomness import SEED_MAX, CoinSource, stream_from_seed
from .verify.suites import SUITES, run_suite


def _seed(text):
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal integer: {text!r}") from None
    if not 0 <= v <= SEED_MAX:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _common(p, out_default=None):
    p.add_argument("--samples", type=int, default=10, help="number of samples (default 10)")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", default=out_default, help="output file (default stdout)")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")


def build_parser():
    parser = argparse.ArgumentParser(prog="perfect-sim", description="Perfect simulation samplers and checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ar = sub.add_parser("ar", help="acceptance/rejection")
    ar_sub = p_ar.add_subparsers(dest="target", required=True)
    p = ar_sub.add_parser("die", help="uniform on 1..5 from a fair d6")
    _common(p)
    p.add_argument("--max-depth", type=int, default=10**6)
    p = ar_sub.add_parser("custom", help="finite proposal table conditioned on a set")
    _common(p)
    p.add_argument("--table", required=True, help="two-column CSV of value,probability")
    p.add_argument("--accept-set", required=True, help="comma-separated accepted values")
    p.add_argument("--max-depth", type=int, default=10**6)

    p_cftp = sub.add_parser("cftp", help="coupling from the past")
    cftp_sub = p_cftp.add_subparsers(dest="target", required=True)
    p = cftp_sub.add_parser("ising", help="monotone doubling CFTP for the Ising model")
    _common(p)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--t0", type=int, default=None, help="initial look-back (default: number of sites)")
    p.add_argument("--max-doublings", type=int, default=64)
    p = cftp_sub.add_parser("toy", help="three-state toy chains")
    _common(p)
    p.add_argument("--chain", choices=sorted(cftp.TOY_CHAINS), required=True)
    p.add_argument("--t0", type=int, default=2, help="initial look-back for the reflecting walk")
    p.add_argument("--max-doublings", type=int, default=64)

    p_fac = sub.add_parser("factory", help="Bernoulli factories")
    fac_sub = p_fac.add_subparsers(dest="target", required=True)
    for name, extra in (("von-neumann", ()), ("exp", ("--c",)), ("linear", ("--c", "--eps"))):
        p = fac_sub.add_parser(name)
        _common(p)
        p.add_argument("--p", type=float, required=True, help="hidden coin probability")
        for flag in extra:
            p.add_argument(flag, type=float, required=True)
        p.add_argument("--max-depth", type=int, default=10**6)

    p = sub.add_parser("verify", help="run statistical verification suites")
    p.add_argument("--suite", choices=("all", *SUITES), default="all")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", default="report.json")
    return parser


def _validate(parser, cfg):
    if cfg.command == "verify":
        return
    if cfg.samples < 1:
        parser.error("--samples must be at least 1")
    if getattr(cfg, "max_depth", 1) < 1:
        parser.error("--max-depth must be at least 1")
    if getattr(cfg, "max_doublings", 1) < 1:
        parser.error("--max-doublings must be at least 1")
    if cfg.command == "factory":
        if not 0.0 <= cfg.p <= 1.0:
            parser.error("--p must lie in [0, 1]")
        if cfg.target == "exp" and not cfg.c > 0:
            parser.error("--c must be positive")
        if cfg.target == "linear":
            if not cfg.c > 1:
                parser.error("--c must exceed 1 for the linear factory")
            if not 0 < cfg.eps < 1:
                parser.error("--eps must lie in (0, 1)")
    if cfg.command == "cftp":
        if cfg.t0 is not None and cfg.t0 < 1:
            parser.error("--t0 must be positive")
        if cfg.target == "ising":
            if cfg.width < 1 or cfg.height < 1:
                parser.error("--width and --height must be positive")
            if not cfg.beta >= 0:
                parser.error("--beta must be nonnegative")


def parse_args(argv=None):
    """Parse and validate; exits with status 2 on a usage error."""
    parser = build_parser()
    cfg = parser.parse_args(argv)
    _validate(parser, cfg)
    return cfg


def _sampler(cfg):
    """Return ``sample(k) -> record dict`` for the configured subcommand."""
    if cfg.command == "ar":
        limits = RunLimits(cfg.max_depth)
        if cfg.target == "die":
            prob = ar.DIE_PROBLEM
        else:
            values, probs = ar.read_table(cfg.table)
            accept = [v.strip() for v in cfg.accept_set.split(",") if v.strip()]
            prob = ar.table_problem(values, probs, accept)

        def sample(k):
            rec = ar.ar_sample(prob, stream_from_seed((cfg.seed + k) % 2**64), limits)
            return {"value": rec.value, "depth": rec.depth, "draws": rec.randomness_units}

        return sample

    if cfg.command == "cftp":
        if cfg.target == "ising":
            update = IsingHeatBath(grid_graph(cfg.width, cfg.height), cfg.beta)
            detector = cftp.make_monotone_detector(update.bottom(), update.top())
            t0 = cfg.t0 or update.n

            def draw(stream):
                return cftp.cftp_doubling(update, detector, t0, stream, cfg.max_doublings)

            fmt = encode
        else:
            update = cftp.TOY_CHAINS[cfg.chain]()
            if cfg.chain == "reset-walk":
                def draw(stream):
                    return cftp.cftp_single(update, cftp.exhaustive_detector, stream)
            else:
                def draw(stream):
                    return cftp.cftp_doubling(update, cftp.exhaustive_detector, cfg.t0, stream, cfg.max_doublings)
            fmt = int

        def sample(k):
            rec = draw(stream_from_seed((cfg.seed + k) % 2**64))
            return {"value": fmt(rec.value), "depth": rec.depth, "draws": rec.randomness_units}

        return sample

    limits = RunLimits(cfg.max_depth)

    def sample(k):
        s = (cfg.seed + k) % 2**64
        stream, coin = stream_from_seed(s), CoinSource(cfg.p, stream_from_seed(s, 1))
        if cfg.target == "von-neumann":
            rec = factory.von_neumann_record(coin, stream, limits)
        elif cfg.target == "exp":
            rec = factory.exp_factory_record(coin, cfg.c, stream, limits)
        else:
            rec = factory.linear_factory_record(coin, cfg.c, cfg.eps, stream, limits)
        return {"bit": rec.value, "flips": rec.flips, "depth": rec.depth}

    return sample


def _emit(cfg, sample, fh):
    writer = None
    for k in range(cfg.samples):
        row = sample(k)
        if cfg.format == "jsonl":
            fh.write(json.dumps(row) + "\n")
        else:
            if writer is None:
                writer = csv.DictWriter(fh, fieldnames=list(row), lineterminator="\n")
                writer.writeheader()
            writer.writerow(row)


def execute(cfg) -> int:
    try:
        if cfg.command == "verify":
            report = run_suite(cfg.suite, cfg.seed)
            report.write(cfg.out)
            for c in report.checks:
                print(c.line())
            print(f"{len(report.checks) - len(report.failures())}/{len(report.checks)} checks passed")
            return 0 if report.passed else 1
        sample = _sampler(cfg)
        if cfg.out:
            with open(cfg.out, "w", newline="") as fh:
                _emit(cfg, sample, fh)
        else:
            _emit(cfg, sample, sys.stdout)
        return 0
    except (PerfectSimError, OSError) as exc:
        print(f"perfect-sim: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    sys.exit(execute(parse_args(argv)))


if __name__ == "__main__":
    main()
