"""Command line interface: ``qals <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._json import dumps_canonical
from .cost import speedup_region
from .encoding import Encoding, Scheme
from .errors import QalsError
from .experiments import EXPERIMENT1, EXPERIMENT2, format_rows, run_experiment
from .problem import gen_random_problem, load_problem, save_problem
from .qubo import Qubo, build_binary, build_real, normalize_to_hardware, qubo_to_ising
from .samplers import (AnnealParams, Sample, SampleSet, anneal_states, boltzmann_exact,
                       exhaustive_solve, local_refine)

SAMPLER_NOTE = (
    "Annealer mapping: --sweeps stands in for the anneal time of one read and "
    "--reads for the number of samples requested from the machine. Read k "
    "uses the random stream seed XOR k, so results are reproducible.")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _add_anneal_flags(p: argparse.ArgumentParser, defaults: AnnealParams) -> None:
    p.add_argument("--reads", type=int, default=defaults.reads,
                   help="independent anneals (samples) [%(default)s]")
    p.add_argument("--sweeps", type=int, default=defaults.sweeps,
                   help="Metropolis sweeps per read, i.e. anneal time [%(default)s]")
    p.add_argument("--inv-temp-start", type=float, default=defaults.inv_temp_start)
    p.add_argument("--inv-temp-end", type=float, default=defaults.inv_temp_end)


def cmd_gen(args) -> int:
    problem = gen_random_problem(args.m, args.n, args.seed, args.round_digits)
    if args.out:
        save_problem(problem, args.out, args.format)
    else:
        sys.stdout.write(dumps_canonical(problem.to_dict()) + "\n")
    return 0


def cmd_build(args) -> int:
    problem = load_problem(args.problem, args.format)
    if args.binary:
        model = build_binary(problem)
    else:
        model, _ = build_real(problem, Encoding(Scheme.parse(args.scheme), args.o, args.p))
    doc = model.to_dict()
    if args.ising:
        ising = qubo_to_ising(model)
        scale = None
        if args.normalize:
            ising, scale = normalize_to_hardware(ising)
        doc = ising.to_dict()
        if scale is not None:
            doc["scale"] = scale
    _emit(dumps_canonical(doc) + "\n", args.out)
    return 0


def cmd_solve(args) -> int:
    qubo = Qubo.load(args.qubo)
    if args.sampler == "exhaustive":
        bits, e = exhaustive_solve(qubo)
        samples = SampleSet((Sample(bits, e, 1),))
    else:
        params = AnnealParams(args.reads, args.sweeps, args.inv_temp_start,
                              args.inv_temp_end, args.seed)
        states = anneal_states(qubo, params)
        if args.refine:
            states = np.array([local_refine(qubo, s) for s in states], dtype=np.uint8)
        samples = SampleSet.from_states(qubo, states)
    _emit(dumps_canonical(samples.to_list()) + "\n", args.out)
    return 0


def cmd_cost(args) -> int:
    report = speedup_region(args.m, args.n, args.c, args.beta, args.anneal_time, args.reads)
    sys.stdout.write(dumps_canonical(report.to_dict()) + "\n")
    if args.table:
        sys.stdout.write("\n" + report.table() + "\n")
    return 0


def cmd_boltzmann(args) -> int:
    table = boltzmann_exact(Qubo.load(args.qubo), args.inv_temp)
    _emit(table.to_csv(), args.out)
    return 0


def _experiment(base):
    def run(args) -> int:
        cfg = dict(
            m=args.m if args.m is not None else base.m,
            n=args.n if args.n is not None else base.n,
            seeds=tuple(args.seeds) if args.seeds else base.seeds,
            schemes=tuple(args.schemes) if args.schemes else base.schemes,
            o=args.o, p=args.p, reads=args.reads, sweeps=args.sweeps,
            inv_temp_start=args.inv_temp_start, inv_temp_end=args.inv_temp_end,
            refine=args.refine, auto_theta=args.auto_theta, output=args.out)
        rows = run_experiment(type(base)(**cfg))
        sys.stdout.write(format_rows(rows) + "\n")
        return 0
    return run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qals",
        description="Least squares as QUBO minimisation with radix-2 qubit encodings.",
        epilog=SAMPLER_NOTE)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a seeded random problem")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--round-digits", type=int, default=3)
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out", help="problem file (stdout JSON when omitted)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="problem file -> QUBO (or Ising) JSON")
    p.add_argument("problem")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--scheme", default="OnesComplement",
                   help="Basic, OnesComplement or TwosComplement [%(default)s]")
    p.add_argument("--o", type=int, default=-5)
    p.add_argument("--p", type=int, default=-2)
    p.add_argument("--binary", action="store_true", help="binary least squares, one qubit per variable")
    p.add_argument("--ising", action="store_true", help="emit the Ising form")
    p.add_argument("--normalize", action="store_true",
                   help="with --ising, scale into |h|<=2, |J|<=1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    defaults = AnnealParams()
    p = sub.add_parser("solve", help="QUBO JSON -> sample set JSON", epilog=SAMPLER_NOTE)
    p.add_argument("qubo")
    p.add_argument("--sampler", choices=["exhaustive", "sa"], default="sa")
    _add_anneal_flags(p, defaults)
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--refine", action="store_true", help="greedy descent on every read")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("cost", help="flop-count comparison and speedup test")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int, required=True, help="qubits per variable")
    p.add_argument("--beta", type=float, default=2.0, help="degree of poly(cn) [%(default)s]")
    p.add_argument("--anneal-time", type=float)
    p.add_argument("--reads", type=int)
    p.add_argument("--table", action="store_true", help="also print the text table")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("boltzmann", help="QUBO JSON -> exact probability CSV")
    p.add_argument("qubo")
    p.add_argument("--inv-temp", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_boltzmann)

    for name, base, text in (("experiment1", EXPERIMENT1, "8 variables, Basic vs one's complement"),
                             ("experiment2", EXPERIMENT2, "12 variables, one's complement")):
        p = sub.add_parser(name, help=text, epilog=SAMPLER_NOTE)
        p.add_argument("--m", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--seeds", type=int, nargs="+")
        p.add_argument("--schemes", nargs="+")
        p.add_argument("--o", type=int, default=base.o)
        p.add_argument("--p", type=int, default=base.p)
        _add_anneal_flags(p, defaults)
        p.add_argument("--refine", action="store_true")
        p.add_argument("--auto-theta", action="store_true",
                       help="heuristic: pick [o, p] from the QR solution's magnitude")
        p.add_argument("--out", help="write rows as JSON")
        p.set_defaults(func=_experiment(base))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (QalsError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"qals {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
