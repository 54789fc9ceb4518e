"""Command-line front end: sweeps, single-state measurement, state generation
and the closed-form verification suite.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

import numpy as np

from .core import (
    BadSubsystemIndex,
    DegenerateSpectrum,
    DimensionMismatch,
    NccorrError,
    NoConvergence,
    NonHermitian,
    NotAProbabilityVector,
    ParamOutOfRange,
    ParseError,
    PartitionCapExceeded,
    ProductBasis,
    ValidationFailure,
)
from . import measures, states, verify
from .measures import Partition
from .search import SearchConfig
from .sweep import MEASURE_ORDER, SweepSpec, run_sweep

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_NUMERIC = 3

_INPUT_ERRORS = (
    ParamOutOfRange,
    ParseError,
    ValidationFailure,
    DimensionMismatch,
    BadSubsystemIndex,
    NotAProbabilityVector,
    PartitionCapExceeded,
    DegenerateSpectrum,
    OSError,
)
_NUMERIC_ERRORS = (NoConvergence, NonHermitian)


def _parse_measures(text: str) -> tuple:
    items = tuple(m.strip().upper() for m in text.split(",") if m.strip())
    bad = [m for m in items if m not in MEASURE_ORDER]
    if bad:
        raise ParamOutOfRange(f"unknown measures {bad}; choose from {','.join(MEASURE_ORDER)}")
    if not items:
        raise ParamOutOfRange("empty measure list")
    return items


def _search_config(args) -> SearchConfig:
    return SearchConfig(
        n_samples=args.samples,
        seed=args.seed,
        refine_steps=args.refine_steps,
        chunk_size=args.chunk_size,
    )


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=int, default=40000, help="random bases per D evaluation")
    p.add_argument("--seed", type=int, default=1, help="search seed")
    p.add_argument("--refine-steps", type=int, default=200,
                   help="hill-climb steps after the random search (0 = pure random search)")
    p.add_argument("--partition-cap", type=int, default=measures.DEFAULT_PARTITION_CAP,
                   help="max partition assignments enumerated per subsystem for G")
    p.add_argument("--chunk-size", type=int, default=8192,
                   help="internal evaluation batch size (never changes results)")


def _serialize_witness(witness) -> object:
    if isinstance(witness, ProductBasis):
        return {
            "type": "product_basis",
            "factors": [
                [[[v.real, v.imag] for v in row] for row in f] for f in witness.factors
            ],
        }
    if isinstance(witness, list) and witness and isinstance(witness[0], Partition):
        return {
            "type": "partitions",
            "per_subsystem": [
                {"k": p.k, "assignment": list(p.assignment)} for p in witness
            ],
        }
    if isinstance(witness, tuple) and len(witness) == 2:
        return {"type": "splitting", "side_a": list(witness[0]), "side_b": list(witness[1])}
    return witness


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        family=args.family,
        param_start=args.param_from,
        param_end=args.param_to,
        steps=args.steps,
        measures=_parse_measures(args.measures),
        search=_search_config(args),
        partition_cap=args.partition_cap,
    )
    text = run_sweep(spec)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_measure(args) -> int:
    rho = states.load_state(args.state)
    cfg = _search_config(args)
    requested = _parse_measures(args.measures)
    out = {}
    for m in requested:
        if m == "D":
            rep = measures.measure_D(rho, cfg)
        elif m == "G":
            rep = measures.measure_G(rho, args.partition_cap)
        elif m == "DG":
            rep = measures.measure_DG(rho)
        elif m == "K":
            rep = measures.measure_K(rho)
        else:
            rep = measures.negativity(rho)
        out[m] = {
            "value": rep.value,
            "witness": _serialize_witness(rep.witness),
            "diagnostics": _jsonable(rep.diagnostics),
        }
    sys.stdout.write(json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def cmd_gen_state(args) -> int:
    if args.family is not None:
        if args.param is None:
            raise ParamOutOfRange("--param is required with --family")
        ctor = {
            "ps": states.make_pseudo_entangled,
            "sigma": states.make_sigma,
            "horodecki": states.make_horodecki,
        }[args.family]
        rho = ctor(args.param)
    else:
        if args.dims is None:
            raise ParamOutOfRange("either --family or --dims is required")
        dims = tuple(int(d) for d in args.dims.split(","))
        rank = args.rank if args.rank is not None else int(np.prod(dims))
        rho = states.random_density_matrix(dims, rank, args.seed)
    states.store_state(rho, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = verify.run_all(
        n_samples=args.samples,
        seed=args.seed,
        refine_steps=args.refine_steps,
        tol=args.tol,
    )
    failed = 0
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"[{status}] {c.name}: {c.detail}")
        failed += 0 if c.passed else 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nccorr",
        description="Correlation measures D, G, D_G, K and negativity on density matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="sweep a state family and write a CSV of measures")
    p.add_argument("--family", required=True, choices=("ps", "sigma", "horodecki"))
    p.add_argument("--from", dest="param_from", type=float, required=True)
    p.add_argument("--to", dest="param_to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--measures", default="D,G,DG,K,N")
    p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    _add_search_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("measure", help="measure a stored state, JSON report to stdout")
    p.add_argument("state", help="path to a JSON state file")
    p.add_argument("--measures", default="D,G,DG,K,N")
    _add_search_flags(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("gen-state", help="write a state file (family member or random)")
    p.add_argument("--family", choices=("ps", "sigma", "horodecki"))
    p.add_argument("--param", type=float)
    p.add_argument("--dims", help="comma-separated dims for a random state, e.g. 2,2")
    p.add_argument("--rank", type=int)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_state)

    p = sub.add_parser("verify", help="run the closed-form regression suite")
    p.add_argument("--samples", type=int, default=40000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--refine-steps", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-9,
                   help="tolerance for the closed-form sweep checks")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (_NUMERIC_ERRORS + (FloatingPointError,)) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except NccorrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
