"""Command-line front end.

Subcommands: ``table1`` (grid of updated beliefs for the built-in priors),
``fig1`` (depolarization-recovery curves as csv/json/svg), ``retrodict``
(ad-hoc update from files or built-in names), ``equiv`` (belief equivalence
report, optionally double-checked by the brute-force oracle) and ``verify``
(the seeded invariant suite).

Exit codes: 0 success, 1 validation error, 2 numerical failure (tolerance
exceeded or oracle disagreement), 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .equivalence import ORACLE_SEED, equivalent, oracle_equivalent
from .errors import OracleDisagreement, ParseError, RetroqError
from .model import (
    BELIEF_ALIASES,
    BUILTIN_BELIEF_NAMES,
    Belief,
    DensityOperator,
    QuantumChannel,
    basis_state,
    builtin_belief,
    depolarizing_channel,
    identity_channel,
    measure_x,
    measure_z,
)
from .retrodiction import petz_extended
from .scenarios import curves_to_json, curves_to_svg, recovery_curves, updated_beliefs_table
from .serialize import (
    belief_from_json,
    channel_from_json,
    curves_to_csv,
    density_from_json,
    dump_json,
    load_json,
    matrix_to_json,
)
from .verify import run_all

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3

_CHANNEL_OUTCOMES = {
    "measure-z": ("0", "1"),
    "measure-x": ("+", "-"),
}


def _resolve_belief(spec: str) -> Belief:
    name = BELIEF_ALIASES.get(spec, spec)
    if name in BUILTIN_BELIEF_NAMES:
        return builtin_belief(name)
    return belief_from_json(load_json(spec))


def _resolve_channel(spec: str) -> tuple[QuantumChannel, tuple[str, ...]]:
    """Channel plus the labels its classical outcomes answer to."""
    if spec == "measure-z":
        return measure_z(), _CHANNEL_OUTCOMES[spec]
    if spec == "measure-x":
        return measure_x(), _CHANNEL_OUTCOMES[spec]
    if spec == "identity" or spec.startswith("identity:"):
        dim = int(spec.split(":", 1)[1]) if ":" in spec else 2
        return identity_channel(dim), ()
    if spec == "depolarize" or spec.startswith("depolarize:"):
        p = float(spec.split(":", 1)[1]) if ":" in spec else 0.1
        return depolarizing_channel(p), ()
    return channel_from_json(load_json(spec)), ()


def _resolve_evidence(spec: str, channel: QuantumChannel,
                      labels: tuple[str, ...]) -> DensityOperator:
    if spec in labels:
        return DensityOperator(basis_state(labels.index(spec), channel.dim_out))
    if spec.startswith("ket") and spec[3:].isdigit():
        return DensityOperator(basis_state(int(spec[3:]), channel.dim_out))
    if spec.isdigit() and int(spec) < channel.dim_out:
        return DensityOperator(basis_state(int(spec), channel.dim_out))
    return density_from_json(load_json(spec))


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _cmd_table1(args) -> int:
    report = updated_beliefs_table()
    for cell in report.cells:
        print(f"{cell.belief:>18s} | {cell.channel} -> {cell.outcome}: "
              f"deviation {cell.deviation:.3e}")
    print(f"max deviation {report.max_deviation:.3e} over {len(report.cells)} cells")
    if args.out:
        dump_json(report.to_json(), args.out)
    return EXIT_OK if report.max_deviation <= args.tol else EXIT_NUMERICAL


def _cmd_fig1(args) -> int:
    if args.samples < 4:
        raise ParseError("--samples must be at least 4")
    curves = recovery_curves(samples=args.samples)
    out = args.out or f"fig1.{args.format}"
    if args.format == "csv":
        _write_text(out, curves_to_csv(curves))
    elif args.format == "json":
        dump_json(curves_to_json(curves, args.samples), out)
    else:
        _write_text(out, curves_to_svg(curves))
    print(f"wrote {len(curves)} recovery curves ({args.samples} samples each) to {out}")
    return EXIT_OK


def _cmd_retrodict(args) -> int:
    belief = _resolve_belief(args.belief)
    channel, labels = _resolve_channel(args.channel)
    evidence = _resolve_evidence(args.evidence, channel, labels)
    result = petz_extended(channel, belief, evidence,
                           project_support=args.project_support,
                           renormalize=args.renormalize)
    payload = {
        "scenario": "retrodict",
        "inputs": {"belief": args.belief, "channel": args.channel, "evidence": args.evidence},
        "updated_S": matrix_to_json(result.updated_s.matrix),
        "norm_deficit": result.norm_deficit,
    }
    if args.joint:
        payload["updated_joint"] = matrix_to_json(result.updated_joint.matrix)
        payload["dim_R"] = belief.dim_r
    text = json.dumps(payload, indent=2)
    if args.out:
        _write_text(args.out, text + "\n")
    else:
        print(text)
    return EXIT_OK


def _cmd_equiv(args) -> int:
    b1 = _resolve_belief(args.belief1)
    b2 = _resolve_belief(args.belief2)
    report = equivalent(b1, b2, tol=args.tol)
    payload = {
        "equivalent": report.equivalent,
        "signature_distance": report.signature_distance,
        "marginal_distance": report.marginal_distance,
        "seed": args.seed if args.seed is not None else ORACLE_SEED,
        "channels_tested": 0,
    }
    oracle = None
    if args.oracle:
        oracle = oracle_equivalent(b1, b2, seed=payload["seed"])
        payload["channels_tested"] = oracle.channels_tested
        payload["oracle_equivalent"] = oracle.equivalent
        payload["oracle_max_deviation"] = oracle.max_deviation
    text = json.dumps(payload, indent=2)
    if args.out:
        _write_text(args.out, text + "\n")
    else:
        print(text)
    if oracle is not None and oracle.equivalent != report.equivalent:
        raise OracleDisagreement(
            f"signature says {report.equivalent}, oracle says {oracle.equivalent}"
        )
    return EXIT_OK


def _cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else 0
    results = run_all(seed)
    failed = 0
    for result in results:
        tag = "PASS" if result.passed else "FAIL"
        failed += int(not result.passed)
        print(f"{tag} {result.name}: {result.detail}")
    print(f"{len(results) - failed}/{len(results)} properties hold (seed {seed})")
    return EXIT_OK if failed == 0 else EXIT_NUMERICAL


_GLOBAL_DEFAULTS = {"tol": 1e-9, "seed": None, "out": None, "format": "csv"}


def build_parser() -> argparse.ArgumentParser:
    # the global flags hang off a parent parser attached everywhere, so they
    # parse both before and after the subcommand; SUPPRESS keeps a later
    # unset occurrence from clobbering an earlier value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="numerical tolerance for pass/fail decisions (default 1e-9)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized commands")
    common.add_argument("--out", type=str, default=argparse.SUPPRESS, help="output file path")
    common.add_argument("--format", choices=("csv", "json", "svg"), default=argparse.SUPPRESS,
                        help="output format where applicable (default csv)")

    parser = argparse.ArgumentParser(
        prog="retroq",
        parents=[common],
        description="Quantum belief updates with hidden-register priors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("table1", parents=[common],
                   help="updated beliefs for the built-in priors and measurements")

    fig = sub.add_parser("fig1", parents=[common],
                         help="depolarization-recovery curves on the x-z circle")
    fig.add_argument("--samples", type=int, default=256, help="points around the circle")

    retro = sub.add_parser("retrodict", parents=[common],
                           help="one belief update from files or built-in names")
    retro.add_argument("--belief", required=True,
                       help="builtin name (beta-s, beta-1, beta-2, beta-xyz, beta-sic) or JSON path")
    retro.add_argument("--channel", required=True,
                       help="builtin name (measure-z, measure-x, identity[:d], depolarize[:p]) or JSON path")
    retro.add_argument("--evidence", required=True,
                       help="outcome label (0, 1, +, -, ketN) or JSON density-matrix path")
    retro.add_argument("--joint", action="store_true", help="also print the updated joint state")
    retro.add_argument("--project-support", action="store_true", dest="project_support",
                       help="project evidence onto the support of the forward image")
    retro.add_argument("--renormalize", action="store_true",
                       help="rescale the update to unit trace after projection")

    equiv = sub.add_parser("equiv", parents=[common],
                           help="decide whether two beliefs retrodict identically")
    equiv.add_argument("belief1", help="builtin name or JSON path")
    equiv.add_argument("belief2", help="builtin name or JSON path")
    equiv.add_argument("--oracle", action="store_true",
                       help="also run the brute-force channel battery and cross-check")

    sub.add_parser("verify", parents=[common], help="run the seeded invariant suite")
    return parser


_HANDLERS = {
    "table1": _cmd_table1,
    "fig1": _cmd_fig1,
    "retrodict": _cmd_retrodict,
    "equiv": _cmd_equiv,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for key, value in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return _HANDLERS[args.command](args)
    except OracleDisagreement as err:
        print(f"error: oracle disagreement: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, IOError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except RetroqError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except np.linalg.LinAlgError as err:
        print(f"error: linear algebra failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
