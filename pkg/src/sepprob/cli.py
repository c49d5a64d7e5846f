"""Command-line front end: ``sepprob <subcommand> [options]``.

Exit codes: 0 success, 2 validation or checkpoint error, 3 numerical failure,
130 interrupted (after a checkpoint write when one was requested).
"""
import argparse
import json
import os
import platform
import signal
import sys
import time

import numpy as np

from . import eigenspace, registry, scans, scenarios, sepfit
from .errors import CheckpointError, NumericalError, ValidationError
from .qmc import KINDS, canonical_json

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_INTERRUPTED = 0, 2, 3, 130
# execution-only settings, excluded from the embedded config so that outputs
# do not depend on them
_EXECUTION_KEYS = {"workers", "output", "checkpoint", "checkpoint_every", "resume", "func"}


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(message)


def _common(p, sampling=True):
    p.add_argument("--output", help="output path prefix (writes .csv/.json/.meta.json)")
    if sampling:
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--kind", choices=KINDS, default="sobol")
        p.add_argument("--workers", type=int, default=1)


def _checkpointing(p):
    p.add_argument("--checkpoint", help="checkpoint file written during the run")
    p.add_argument("--checkpoint-every", type=int, default=None,
                   help="samples between checkpoint writes")
    p.add_argument("--resume", help="checkpoint file to continue from")


def build_parser():
    parser = _Parser(prog="sepprob", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    scan = sub.add_parser("scan", help="separability-function scans")
    scan_sub = scan.add_subparsers(dest="system", required=True, parser_class=_Parser)
    p = scan_sub.add_parser("two-qubit")
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--grid-points", type=int, default=201)
    p.add_argument("--method", choices=("rejection", "onion"), default=None)
    p.add_argument("--block-size", type=int, default=scans.DEFAULT_BLOCK)
    _common(p)
    _checkpointing(p)
    p.set_defaults(func=cmd_scan)
    p = scan_sub.add_parser("qubit-qutrit")
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--grid-points", type=int, default=21)
    p.add_argument("--method", choices=("rejection", "onion"), default=None)
    p.add_argument("--block-size", type=int, default=scans.DEFAULT_BLOCK)
    _common(p)
    _checkpointing(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("r1", help="R1 at the symmetric ratio point")
    p.add_argument("--system", choices=("two-qubit", "qubit-qutrit"), default="two-qubit")
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--method", choices=("rejection", "onion"), default=None)
    _common(p)
    p.set_defaults(func=cmd_r1)

    p = sub.add_parser("r2", help="R2 from the reference separability function")
    p.add_argument("--system", choices=("two-qubit", "qubit-qutrit"), default="two-qubit")
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--method", choices=("quad", "qmc"), default="quad")
    p.add_argument("--points", type=int, default=2 ** 20, help="QMC points (qmc method)")
    p.add_argument("--seed", type=int, default=0)
    _common(p, sampling=False)
    p.set_defaults(func=cmd_r2)

    p = sub.add_parser("probability", help="R1 (estimated) x R2 (exact)")
    p.add_argument("--system", choices=("two-qubit", "qubit-qutrit"), default="two-qubit")
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--method", choices=("rejection", "onion"), default=None)
    _common(p)
    p.set_defaults(func=cmd_probability)

    p = sub.add_parser("scenario", help="low-dimensional scenario volumes")
    p.add_argument("--name", choices=scenarios.NAMES + ("all",), default="all")
    _common(p, sampling=False)
    p.set_defaults(func=cmd_scenario)

    eig = sub.add_parser("eigen", help="eigenvalue-space analyses")
    eig_sub = eig.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = eig_sub.add_parser("scan")
    p.add_argument("--grid", type=int, default=20, help="lattice denominator m")
    p.add_argument("--unitaries", type=int, default=50_000)
    p.add_argument("--rank", choices=eigenspace.RANKS, default="full")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    _common(p, sampling=False)
    p.set_defaults(func=cmd_eigen_scan)
    p = eig_sub.add_parser("probability")
    p.add_argument("--table", required=True, help="CSV written by 'eigen scan'")
    p.add_argument("--grid", type=int, default=20)
    p.add_argument("--metric", choices=("hs", "bures", "uniform"), default="hs")
    p.add_argument("--beta", type=int, default=2)
    _common(p, sampling=False)
    p.set_defaults(func=cmd_eigen_probability)
    p = eig_sub.add_parser("bounds")
    p.add_argument("--metric", choices=("hs", "bures", "uniform"), default="hs")
    p.add_argument("--beta", type=int, default=2)
    _common(p, sampling=False)
    p.set_defaults(func=cmd_eigen_bounds)

    p = sub.add_parser("fit", help="least-squares fits of model families")
    p.add_argument("--table", required=True, help="CSV from a scan or eigen scan")
    p.add_argument("--family", choices=sepfit.FAMILIES, required=True)
    p.add_argument("--grid", type=int, default=20, help="lattice denominator (eigen tables)")
    _common(p, sampling=False)
    p.set_defaults(func=cmd_fit)

    reg = sub.add_parser("registry", help="constants and conjectures")
    reg_sub = reg.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = reg_sub.add_parser("list")
    _common(p, sampling=False)
    p.set_defaults(func=cmd_registry_list)

    p = sub.add_parser("volume", help="exact total HS volume")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=int, required=True)
    _common(p, sampling=False)
    p.set_defaults(func=cmd_volume)
    return parser


# ---------------------------------------------------------------- output

def resolved_config(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in _EXECUTION_KEYS}


def _prepare_output(prefix):
    if prefix is None:
        return
    folder = os.path.dirname(os.path.abspath(prefix))
    if not os.path.isdir(folder) or not os.access(folder, os.W_OK):
        raise ValidationError(f"output directory {folder!r} is not writable")


def _emit(args, summary, started, table=None):
    config = resolved_config(args)
    doc = {"config": config, "result": summary}
    text = json.dumps(doc, indent=2, sort_keys=True, default=_jsonable)
    print(text)
    if args.output:
        comment = canonical_json(config)
        if table is not None:
            table.to_csv(args.output + ".csv", comment=comment)
        with open(args.output + ".json", "w") as fh:
            fh.write(text + "\n")
        meta = {"started": started, "finished": time.time(),
                "elapsed_s": time.time() - started, "python": platform.python_version(),
                "numpy": np.__version__, "workers": getattr(args, "workers", 1),
                "argv": sys.argv[1:]}
        with open(args.output + ".meta.json", "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "as_dict"):
        return obj.as_dict()
    return str(obj)


# -------------------------------------------------------------- commands

def cmd_scan(args, started):
    if args.system == "two-qubit":
        grid = scans.mu_grid(args.grid_points)
        run = scans.scan_2qubit
    else:
        grid = scans.nu_grid(args.grid_points)
        run = scans.scan_qubit_qutrit
    table = run(args.beta, args.samples, grid, seed=args.seed, kind=args.kind,
                method=args.method, workers=args.workers, block_size=args.block_size,
                checkpoint_path=args.checkpoint, checkpoint_every=args.checkpoint_every,
                resume=args.resume)
    summary = {"metadata": table.metadata, "n_samples": table.n_samples,
               "n_feasible": table.n_feasible, "feasible_fraction": table.feasible_fraction}
    if table.usable and table.separable_counts[table.symmetric_index] > 0:
        summary["r1"] = scans.r1_from_table(table).as_dict() \
            if len(table.block_feasible) >= scans.MIN_BATCHES else None
    _emit(args, summary, started, table)


def cmd_r1(args, started):
    est = scans.r1_estimate(args.beta, args.system, args.samples, seed=args.seed,
                            kind=args.kind, method=args.method, workers=args.workers)
    conj = registry._TQ_R1 if args.system == "two-qubit" else {}
    if args.beta in conj:
        est.conjecture = conj[args.beta]
        est.conjecture_value = registry.exact_value(conj[args.beta])
    _emit(args, est.as_dict(), started)


def cmd_r2(args, started):
    est = registry.r2_constant(args.system, args.beta, method=args.method,
                               n_points=args.points, seed=args.seed)
    _emit(args, est.as_dict(), started)


def cmd_probability(args, started):
    r1 = scans.r1_estimate(args.beta, args.system, args.samples, seed=args.seed,
                           kind=args.kind, method=args.method, workers=args.workers)
    est = registry.pipeline_probability(args.system, args.beta, r1)
    _emit(args, est.as_dict(), started)


def cmd_scenario(args, started):
    names = [n for n in scenarios.NAMES if scenarios.get_spec(n).has_element] \
        if args.name == "all" else [args.name]
    out = {n: scenarios.scenario_report(n).as_dict() for n in names}
    _emit(args, out, started)


def cmd_eigen_scan(args, started):
    table = eigenspace.eigen_scan(args.grid, args.unitaries, rank=args.rank, seed=args.seed,
                                  workers=args.workers)
    summary = {"metadata": table.metadata, "points": len(table.lattice)}
    _emit(args, summary, started, table)


def cmd_eigen_probability(args, started):
    table = eigenspace.read_eigen_csv(args.table, args.grid)
    est = eigenspace.probability_from_table(table, args.metric, args.beta)
    _emit(args, est.as_dict(), started)


def cmd_eigen_bounds(args, started):
    out = {r: eigenspace.region_probability(r, args.metric, args.beta)
           for r in ("ball", "vad", "pittenger")}
    _emit(args, out, started)


def cmd_fit(args, started):
    if args.family in ("r-power", "vad-power"):
        table = eigenspace.read_eigen_csv(args.table, args.grid)
    else:
        table = scans.read_table_csv(args.table)
    _emit(args, sepfit.fit_family(table, args.family).as_dict(), started)


def cmd_registry_list(args, started):
    _emit(args, [e.as_dict() for e in registry.list_entries()], started)


def cmd_volume(args, started):
    vol = registry.andai_volume(args.n, args.beta)
    _emit(args, {"expression": vol.expression(), "value": f"{float(vol):.17g}"}, started)


# ------------------------------------------------------------------ main

def _raise_interrupt(signum, frame):
    raise KeyboardInterrupt


def run(argv=None):
    """Parse ``argv`` and execute; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
    except _ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    previous = signal.getsignal(signal.SIGTERM)
    try:
        signal.signal(signal.SIGTERM, _raise_interrupt)
    except ValueError:  # not in the main thread
        previous = None
    try:
        _prepare_output(args.output)
        args.func(args, time.time())
    except (ValidationError, CheckpointError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return EXIT_INTERRUPTED
    finally:
        if previous is not None:
            signal.signal(signal.SIGTERM, previous)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
