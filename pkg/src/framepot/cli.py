"""Command-line interface: ``framepot <command> [options]``.

Exit codes: 0 success, 1 computation error, 2 usage error.  Randomized
commands take ``--seed`` (default: ``$FRAMEPOT_SEED`` or 0) and echo it.
Whenever ``--out`` is given, a run record ``<out>.run.json`` is written next
to the output.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, bounds, certify, constructions, designs, optimizer, potentials
from .core import Configuration, ConfigurationError


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def default_seed() -> int:
    return int(os.environ.get("FRAMEPOT_SEED", "0"))


def _positive_p(text: str) -> float:
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not p > 0:
        raise argparse.ArgumentTypeError("p must be positive")
    return p


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from None


def _settings(args, **overrides) -> optimizer.OptimizerSettings:
    kw = {"seed": args.seed}
    for name in ("restarts", "max_iters", "workers"):
        value = getattr(args, name, None)
        if value is not None:
            kw[name] = value
    kw.update(overrides)
    return optimizer.OptimizerSettings(**kw)


def _emit(args, text: str) -> list[str]:
    if getattr(args, "out", None):
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
        return [str(args.out)]
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return []


# -- commands ---------------------------------------------------------------

def cmd_construct(args):
    cfg = constructions.build(args.kind, n=args.n, d=args.d, k=args.k, seed=args.seed)
    return _emit(args, cfg.to_json())


def cmd_eval(args):
    cfg = Configuration.load(args.config)
    p = math.inf if args.kernel == "coherence" else args.p
    if p is None:
        raise ConfigurationError("--p is required for the gp kernel")
    return _emit(args, fmt(potentials.fp_eval(cfg, p)))


def cmd_bounds(args):
    return _emit(args, json.dumps(bounds.all_bounds(args.n, args.d, args.p)))


def cmd_design_check(args):
    cfg = Configuration.load(args.config)
    report = designs.design_check(cfg, args.t, args.tol)
    return _emit(args, json.dumps(report.to_dict()))


def cmd_minimize(args):
    s = _settings(args)
    if math.isinf(args.p):
        result = optimizer.minimize_coherence(args.n, args.d, s)
    else:
        result = optimizer.minimize(args.n, args.d, args.p, s)
    record = result.to_dict()
    record["master_seed"] = args.seed
    return _emit(args, json.dumps(record))


def sweep_csv(result: optimizer.SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "value", "invariant_digest", "seed"])
    for p, value, digest, seed in sorted(result.rows):
        w.writerow([fmt(p), fmt(value), digest, seed])
    return buf.getvalue()


def export_sweep_csv(result: optimizer.SweepResult, path) -> None:
    if not result.rows:
        raise ValueError("empty sweep")
    Path(path).write_text(sweep_csv(result))


def read_sweep_csv(path) -> list[tuple]:
    with open(path, newline="") as fh:
        return [(float(r["p"]), float(r["value"]), r["invariant_digest"], int(r["seed"])) for r in csv.DictReader(fh)]


def cmd_sweep(args):
    if args.steps < 1 or args.pmax < args.pmin or (args.steps > 1 and args.pmax == args.pmin):
        raise argparse.ArgumentTypeError("need steps >= 1 and pmin < pmax")
    grid = np.linspace(args.pmin, args.pmax, args.steps) if args.steps > 1 else [args.pmin]
    result = optimizer.sweep(args.n, args.d, grid, _settings(args), warm_start=args.warm_start)
    if args.out:
        export_sweep_csv(result, args.out)
        return [str(args.out)]
    sys.stdout.write(sweep_csv(result))
    return []


def cmd_conjecture(args):
    ks = [args.k] if args.k is not None else list(range(1, args.d + 1))
    s = _settings(args)
    reports = [optimizer.conjecture_test(args.d, k, s, gap_tol=args.gap_tol).to_dict() for k in ks]
    for r in reports:
        if not args.full:
            r.pop("records")
    out = reports[0] if len(reports) == 1 else {"d": args.d, "reports": reports}
    out = {**out, "master_seed": args.seed} if isinstance(out, dict) else out
    return _emit(args, json.dumps(out))


def cmd_certify(args):
    if args.nodes:
        p = args.p
        if not (float(p).is_integer() and int(p) % 2 == 0):
            raise ValueError("general-dimension certificates use a(t) = t^p and need an even integer p")
        kernel = certify.PowerKernel(p, offset=0.0, slope=1.0)
        cert = certify.lp_certify(kernel, args.n, args.d, args.nodes)
        cert.extra = {"p": p, "candidate": "user nodes"}
    else:
        if args.d != 2:
            raise ValueError("the half-circle certificate is for d = 2; pass --nodes for other dimensions")
        cert = certify.certify_half_circle(args.n, args.p)
    return _emit(args, json.dumps(cert.to_dict()))


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="framepot", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, seeded=False, out=True):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=fn)
        if seeded:
            sp.add_argument("--seed", type=int, default=default_seed())
        if out:
            sp.add_argument("--out", help="write output here (and a .run.json record beside it)")
        return sp

    sp = add("construct", cmd_construct, "emit a named configuration as JSON", seeded=True)
    sp.add_argument("--kind", required=True, help=", ".join(constructions.KINDS))
    sp.add_argument("--n", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--k", type=int)

    sp = add("eval", cmd_eval, "evaluate the p-frame potential of a configuration file")
    sp.add_argument("--config", required=True)
    sp.add_argument("--p", type=_positive_p)
    sp.add_argument("--kernel", choices=("gp", "coherence"), default="gp")

    sp = add("bounds", cmd_bounds, "print the applicable lower bounds as JSON")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--p", type=_positive_p, required=True)

    sp = add("design-check", cmd_design_check, "test a configuration for spherical t-design strength")
    sp.add_argument("--config", required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--tol", type=float, default=1e-10)

    def opt_flags(sp):
        sp.add_argument("--restarts", type=int)
        sp.add_argument("--max-iters", dest="max_iters", type=int)
        sp.add_argument("--workers", type=int)

    sp = add("minimize", cmd_minimize, "minimize FP_p over N unit vectors in R^d", seeded=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--p", type=_positive_p, required=True)
    opt_flags(sp)

    sp = add("sweep", cmd_sweep, "minimize over a grid of p; CSV output", seeded=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--pmin", type=_positive_p, required=True)
    sp.add_argument("--pmax", type=_positive_p, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--warm-start", action="store_true")
    opt_flags(sp)

    sp = add("conjecture", cmd_conjecture, "compare minimized FP_{p,d+1,d} with lifted simplices", seeded=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--k", type=int, help="default: every k = 1..d")
    sp.add_argument("--gap-tol", dest="gap_tol", type=float, default=1e-9)
    sp.add_argument("--full", action="store_true", help="include per-trial records")
    opt_flags(sp)

    sp = add("certify", cmd_certify, "LP certificate for the half-circle configuration")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=_positive_p, required=True)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--nodes", type=_float_list, help="candidate inner products (general d)")
    return parser


def _write_record(args, argv, outputs, wall_time):
    record = {
        "command": args.command,
        "args": {k: v for k, v in vars(args).items() if k not in ("func", "command")},
        "argv": list(argv),
        "master_seed": getattr(args, "seed", None),
        "outputs": outputs,
        "wall_time": wall_time,
        "tool_version": __version__,
    }
    for path in outputs:
        Path(f"{path}.run.json").write_text(json.dumps(record, default=str) + "\n")


def dispatch(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        outputs = args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.print_usage(sys.stderr)
        print(f"framepot {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"framepot {args.command}: {exc}", file=sys.stderr)
        return 1
    _write_record(args, argv, outputs, time.perf_counter() - start)
    return 0


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
