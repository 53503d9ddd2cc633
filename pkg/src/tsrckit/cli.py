"""Command line front end.

    tsrckit gen      --n 10 --seed 42 --out state.json
    tsrckit stats    --in state.json [--out report.json]
    tsrckit sweep    --n 2:200 --realizations 30 --seed 7 --out sweep.csv
    tsrckit husimi   --in state.json --grid 101 --window auto --out husimi.csv
    tsrckit plan     --in state.json [--t-grid 0.5:0.99:0.001] [--fixed-t T] --out recipe.json
    tsrckit fidelity --in recipe.json --eta 0.95 --eta 0.9 --out fidelity.csv

Errors go to stderr as one JSON object; the exit status is 2 for invalid
configuration and 1 for any other toolkit error.
"""

import argparse
import json
import sys

from . import __version__
from ._io import atomic_write_text, csv_text, dump_json
from .engineer import DEFAULT_T_GRID, Recipe, format_table, plan
from .exceptions import ConfigInvalid, TsrcError
from .fock import state_from_dict, state_to_dict
from .lossy import fidelity_with_loss
from .stats import SWEEP_COLUMNS, husimi, report, scaling_sweep
from .tsrc import PRNG_ALGORITHM, SEED_DERIVATION, EnsembleSpec, TsrcSpec, generate_tsrc


def _n_values(text):
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            lo, hi, step = parts
            if step <= 0 or hi < lo:
                raise ValueError
            return list(range(lo, hi + 1, step))
        return [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N, N1,N2,... or lo:hi[:step], got {text!r}")


def _t_grid(text):
    try:
        lo, hi, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:step, got {text!r}")
    return (lo, hi, step)


def _window(text):
    if text == "auto":
        return "auto"
    try:
        vals = tuple(float(p) for p in text.split(":"))
    except ValueError:
        vals = ()
    if len(vals) != 4:
        raise argparse.ArgumentTypeError(f"expected auto or re0:re1:im0:im1, got {text!r}")
    return vals


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigInvalid(message)


def build_parser():
    parser = _Parser(prog="tsrckit", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def spec_flags(p, n_type=int):
        p.add_argument("--n", type=n_type)
        p.add_argument("--theta", type=float, default=0.0)
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--spec", help="JSON spec file {n, theta, seed, distribution}")

    p = sub.add_parser("gen", help="generate a random-coefficient state")
    spec_flags(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("stats", help="observables of a state file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")

    p = sub.add_parser("sweep", help="single-run and ensemble observables versus N")
    spec_flags(p, n_type=_n_values)
    p.add_argument("--realizations", type=int, default=30)
    p.add_argument("--out", required=True)

    p = sub.add_parser("husimi", help="Husimi Q function on a grid")
    p.add_argument("--in", dest="input")
    spec_flags(p)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--window", type=_window, default="auto")
    p.add_argument("--out", required=True)

    p = sub.add_parser("plan", help="engineering recipe for a state file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--t-grid", type=_t_grid, default=DEFAULT_T_GRID)
    p.add_argument("--fixed-t", type=float)
    p.add_argument("--out", required=True)
    p.add_argument("--table", help="write the recipe table here instead of stdout")

    p = sub.add_parser("fidelity", help="fidelity versus detector efficiency")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--eta", type=float, action="append", required=True)
    p.add_argument("--out", required=True)
    return parser


def _spec_from(args, n=None):
    if args.spec:
        with open(args.spec) as fh:
            return TsrcSpec.from_dict(json.load(fh))
    n = args.n if n is None else n
    if n is None:
        raise ConfigInvalid("--n or --spec is required")
    return TsrcSpec(n=n, theta=args.theta, seed=args.seed)


def _provenance(args):
    config = {k: v for k, v in vars(args).items() if v is not None}
    return {"tool": f"tsrckit {__version__}", "prng": PRNG_ALGORITHM, "seed_derivation": SEED_DERIVATION, "config": config}


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _load_state(path):
    return state_from_dict(_load_json(path))


def _cmd_gen(args):
    spec = _spec_from(args)
    state = generate_tsrc(spec)
    meta = dict(state.meta, **_provenance(args))
    atomic_write_text(args.out, dump_json(state_to_dict(state, meta=meta)))


def _cmd_stats(args):
    rep = report(_load_state(args.input))
    payload = {"report": rep.to_dict(), "meta": _provenance(args)}
    text = dump_json(payload)
    if args.out:
        atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)


def _cmd_sweep(args):
    if args.spec:
        base = _spec_from(args, n=0)
        n_values = [base.n] if args.n is None else args.n
    else:
        if args.n is None:
            raise ConfigInvalid("--n is required")
        n_values = args.n
        base = TsrcSpec(n=n_values[0], theta=args.theta, seed=args.seed)
    rows = scaling_sweep(n_values, EnsembleSpec(base, args.realizations))
    atomic_write_text(args.out, csv_text(SWEEP_COLUMNS, rows, _provenance(args)))


def _cmd_husimi(args):
    state = _load_state(args.input) if args.input else generate_tsrc(_spec_from(args))
    grid = husimi(state, window=args.window, resolution=args.grid)
    meta = _provenance(args)
    meta["window"] = [grid.re_min, grid.re_max, grid.im_min, grid.im_max]
    atomic_write_text(args.out, csv_text(("re_beta", "im_beta", "q_value"), grid.rows(), meta))


def _cmd_plan(args):
    state = _load_state(args.input)
    recipe = plan(state, t_grid=args.t_grid, fixed_t=args.fixed_t)
    payload = recipe.to_dict()
    payload["meta"] = dict(_provenance(args), verification=recipe.meta, source=state.meta)
    atomic_write_text(args.out, dump_json(payload))
    table = format_table(recipe) + "\n"
    if args.table:
        atomic_write_text(args.table, table)
    else:
        sys.stdout.write(table)


def _cmd_fidelity(args):
    recipe = Recipe.from_dict(_load_json(args.input))
    rows = [[eta, fidelity_with_loss(recipe, eta)] for eta in args.eta]
    atomic_write_text(args.out, csv_text(("eta", "fidelity"), rows, _provenance(args)))


COMMANDS = {
    "gen": _cmd_gen,
    "stats": _cmd_stats,
    "sweep": _cmd_sweep,
    "husimi": _cmd_husimi,
    "plan": _cmd_plan,
    "fidelity": _cmd_fidelity,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except TsrcError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), default=str) + "\n")
        return 2 if isinstance(exc, ConfigInvalid) else 1
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "io", "message": str(exc)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
