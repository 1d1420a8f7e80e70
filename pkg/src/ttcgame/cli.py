"""Command-line driver.

    ttcgame simulate  CONFIG [--beta B] [--v0 X | --no-abstention] [--seed S] [--mode M] [--max-iter N] [--out DIR]
    ttcgame equilibria CONFIG [--budget N] [--out DIR]
    ttcgame poa       CONFIG [--beta B] ... [--out DIR]
    ttcgame sweep     CONFIG --betas 200,1000,1e5 [--out DIR]
    ttcgame auction   CONFIG [--out DIR]

CONFIG is a JSON document naming the evaluation CSV and pricing JSON (paths
relative to the config file) plus build settings::

    {"evaluations": "worked_example.csv", "pricing": "worked_example_pricing.json",
     "dataset": "intro", "method": "best_of_n",
     "value_per_accuracy_point": 0.02, "margin": 0.25,
     "v0": null, "beta": "inf", "validation": "lenient"}

``value_preset`` (gsm8k, gpqa, aime) may replace ``value_per_accuracy_point``.
A summary is printed to stdout; with ``--out`` the full outputs and a
``manifest.json`` are written there.

Exit codes: 0 success, 1 usage or input error, 2 dynamics did not
converge, 3 strategy space exceeds the budget (``TTCGAME_BUDGET``).
Enumeration uses ``TTCGAME_WORKERS`` processes (default 1).
"""
from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import math
import os
import sys
from pathlib import Path

from . import __version__, serialize
from .auction import auction_equilibrium
from .dynamics import DynamicsConfig, Mode, run
from .errors import BudgetExceededError, DomainError, GameError
from .ingestion import VALUE_PER_POINT, BuildConfig, build_game, load_evaluation_csv, load_pricing_json
from .provider import ValidationMode
from .search import enumerate_equilibria, max_social_welfare, resolve_budget
from .welfare import SweepRow, beta_sweep, poa_lower_bound, price_of_anarchy

EXIT_OK, EXIT_INPUT, EXIT_NOT_CONVERGED, EXIT_BUDGET = 0, 1, 2, 3

CONFIG_KEYS = {
    "evaluations", "pricing", "dataset", "method", "value_per_accuracy_point",
    "value_preset", "margin", "v0", "beta", "validation",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _beta(text):
    try:
        b = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid beta {text!r}") from None
    if not b > 0:
        raise argparse.ArgumentTypeError(f"beta must be positive (or inf), got {text}")
    return b


def _betas(text):
    return [_beta(t) for t in text.replace(" ", "").split(",") if t]


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {n}")
    return n


def _seed(text):
    try:
        s = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return s


# --- configuration -----------------------------------------------------------

def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_config(path):
    """Parse a game config; returns ``(settings, input paths)``."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise UsageError(f"{path}: config must be a JSON object")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"{path}: unknown config keys {sorted(unknown)}")
    for key in ("evaluations", "pricing"):
        if key not in data:
            raise UsageError(f"{path}: missing required key {key!r}")
    if "value_per_accuracy_point" in data:
        vpp = data["value_per_accuracy_point"]
    elif "value_preset" in data:
        try:
            vpp = VALUE_PER_POINT[str(data["value_preset"]).lower()]
        except KeyError:
            raise UsageError(f"{path}: unknown value_preset {data['value_preset']!r}") from None
    else:
        raise UsageError(f"{path}: set value_per_accuracy_point or value_preset")
    beta = data.get("beta", "inf")
    settings = {
        "dataset": data.get("dataset"),
        "method": data.get("method"),
        "value_per_accuracy_point": float(vpp),
        "margin": float(data.get("margin", 0.25)),
        "v0": None if data.get("v0") is None else float(data["v0"]),
        "beta": _beta(str(beta)),
        "validation": ValidationMode(data.get("validation", "lenient")),
    }
    inputs = {
        "config": path,
        "evaluations": path.parent / data["evaluations"],
        "pricing": path.parent / data["pricing"],
    }
    return settings, inputs


def _build(args):
    settings, inputs = load_config(args.config)
    if getattr(args, "beta", None) is not None:
        settings["beta"] = args.beta
    if getattr(args, "no_abstention", False):
        settings["v0"] = None
    elif getattr(args, "v0", None) is not None:
        settings["v0"] = args.v0
    config = BuildConfig(
        value_per_accuracy_point=settings["value_per_accuracy_point"],
        margin=settings["margin"],
        v0=settings["v0"],
        beta=settings["beta"],
        validation=settings["validation"],
    )
    records = load_evaluation_csv(inputs["evaluations"])
    pricing = load_pricing_json(inputs["pricing"])
    game = build_game(records, pricing, config, settings["dataset"], settings["method"])
    return game, settings, inputs


# --- output ------------------------------------------------------------------

def _timestamp():
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    now = (
        _dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc)
        if epoch
        else _dt.datetime.now(_dt.timezone.utc)
    )
    return now.isoformat(timespec="seconds").replace("+00:00", "Z")


class _Run:
    """Collects outputs of one command and writes them with a manifest."""

    def __init__(self, command, args, settings, inputs):
        self.command = command
        self.out = Path(args.out) if getattr(args, "out", None) else None
        self.started = _timestamp()
        self.files = {}
        self.seed = getattr(args, "seed", None)
        flags = {k: v for k, v in vars(args).items() if k not in ("func", "config", "out", "command")}
        flags.update(settings)
        self.flags = serialize.clean({k: flags[k] for k in sorted(flags)})
        self.flags["beta"] = "inf" if math.isinf(settings["beta"]) else settings["beta"]
        self.inputs = {k: _sha256(p) for k, p in inputs.items()}

    def add(self, name, text):
        self.files[name] = text

    def finish(self):
        if self.out is None:
            return
        self.out.mkdir(parents=True, exist_ok=True)
        digests = {}
        for name, text in self.files.items():
            data = text.encode("utf-8")
            (self.out / name).write_bytes(data)
            digests[name] = hashlib.sha256(data).hexdigest()
        core = {"command": self.command, "version": __version__, "flags": self.flags, "inputs": self.inputs}
        manifest = {
            "tool": "ttcgame",
            "version": __version__,
            "command": self.command,
            "seed": self.seed,
            "flags": self.flags,
            "inputs": self.inputs,
            "config_digest": hashlib.sha256(
                json.dumps(core, sort_keys=True, allow_nan=False).encode()
            ).hexdigest(),
            "outputs": digests,
            "started_at": self.started,
            "finished_at": _timestamp(),
        }
        (self.out / "manifest.json").write_text(serialize.dumps(manifest), encoding="utf-8")


def _dyn_config(args):
    return DynamicsConfig(
        mode=Mode(args.mode), seed=args.seed, max_iterations=args.max_iter, budget=args.budget
    )


# --- commands ----------------------------------------------------------------

def cmd_simulate(args) -> int:
    game, settings, inputs = _build(args)
    trace = run(game, _dyn_config(args))
    final = trace.final
    poa = trace.max_welfare / final.welfare if final.welfare > 0 else math.inf
    summary = {
        "converged": trace.converged,
        "iterations": trace.iterations,
        "equilibrium": trace.equilibrium,
        "equilibrium_labels": game.labels(trace.equilibrium) if trace.converged else None,
        "values": game.values_at(final.profile),
        "value_table": [p.values for p in game.providers],
        "utilities": final.utilities,
        "welfare": final.welfare,
        "max_welfare": trace.max_welfare,
        "welfare_maximizer": trace.welfare_maximizer,
        "poa": poa if trace.converged else None,
        "inefficiency": final.inefficiency if trace.converged else None,
    }
    out = _Run("simulate", args, settings, inputs)
    out.add("trace.json", serialize.dumps(serialize.trace_to_dict(game, trace)))
    out.add("trace.csv", serialize.csv_text(serialize.trace_columns(game.n), serialize.trace_rows(trace)))
    out.add("summary.json", serialize.dumps(summary))
    out.finish()
    sys.stdout.write(serialize.dumps(summary))
    if not trace.converged:
        print(f"dynamics did not converge within {args.max_iter} iterations", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_equilibria(args) -> int:
    game, settings, inputs = _build(args)
    budget = resolve_budget(args.budget)
    eqs = enumerate_equilibria(game, budget)
    best, max_sw = max_social_welfare(game, budget)
    doc = serialize.equilibria_to_dict(game, eqs, max_sw, best)
    out = _Run("equilibria", args, settings, inputs)
    out.add("equilibria.json", serialize.dumps(doc))
    out.finish()
    shown = eqs[:50]
    sys.stdout.write(serialize.dumps({
        "count": len(eqs),
        "max_welfare": max_sw,
        "welfare_maximizer": best,
        "equilibria": shown,
        "truncated": len(shown) < len(eqs),
    }))
    return EXIT_OK


def _poa_row(game, trace):
    ineff = trace.final.inefficiency if trace.converged else math.nan
    return SweepRow(game.beta, ineff, trace.converged, trace.iterations, trace.equilibrium)


def cmd_poa(args) -> int:
    game, settings, inputs = _build(args)
    trace = run(game, _dyn_config(args))
    out = _Run("poa", args, settings, inputs)
    doc = {"beta": "inf" if math.isinf(game.beta) else game.beta, "converged": trace.converged, "iterations": trace.iterations,
           "equilibrium": trace.equilibrium}
    if trace.converged:
        report = price_of_anarchy(game, trace.equilibrium, args.budget)
        doc.update(
            poa=report.poa,
            inefficiency=report.inefficiency,
            welfare_at_equilibrium=report.welfare_at_equilibrium,
            max_welfare=report.max_welfare,
            welfare_maximizer=report.welfare_maximizer,
        )
        try:
            bound = poa_lower_bound(game, trace.equilibrium)
            doc["leading_bound"] = bound.leading_bound
            doc["delta_v"] = bound.delta_v
        except DomainError as exc:
            doc["leading_bound"] = None
            doc["bound_note"] = str(exc)
    out.add("poa.json", serialize.dumps(doc))
    out.add("poa.csv", serialize.csv_text(serialize.SWEEP_COLUMNS, serialize.sweep_rows([_poa_row(game, trace)])))
    out.finish()
    sys.stdout.write(serialize.dumps(doc))
    if not trace.converged:
        print(f"dynamics did not converge within {args.max_iter} iterations", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_sweep(args) -> int:
    game, settings, inputs = _build(args)
    rows = beta_sweep(game, args.betas, _dyn_config(args))
    text = serialize.csv_text(serialize.SWEEP_COLUMNS, serialize.sweep_rows(rows))
    out = _Run("sweep", args, settings, inputs)
    out.add("sweep.csv", text)
    out.finish()
    sys.stdout.write(text)
    return EXIT_OK


def cmd_auction(args) -> int:
    game, settings, inputs = _build(args)
    bids, outcome = auction_equilibrium(game)
    trace = run(game, _dyn_config(args))
    doc = serialize.auction_to_dict(game, bids, outcome, trace.equilibrium)
    table = [
        [row, doc["comparison"]["game"][row] if doc["comparison"]["game"] else None,
         doc["comparison"]["auction"][row]]
        for row in serialize.COMPARISON_ROWS
    ]
    text = serialize.csv_text(("quantity", "game", "auction"), table)
    out = _Run("auction", args, settings, inputs)
    out.add("auction.json", serialize.dumps(doc))
    out.add("comparison.csv", text)
    out.finish()
    sys.stdout.write(text)
    return EXIT_OK


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ttcgame", description="Test-time compute game and auction toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, dynamics=True, beta=True):
        p.add_argument("config", help="game config JSON")
        p.add_argument("--out", help="directory for output files and manifest.json")
        p.add_argument("--budget", type=_positive_int, help="max profiles to enumerate")
        if beta:
            p.add_argument("--beta", type=_beta, help="user rationality; 'inf' for perfectly rational")
        ab = p.add_mutually_exclusive_group()
        ab.add_argument("--v0", type=float, help="abstention value")
        ab.add_argument("--no-abstention", action="store_true", help="disable the outside option")
        if dynamics:
            p.add_argument("--seed", type=_seed, default=0)
            p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PAPER_STEP.value)
            p.add_argument("--max-iter", type=_positive_int, default=10_000)

    p = sub.add_parser("simulate", help="run better-response dynamics")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("equilibria", help="enumerate all pure Nash equilibria")
    common(p, dynamics=False)
    p.set_defaults(func=cmd_equilibria)

    p = sub.add_parser("poa", help="price of anarchy at the equilibrium reached by dynamics")
    common(p)
    p.set_defaults(func=cmd_poa)

    p = sub.add_parser("sweep", help="inefficiency as a function of rationality")
    common(p, beta=False)
    p.add_argument("--betas", type=_betas, required=True, help="comma-separated positive betas")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("auction", help="second-price auction vs the game equilibrium")
    common(p)
    p.set_defaults(func=cmd_auction)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"ttcgame: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, GameError, ValueError, OSError, argparse.ArgumentTypeError) as exc:
        print(f"ttcgame: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
