"""``tribox`` command line.

Exit codes: 0 success, 2 usage or bad input, 3 negative verdict (outside,
suite failed, not decomposable), 4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io as _stringio
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from . import __version__
from .box import TOL_QUANTUM, Behavior, white_noise
from .canonical import vertex_from_label
from .exceptions import BadParameters, LPNumericalFailure, NotInR, ResidualInvalid, TriboxError
from .io import box_to_dict, dumps, read_box
from .measures import (
    chsh_values, class99_value, discord_report, mermin_values, svetlichny_values,
)
from .polytope import classify_region, membership, three_decomposition, vertex_set
from .quantum import (
    STATES, SETTINGS, QuantumScenario, make_settings, make_state,
    scenario_from_dict, sixqubit_strategy,
)
from .suites import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE, EXIT_NUMERICAL = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _fmt(v: Any) -> str:
    if isinstance(v, bool) or v is None:
        return str(v).lower() if isinstance(v, bool) else ""
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _flatten(d: dict, prefix: str = "") -> dict[str, Any]:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)) and v and not isinstance(v[0], (dict, list)):
            for n, x in enumerate(v):
                out[f"{key}[{n}]"] = x
        else:
            out[key] = v
    return out


def _table(columns: list[str], rows: list[dict], fmt: str) -> str:
    if fmt == "csv":
        buf = _stringio.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in columns])
        return buf.getvalue()
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for r in rows:
        lines.append("| " + " | ".join(_fmt(r.get(c)) for c in columns) + " |")
    return "\n".join(lines) + "\n"


def render(obj: dict, fmt: str) -> str:
    """Render a result dict; suites become tables in csv/md."""
    if fmt == "json":
        return dumps(obj)
    if "rows" in obj and "columns" in obj:
        head = ""
        if fmt == "md":
            head = f"## {obj['suite']}: {'PASS' if obj['passed'] else 'FAIL'}\n\n"
            checks = [{"check": c["name"], "value": c["value"], "limit": c["limit"],
                       "passed": c["passed"]} for c in obj["checks"]]
            head += _table(["check", "value", "limit", "passed"], checks, "md") + "\n"
        return head + _table(obj["columns"], obj["rows"], fmt)
    flat = _flatten(obj)
    return _table(["key", "value"], [{"key": k, "value": v} for k, v in flat.items()], fmt)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_box(args) -> Behavior:
    if getattr(args, "canonical", None) and getattr(args, "input", None):
        raise UsageError("give either --canonical or --in, not both")
    if getattr(args, "canonical", None):
        b = vertex_from_label(args.canonical)
    elif getattr(args, "input", None):
        b = read_box(args.input, tol=TOL_QUANTUM)
    else:
        raise UsageError("a box is required: --canonical LABEL or --in FILE")
    vis = getattr(args, "visibility", None)
    if vis is not None:
        if not 0 <= vis <= 1:
            raise UsageError("--visibility must lie in [0, 1]")
        b = Behavior(vis * b.probs + (1 - vis) * white_noise().probs)
    return b


# -- subcommands -------------------------------------------------------------

def cmd_box(args) -> int:
    b = _load_box(args)
    _emit(dumps(box_to_dict(b)) if args.format == "json" else render(box_to_dict(b), args.format), args.out)
    return EXIT_OK


def cmd_measure(args) -> int:
    b = _load_box(args)
    rep = discord_report(b)
    out = rep.to_dict()
    out["G+2Q"] = rep.G + 2 * rep.Q
    out["svetlichny"] = {f"{k:04b}": float(v) for k, v in enumerate(svetlichny_values(b))}
    out["mermin"] = {f"{k:04b}": float(v) for k, v in enumerate(mermin_values(b))}
    out["class99"] = class99_value(b)
    out["chsh_max"] = {str(p): float(np.abs(chsh_values(b, p)).max()) for p in (12, 13, 23)}
    _emit(render(out, args.format), args.out)
    return EXIT_OK


def cmd_member(args) -> int:
    b = _load_box(args)
    vs = vertex_set(args.set, not args.no_pr_offsets)
    res = membership(b, vs, exact=args.exact)
    out = res.to_dict()
    out["n_vertices"] = len(vs)
    if not args.full and res.inside:
        out["weights"] = {k: v for k, v in out["weights"].items() if v > 1e-12}
    _emit(render(out, args.format), args.out)
    return EXIT_OK if res.inside else EXIT_NEGATIVE


def cmd_classify(args) -> int:
    b = _load_box(args)
    region = classify_region(b)
    _emit(render({"region": region.value}, args.format), args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    b = _load_box(args)
    try:
        d = three_decomposition(b)
    except NotInR as exc:
        _emit(render({"decomposable": False, "reason": str(exc)}, args.format), args.out)
        return EXIT_NEGATIVE
    out = d.to_dict()
    if not args.full:
        out.pop("residual")
    _emit(render(out, args.format), args.out)
    return EXIT_OK


_STATE_PARAMS = ("theta", "theta3", "alpha", "beta", "gamma", "p", "q", "y_pairs")


def _params_for(fn, args) -> dict:
    import inspect

    accepted = inspect.signature(fn).parameters
    return {k: getattr(args, k) for k in _STATE_PARAMS
            if k in accepted and getattr(args, k) is not None}


def cmd_quantum(args) -> int:
    if args.scenario:
        import json

        scen = scenario_from_dict(json.loads(Path(args.scenario).read_text()))
    else:
        if not args.state:
            raise UsageError("--state or --scenario is required")
        if args.state not in STATES:
            raise UsageError(f"unknown state {args.state!r}; choose from {sorted(STATES)}")
        rho = make_state(args.state, **_params_for(STATES[args.state], args))
        if rho.n_qubits == 6:
            scen = QuantumScenario(rho, sixqubit_strategy())
        else:
            if not args.settings:
                raise UsageError("--settings is required for three-qubit states")
            if args.settings not in SETTINGS:
                raise UsageError(f"unknown settings {args.settings!r}; choose from {sorted(SETTINGS)}")
            s = make_settings(args.settings, **_params_for(SETTINGS[args.settings], args))
            scen = QuantumScenario(rho, s)
    b = scen.box()
    if args.emit:
        Path(args.emit).write_text(dumps(box_to_dict(b)))
    rep = discord_report(b)
    out = {"G": rep.G, "Q": rep.Q, "class99": class99_value(b),
           "max_svetlichny": float(svetlichny_values(b).max()),
           "max_mermin": float(mermin_values(b).max())}
    if args.emit is None:
        out["box"] = box_to_dict(b)
    _emit(render(out, args.format), args.out)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)} or 'all'")
    results = [run_suite(n, grid=args.grid, tol=args.tol, seed=args.seed, jobs=args.jobs) for n in names]
    if args.format == "json":
        obj = results[0].to_dict() if len(results) == 1 else {"suites": [r.to_dict() for r in results]}
        text = dumps(obj)
    else:
        text = "\n".join(render(r.to_dict(), args.format) for r in results)
    _emit(text, args.out)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name}", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in results) else EXIT_NEGATIVE


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "md"), default="json")
    common.add_argument("--tol", type=float, default=1e-7, help="pass/fail tolerance (default 1e-7)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    boxsrc = argparse.ArgumentParser(add_help=False)
    boxsrc.add_argument("--canonical", metavar="LABEL",
                        help="det:αβγεζη, pr12:αβγε[η], sv:αβγε, mm:N, nmm:N or class8")
    boxsrc.add_argument("--in", dest="input", metavar="FILE", help="tribox-v1 JSON box")
    boxsrc.add_argument("--visibility", type=float, help="mix with white noise: v*box + (1-v)*noise")

    p = argparse.ArgumentParser(prog="tribox", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tribox {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("box", parents=[common, boxsrc], help="write a box as tribox-v1 JSON")
    s.set_defaults(func=cmd_box)

    s = sub.add_parser("measure", parents=[common, boxsrc], help="G, Q and the linear functionals")
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("member", parents=[common, boxsrc], help="membership in L, L2 or R")
    s.add_argument("--set", choices=("L", "L2", "R"), required=True)
    s.add_argument("--exact", action="store_true", help="rational arithmetic (dyadic boxes)")
    s.add_argument("--no-pr-offsets", action="store_true",
                   help="use only the 48 PR vertices whose third party outputs εk")
    s.add_argument("--full", action="store_true", help="list zero weights too")
    s.set_defaults(func=cmd_member)

    s = sub.add_parser("classify", parents=[common, boxsrc], help="region of the box")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("decompose", parents=[common, boxsrc], help="3-decomposition")
    s.add_argument("--full", action="store_true", help="include the residual table")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("quantum", parents=[common], help="Born-rule box of a state and settings")
    s.add_argument("--state", help=", ".join(sorted(STATES)))
    s.add_argument("--settings", help=", ".join(sorted(SETTINGS)))
    s.add_argument("--scenario", metavar="FILE", help='JSON {"state": {...}, "settings": {...}}')
    for name in ("theta", "theta3", "alpha", "beta", "gamma", "p", "q"):
        s.add_argument(f"--{name}", type=float)
    s.add_argument("--y-pairs", dest="y_pairs", choices=("printed", "even"))
    s.add_argument("--emit", metavar="FILE", help="also write the box as tribox-v1 JSON")
    s.set_defaults(func=cmd_quantum)

    s = sub.add_parser("reproduce", parents=[common], help="run a reproduction suite")
    s.add_argument("suite", help=", ".join(sorted(SUITES)) + " or all")
    s.add_argument("--grid", type=int, help="grid size / sample count (suite default otherwise)")
    s.set_defaults(func=cmd_reproduce)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (LPNumericalFailure, ResidualInvalid) as exc:
        print(f"tribox: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, BadParameters, TriboxError, ValueError, KeyError, OSError) as exc:
        print(f"tribox: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
