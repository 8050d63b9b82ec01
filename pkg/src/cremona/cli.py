"""``cremona`` command line.

Exit codes: 0 success, 1 usage or input error, 2 inconclusive verdict,
3 internal inconsistency (oracle mismatch), 4 verify-paper failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import List, Optional

from .algebra.grammar import ParseError
from .basepoints import base_point_tree
from .dynamics import DynamicsConfig, degree_sequence, iteration_report
from .errors import CremonaError, DegreeCapExceeded, IndeterminatePoint, NoetherMismatch
from .planemap import (
    DEFAULT_DEGREE_CAP, IDENTITY, ProjPoint, compose, contracted_curves, evaluate,
    inverse, jacobian,
)
from .registry import resolve
from .verify import run_verify

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_INCONSISTENT, EXIT_VERIFY = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _common(default) -> argparse.ArgumentParser:
    # subcommands get SUPPRESS defaults so flags given before them survive
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["table", "json", "csv", "dot"], default=default)
    p.add_argument("--seed", type=int, default=default)
    p.add_argument("--horizon", type=int, default=default)
    p.add_argument("--degree-cap", type=int, default=default)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cremona", description="Plane Cremona maps and their base points.",
                     parents=[_common(None)])
    common = _common(argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    m = sub.add_parser("map", parents=[common], help="inspect and combine maps")
    m.add_argument("action", choices=["show", "compose", "inverse", "eval", "jacobian",
                                      "contracted"])
    m.add_argument("--map", action="append", required=True,
                   help="registry name, JSON object or map text; repeat for compose")
    m.add_argument("--point", help="projective point a:b:c (for eval)")
    m.add_argument("--n", type=int, default=2)
    m.add_argument("--p", type=int, default=3)

    b = sub.add_parser("basepoints", parents=[common], help="tree of base points")
    b.add_argument("--map", required=True)
    b.add_argument("--n", type=int, default=2)
    b.add_argument("--p", type=int, default=3)

    u = sub.add_parser("mu", parents=[common], help="persistent base points and verdict")
    u.add_argument("--map", required=True)
    u.add_argument("--n", type=int, default=2)
    u.add_argument("--p", type=int, default=3)

    d = sub.add_parser("degrees", parents=[common], help="degree sequence of iterates")
    d.add_argument("--map", required=True)
    d.add_argument("--n", type=int, default=2)
    d.add_argument("--p", type=int, default=3)

    v = sub.add_parser("verify-paper", parents=[common], help="replay the acceptance checks")
    v.add_argument("--only", type=int, action="append", help="run only these check numbers")
    return parser


def _opt(args, name, default):
    value = getattr(args, name, None)
    return default if value is None else value


def _fmt(args, default="table") -> str:
    return _opt(args, "format", default)


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _map(args, spec):
    return resolve(spec, args.n, args.p)


# -- commands ---------------------------------------------------------------

def cmd_map(args) -> int:
    fmt = _fmt(args)
    maps = [_map(args, s) for s in args.map]
    cap = _opt(args, "degree_cap", DEFAULT_DEGREE_CAP)
    seed = _opt(args, "seed", 0)
    f = maps[0]
    if args.action == "show":
        out = f
    elif args.action == "compose":
        out = IDENTITY
        for g in reversed(maps):
            out = compose(g, out, cap)
    elif args.action == "inverse":
        out = inverse(f, seed=seed)
    elif args.action == "jacobian":
        J = jacobian(f)
        _emit(json.dumps({"jacobian": J.to_str()}) if fmt == "json" else J.to_str())
        return EXIT_OK
    elif args.action == "contracted":
        curves = contracted_curves(f, seed=seed)
        if fmt == "json":
            _emit(json.dumps([c.to_json() for c in curves], indent=2))
        else:
            for c in curves:
                _emit(f"{c.equation.to_str()} -> {c.image}")
        return EXIT_OK
    else:  # eval
        if not args.point:
            raise UsageError("map eval needs --point")
        p = ProjPoint.parse(args.point)
        try:
            value = str(evaluate(f, p))
        except IndeterminatePoint:
            value = "indeterminate (base point)"
        _emit(json.dumps({"point": str(p), "image": value}) if fmt == "json" else value)
        return EXIT_OK
    _emit(json.dumps(out.to_json()) if fmt == "json" else out.to_str())
    return EXIT_OK


def cmd_basepoints(args) -> int:
    f = _map(args, args.map)
    try:
        tree = base_point_tree(f, seed=_opt(args, "seed", 0))
    except NoetherMismatch as exc:
        print(f"inconsistent base-point tree: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    fmt = _fmt(args)
    if fmt == "json":
        _emit(json.dumps(tree.to_json(), indent=2, default=str))
    elif fmt == "dot":
        _emit(tree.to_dot())
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "multiplicity", "point", "proximate_to"])
        for n in tree:
            w.writerow([f"p_{n.index}", n.multiplicity, str(n.point),
                        " ".join(f"p_{a}" for a in n.proximate)])
        _emit(buf.getvalue())
    else:
        if not len(tree):
            _emit("no base points")
            return EXIT_OK
        for n in tree:
            prox = ", ".join(f"p_{a}" for a in n.proximate) or "-"
            _emit(f"p_{n.index:<3} m={n.multiplicity:<3} proximate to {prox:<12} {n.point}")
        _emit(tree.noether().summary())
    return EXIT_OK


def cmd_mu(args) -> int:
    f = _map(args, args.map)
    H = _opt(args, "horizon", 6)
    config = DynamicsConfig(degree_horizon=min(3, max(H, 1)), b_horizon=max(H, 2),
                            persistence_horizon=H,
                            degree_cap=_opt(args, "degree_cap", DEFAULT_DEGREE_CAP),
                            seed=_opt(args, "seed", 0))
    report = iteration_report(f, args.map, config)
    fmt = _fmt(args)
    if fmt == "json":
        _emit(json.dumps(report.to_json(), indent=2, default=str))
    elif fmt == "csv":
        _emit(report.to_csv())
    else:
        mu = report.mu
        bound = f"mu = {mu.upper_bound}" if mu.exact else f"mu >= {mu.lower_bound}"
        _emit(f"map: {f.to_str()}")
        _emit(f"degrees: {report.degrees}")
        _emit(f"b (tracked): {report.b_tracked}")
        _emit(f"b (direct):  {report.b_direct}")
        _emit(f"{bound} (lower {mu.lower_bound}, upper {mu.upper_bound}) at horizon {H}")
        for c in mu.classes:
            flag = {True: "persistent", False: "not persistent", None: c.note}[c.persistent]
            _emit(f"  class {c.representative} {c.members}: {flag}")
        if mu.collision is not None:
            col = mu.collision
            _emit(f"collision at k={col.k}: B = {col.B} ({col.shape})"
                  + (f"; anomaly: {col.anomaly}" if col.anomaly else ""))
        for note in mu.notes:
            _emit(f"note: {note}")
        _emit(f"verdict: {report.verdict.level}")
        for r in report.verdict.reasons:
            _emit(f"  {r}")
    return report.exit_code()


def cmd_degrees(args) -> int:
    f = _map(args, args.map)
    H = _opt(args, "horizon", 3)
    cap = _opt(args, "degree_cap", DEFAULT_DEGREE_CAP)
    degs: List[int] = []
    note = ""
    try:
        degs = degree_sequence(f, H, cap)
    except DegreeCapExceeded as exc:
        note = str(exc)
        for n in range(1, H + 1):
            try:
                degs = degree_sequence(f, n, cap)
            except DegreeCapExceeded:
                break
    fmt = _fmt(args)
    if fmt == "json":
        _emit(json.dumps({"map": args.map, "degrees": degs, "note": note}))
    elif fmt == "csv":
        _emit("k,degree\n" + "\n".join(f"{k},{d}" for k, d in enumerate(degs, 1)))
    else:
        for k, d in enumerate(degs, 1):
            _emit(f"deg f^{k} = {d}")
        if note:
            _emit(f"stopped: {note}")
    return EXIT_OK


def cmd_verify(args) -> int:
    fmt = _fmt(args)

    def progress(c):
        if fmt == "table":
            print(f"[{c.index:>2}] {c.status:<7} {c.name}", file=sys.stderr, flush=True)

    report = run_verify(seed=_opt(args, "seed", 0), horizon=args.horizon,
                        degree_cap=_opt(args, "degree_cap", DEFAULT_DEGREE_CAP),
                        only=args.only, progress=progress)
    if fmt == "json":
        _emit(json.dumps(report.to_json(), indent=2, default=str))
    else:
        _emit(report.table())
    return report.exit_code()


COMMANDS = {"map": cmd_map, "basepoints": cmd_basepoints, "mu": cmd_mu,
            "degrees": cmd_degrees, "verify-paper": cmd_verify}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CremonaError as exc:
        print(f"error ({args.command}): {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
