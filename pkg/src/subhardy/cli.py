"""Command-line front end.

    subhardy analyze --space paper-alternating --dim 32 --nmax 8
    subhardy analyze --input space.json --out report.json
    subhardy catalog list
    subhardy catalog show paper-n3 --dim 4
    subhardy verify [--entry NAME] [--json]

Exit codes: 0 all checks pass, 1 usage or input error, 2 a mathematical
verdict is false.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import catalog
from .core import DiagonalSpace
from .errors import SubHardyError
from .hypotheses import INE1_DELTA, TOL
from .pipeline import EXIT_INPUT, EXIT_OK, EXIT_VERDICT, analyze, verify_entry
from .report import analysis_report, dumps, load_space, to_jsonable
from .structure import SEED


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _summary(a):
    h = a.hypotheses
    lines = [
        f"space: {a.name or '<input>'} ({a.kind}, D={a.ambient_dim}, dim M={a.dim}, n_max={a.n_max})",
        f"  condition (i):  {_yn(h.cond_i.holds)}  delta_max={h.cond_i.delta_max:.17g}  sup={h.cond_i.sup_ratio:.17g}",
        f"  condition (ii): {_yn(h.cond_ii.holds)}  max residual={h.cond_ii.max_residual:.3e}",
        f"  Ine1:           {_yn(h.ine1.holds)}  delta_max={h.ine1.delta_max:.17g}",
        f"  Shimorin 1:     {_yn(h.shimorin_1.holds)}  lhs={h.shimorin_1.lhs:.17g}  rhs={h.shimorin_1.rhs:.17g}",
        f"  Shimorin 2:     {_yn(h.shimorin_2.holds)}  lhs={h.shimorin_2.lhs:.17g}  rhs={h.shimorin_2.rhs:.17g}",
    ]
    s = a.structure
    if s is None:
        lines.append("  structure: skipped" + (f" ({a.structure_error})" if a.structure_error else ""))
    else:
        lines += [
            f"  wandering dim: {s.wandering_dim}   vanishing order: {s.vanishing_order}",
            f"  decomposition residual (n={s.decomposition_depth}): {s.decomposition_residual:.3e}",
            f"  contraction margin: {s.contraction_margin:.3e}   random trials: {a.contraction.margin:.3e}",
            f"  closedness: b H^2 closed={_yn(s.closedness.closed)}  Ine1={_yn(s.closedness.ine1_holds)}"
            f"  c_low={s.closedness.c_low:.17g}",
        ]
    lines.append(f"exit code: {a.exit_code}")
    return "\n".join(lines)


def _yn(flag):
    return "holds" if flag else "FAILS"


def cmd_analyze(args):
    if args.input:
        space, name = load_space(args.input), None
    else:
        space, name = catalog.builtin(args.space, args.dim), args.space
    a = analyze(
        space,
        n_max=args.nmax,
        delta=args.delta,
        ine1_delta=args.ine1_delta,
        tol=args.tol,
        seed=args.seed,
        name=name,
    )
    text = dumps(analysis_report(a)) + "\n"
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(_summary(a))
    else:
        sys.stdout.write(text)
        print(_summary(a), file=sys.stderr)
    return a.exit_code


def cmd_catalog(args):
    if args.action == "list":
        for name in catalog.NAMES:
            e = catalog.ENTRIES[name]
            print(f"{name:18s} {e.kind:8s} {e.provenance}")
        return EXIT_OK
    if not args.name:
        raise SubHardyError("catalog show needs an entry name")
    e = catalog.entry(args.name)
    space = catalog.builtin(args.name, args.dim)
    print(f"{e.name} ({e.kind}): {e.provenance}")
    for k, v in e.params.items():
        print(f"  {k} = {v}")
    if isinstance(space, DiagonalSpace):
        print("beta = (" + ", ".join("%.17g" % b for b in space.beta) + ")")
    else:
        print(f"ambient D = {space.ambient_dim}, dim M = {space.dim}")
        with np.printoptions(precision=6, suppress=True, linewidth=120):
            print("basis (columns):")
            print(space.basis)
            print("gram:")
            print(space.gram)
    return EXIT_OK


def cmd_verify(args):
    names = [args.entry] if args.entry else list(catalog.NAMES)
    rows, all_ok = [], True
    for name in names:
        catalog.entry(name)
        a, results = verify_entry(name)
        failed = [(f, got) for f, ok, got in results if not ok]
        all_ok &= not failed
        rows.append(
            {
                "entry": name,
                "passed": not failed,
                "facts": len(results),
                "failures": [
                    {"path": f.path, "check": f.check, "expected": to_jsonable(f.value),
                     "observed": to_jsonable(got)}
                    for f, got in failed
                ],
            }
        )
    if args.json:
        print(dumps({"schema": 1, "all_passed": all_ok, "entries": rows}))
    else:
        print(f"{'entry':18s} {'facts':>5s}  result")
        for r in rows:
            print(f"{r['entry']:18s} {r['facts']:5d}  {'PASS' if r['passed'] else 'FAIL'}")
            for f in r["failures"]:
                print(f"    {f['path']} {f['check']} {f['expected']!r}: observed {f['observed']!r}")
    return EXIT_OK if all_ok else EXIT_VERDICT


def build_parser():
    p = _Parser(prog="subhardy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="check hypotheses and recover the structure of one space")
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("--space", choices=catalog.NAMES, help="catalog entry")
    src.add_argument("--input", help="space description file (JSON)")
    a.add_argument("--dim", type=int, default=64, help="ambient dimension for catalog entries")
    a.add_argument("--nmax", type=int, default=8, help="shift budget for (ii) and Ine1")
    a.add_argument("--tol", type=float, default=TOL)
    a.add_argument("--delta", type=float, default=None, help="required delta for condition (i)")
    a.add_argument("--ine1-delta", type=float, default=INE1_DELTA, help="lower floor for Ine1")
    a.add_argument("--seed", type=lambda s: int(s, 0), default=SEED)
    a.add_argument("--out", default=None, help="report file (default: stdout)")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("catalog", help="list or show catalog entries")
    c.add_argument("action", choices=["list", "show"])
    c.add_argument("name", nargs="?")
    c.add_argument("--dim", type=int, default=None)
    c.set_defaults(func=cmd_catalog)

    v = sub.add_parser("verify", help="run every catalog entry's expected facts")
    v.add_argument("--entry", default=None)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SubHardyError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
