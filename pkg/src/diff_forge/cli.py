"""``diff-forge`` command line.

Exit status: 0 when the object verifies (or the search finds a witness), 1 on
a verification failure or an unsuccessful search, 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import io as dio
from .algebra import FieldError, field_of_order
from .families import (affine_plane, compose_design, double, trivial_design, verify_design,
                       verify_df, verify_sdf)
from .lifting import LiftError, catalog, catalog_entry, lift, sdf_catalog
from .paley import VARIANTS, HALF_SECOND, SchemeError, build_scheme, paley_sdf, q_bound, symbolic_dh
from .search import (FOUND, greedy_lift_search, lift_input_for, make_problem, problem_from_json,
                     scan_range, search)

OK, FAIL, BAD_INPUT = 0, 1, 2


class _Output:
    def __init__(self, human: bool, path: str | None = None):
        self.human = human
        self.path = path

    def open(self):
        return open(self.path, "w") if self.path and self.path != "-" else sys.stdout

    def emit(self, obj):
        fh = self.open()
        try:
            if self.human and isinstance(obj, dict):
                for key, val in obj.items():
                    fh.write(f"{key:>18}  {val if not isinstance(val, (dict, list)) else json.dumps(val)}\n")
            else:
                dio.dump_json(obj, fh)
        finally:
            if fh is not sys.stdout:
                fh.close()


def _verdict_exit(out: _Output, verdict, extra: dict | None = None) -> int:
    report = verdict.to_json()
    if extra:
        report.update(extra)
    out.emit(report)
    return OK if verdict.ok else FAIL


# ------------------------------------------------------------- subcommands

def cmd_verify_sdf(args, out):
    sdf = dio.sdf_from_json(dio.load_json(args.input))
    return _verdict_exit(out, verify_sdf(sdf))


def cmd_verify_df(args, out):
    df = dio.df_from_json(dio.load_json(args.input))
    return _verdict_exit(out, verify_df(df), {"params": list(df.params)})


def cmd_verify_design(args, out):
    design = dio.read_design(args.input)
    return _verdict_exit(out, verify_design(design), {"params": list(design.params)})


def cmd_lift(args, out):
    inp = dio.lift_input_from_json(dio.load_json(args.input))
    try:
        df = lift(inp)
    except LiftError as exc:
        out.emit({"ok": False, "error": str(exc)})
        return FAIL
    verdict = verify_df(df)
    if not verdict.ok:
        out.emit({"ok": False, "verdict": verdict.to_json()})
        return FAIL
    out.emit(dio.df_to_json(df))
    return OK


def _problem(args):
    if args.problem:
        return problem_from_json(dio.load_json(args.problem))
    if args.p is None or args.q is None:
        raise dio.SchemaError("argv", "search needs --problem FILE or --p and --q")
    return make_problem(args.p, args.variant, args.q, lam=args.lam, d=args.d)


def cmd_search(args, out):
    problem = _problem(args)
    result = greedy_lift_search(problem) if args.greedy else search(problem, budget=args.budget)
    if result.status == FOUND and args.emit != "result":
        inp = lift_input_for(problem, result.assignment)
        out.emit(dio.lift_input_to_json(inp) if args.emit == "lift-input" else dio.df_to_json(lift(inp)))
    else:
        out.emit(result.to_json())
    return OK if result.status == FOUND else FAIL


def cmd_scan(args, out):
    records = scan_range(args.p, args.variant, args.lam, args.q_from, args.q_to,
                         budget=args.budget, prime_powers=args.prime_powers, jobs=args.jobs)
    fh = out.open()
    try:
        if out.human:
            fh.write(f"{'q':>8} {'status':<16} {'nodes':>10} {'seconds':>9}  witness\n")
        for rec in records:
            if out.human:
                fh.write(f"{rec['q']:>8} {rec['status']:<16} {rec['nodes']:>10} {rec['seconds']:>9.3f}  "
                         f"{json.dumps(rec['witness']) if rec['witness'] else '-'}\n")
            else:
                fh.write(json.dumps(rec) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return OK


def cmd_bound(args, out):
    out.emit(q_bound(args.d, args.m).to_json())
    return OK


def cmd_paley(args, out):
    if args.emit == "sdf":
        sdf = paley_sdf(args.p, "second" if args.variant == HALF_SECOND else "first")
        out.emit(dio.sdf_to_json(sdf))
        return OK
    scheme = build_scheme(args.p, args.variant)
    if args.emit == "template":
        out.emit({"p": scheme.p, "variant": scheme.variant, "f": [scheme.field.encode(x) for x in scheme.f],
                  "phi": scheme.template_strings()})
    else:
        out.emit(symbolic_dh(scheme).to_json())
    return OK


def _ingredient(spec: str):
    kind, _, arg = spec.partition(":")
    if kind == "affine" and arg:
        return affine_plane(field_of_order(int(arg)))
    if kind == "trivial" and arg:
        n, _, lam = arg.partition(",")
        return trivial_design(int(n), int(lam or 1))
    return dio.read_design(spec)


def cmd_compose(args, out):
    df = dio.df_from_json(dio.load_json(args.df))
    ingredient = _ingredient(args.ingredient)
    design = compose_design(df, ingredient, args.variant)
    verdict = verify_design(design)
    report = verdict.to_json()
    report["params"] = list(design.params)
    if args.out:
        with open(args.out, "w") as fh:
            if args.jsonl:
                dio.write_design_jsonl(design, fh)
            else:
                dio.dump_json(dio.design_to_json(design), fh)
        _Output(out.human).emit(report)
    else:
        if args.jsonl:
            dio.write_design_jsonl(design, sys.stdout)
        else:
            dio.dump_json(dio.design_to_json(design))
        print(json.dumps(report), file=sys.stderr)
    return OK if verdict.ok else FAIL


def cmd_catalog(args, out):
    sdfs = {e.tag: e for e in sdf_catalog()}
    if args.lemma is None:
        rows = [{"tag": e.tag, "name": e.name, "kind": "sdf", "k": e.k, "mu": e.mu} for e in sdfs.values()]
        rows += [{"tag": c.tag, "name": c.name, "kind": "lift", "params": list(c.params)} for c in catalog()]
        fh = out.open()
        for row in rows:
            fh.write((f"{row['tag']:<12} {row['name']:<10} {row['kind']}" if out.human else json.dumps(row)) + "\n")
        return OK
    tag = args.lemma.removeprefix("lemma-")
    sdf_hits = [e for t, e in sdfs.items() if t == tag or t.startswith(tag + "-")]
    if sdf_hits:
        if args.emit not in (None, "sdf"):
            raise dio.SchemaError("--emit", f"lemma {tag} is an SDF entry")
        out.emit(dio.sdf_to_json(sdf_hits[0].sdf()))
        return OK
    try:
        entry = catalog_entry(tag)
    except KeyError as exc:
        raise dio.SchemaError("--lemma", str(exc.args[0])) from None
    emit = args.emit or "df"
    if emit == "lift-input":
        out.emit(dio.lift_input_to_json(entry.lift_input))
    elif emit == "sdf":
        out.emit(dio.sdf_to_json(entry.lift_input.sdf()))
    else:
        df = entry.lift()
        if args.times > 1:
            df = double(df, args.times)
        out.emit(dio.df_to_json(df))
    return OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true", help="tabular output instead of JSON")
    common.add_argument("-o", "--output", help="write to a file instead of stdout")

    ap = argparse.ArgumentParser(prog="diff-forge", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn, what in [("verify-sdf", cmd_verify_sdf, "SDF"), ("verify-df", cmd_verify_df, "DF"),
                           ("verify-design", cmd_verify_design, "design (JSON or JSON Lines)"),
                           ("lift", cmd_lift, "lift input")]:
        p = sub.add_parser(name, parents=[common], help=f"read a {what} file ('-' for stdin)")
        p.add_argument("input", nargs="?", default="-")
        p.set_defaults(func=fn)

    def scheme_args(p):
        p.add_argument("--p", type=int)
        p.add_argument("--variant", choices=VARIANTS, default="quarter")
        p.add_argument("--lambda", dest="lam", type=int)
        p.add_argument("--budget", type=int, help="node budget")

    p = sub.add_parser("search", parents=[common], help="search symbol values for a Paley lift")
    scheme_args(p)
    p.add_argument("--q", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--problem", help="problem JSON file")
    p.add_argument("--greedy", action="store_true", help="use the condition-table strategy")
    p.add_argument("--emit", choices=["result", "df", "lift-input"], default="result")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("scan", parents=[common], help="search every admissible q in a range")
    scheme_args(p)
    p.add_argument("--from", dest="q_from", type=int, required=True)
    p.add_argument("--to", dest="q_to", type=int, required=True)
    p.add_argument("--prime-powers", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bound", parents=[common], help="the cyclotomic existence bound Q(d, m)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("paley", parents=[common], help="Paley SDFs, phi templates and D_h tables")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--variant", choices=VARIANTS, default="quarter")
    p.add_argument("--emit", choices=["table", "sdf", "template"], default="table")
    p.set_defaults(func=cmd_paley)

    p = sub.add_parser("compose", parents=[common], help="fill the cosets of a DF with a design")
    p.add_argument("--df", required=True)
    p.add_argument("--ingredient", required=True,
                   help="design file, or affine:Q / trivial:N[,LAMBDA]")
    p.add_argument("--variant", type=int, choices=[1, 2], default=1)
    p.add_argument("--out", help="design output file; the verdict then goes to stdout")
    p.add_argument("--jsonl", action="store_true", help="write the design as JSON Lines")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("catalog", parents=[common], help="list or emit the built-in constructions")
    p.add_argument("--lemma", help="entry tag, e.g. 2.3 or 2.16-p81")
    p.add_argument("--emit", choices=["df", "sdf", "lift-input"])
    p.add_argument("--times", type=int, default=1, help="repeat the lifted DF's blocks")
    p.set_defaults(func=cmd_catalog)
    return ap


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    out = _Output(args.human, args.output)
    try:
        return args.func(args, out)
    except (dio.SchemaError, FieldError, SchemeError, ValueError, OSError) as exc:
        print(json.dumps({"error": str(exc), "path": getattr(exc, "path", None)}), file=sys.stderr)
        return BAD_INPUT


def main() -> None:
    sys.exit(run())
