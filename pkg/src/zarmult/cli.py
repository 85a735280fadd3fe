"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource limit.
"""

import argparse
import json
import re
import sys
from fractions import Fraction

from . import __version__
from .corpus import names_in, run_verify
from .errors import (InternalInconsistencyError, InvalidInputError, PrecisionInsufficientError,
                     ResourceLimitError, ZarMultError)
from .fields import FieldDescriptor
from .macaulay import intersection_multiplicity_oracle
from .multiplicity import (CoverSpec, algebraic_multiplicity_cover, etale_at,
                           intersection_multiplicity, left_right_multiplicity,
                           unramified_fiber_test, zariski_multiplicity)
from .parser import parse_point, parse_polynomial, parse_rational
from .series import render_series
from .specialisation import (branch_point, is_infinitesimally_near, lift_in_cover,
                             marked_point, specialize_point, tower_specialize)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


class _Fail(Exception):
    """A calculator answered, but the answer is a verification failure."""


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _point_arg(text):
    """``x=0,y=1/2`` into an ordered list of (name, value text)."""
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in part:
            raise argparse.ArgumentTypeError(f"expected name=value, got {part!r}")
        k, v = (s.strip() for s in part.split("=", 1))
        if not re.fullmatch(r"[a-z][a-z0-9]*", k):
            raise argparse.ArgumentTypeError(f"invalid variable name {k!r}")
        out.append((k, v))
    return out


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--char", type=int, default=0, metavar="P",
                   help="field characteristic (0 for Q, a prime for F_p)")
    p.add_argument("--prec", type=_rational, default=Fraction(4), metavar="A/B",
                   help="series precision (default 4)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--seed-index", type=int, default=0, metavar="N",
                   help="start index of the deterministic shear/direction sequence")
    return p


def build_parser():
    common = _common()
    ap = argparse.ArgumentParser(prog="zarmult",
                                 description="Zariski and algebraic multiplicity calculators.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def cover_args(p):
        p.add_argument("F", help="cover polynomial, e.g. 'x^2 - y'")
        p.add_argument("--fiber", default="x", help="fiber variable (default x)")
        p.add_argument("--point", type=_point_arg, default=[],
                       help="marked point, e.g. x=0,y=0 (unlisted variables are 0)")

    p = sub.add_parser("cover", parents=[common], help="Zariski and algebraic multiplicity")
    cover_args(p)
    p = sub.add_parser("branches", parents=[common], help="Puiseux branches over a cover")
    cover_args(p)
    p = sub.add_parser("fiber-test", parents=[common], help="generic vs special fiber count")
    cover_args(p)

    p = sub.add_parser("intersect", parents=[common], help="intersection multiplicity")
    p.add_argument("p1")
    p.add_argument("p2")
    p.add_argument("--point", type=_point_arg, default=[], help="e.g. x=0,y=0")
    p.add_argument("--vars", default="x,y", help="the two plane coordinates (default x,y)")
    p.add_argument("--oracle", action="store_true", help="cross-check with the local length")

    p = sub.add_parser("specialize", parents=[common], help="specialise a projective point")
    p.add_argument("point", help="e.g. '(t1*t2^(-1) : 1)'")
    p.add_argument("--level", type=int, default=None, help="target tower level (default 0)")
    p.add_argument("--near", default=None, help="base point to test infinitesimal nearness")

    p = sub.add_parser("etale", parents=[common], help="Jacobian test of a square system")
    p.add_argument("polys", nargs="+", help="one polynomial per coordinate function")
    p.add_argument("--point", type=_point_arg, required=True, help="e.g. x=1")

    p = sub.add_parser("leftright", parents=[common], help="Left or Right multiplicity")
    p.add_argument("F")
    p.add_argument("--side", choices=["left", "right"], type=str.lower, required=True)
    p.add_argument("--fiber", default="x")
    p.add_argument("--params", default="l1,l2", help="the two parameters (default l1,l2)")
    p.add_argument("--point", type=_point_arg, default=[], help="e.g. x=0,l1=0,l2=0")

    p = sub.add_parser("verify", parents=[common], help="run a regression corpus")
    p.add_argument("corpus", nargs="?", default=None, help="corpus JSON (default: bundled)")
    p.add_argument("--oracle", action="store_true",
                   help="also run the local-length oracle on intersection entries")
    return ap


def _field(args):
    return FieldDescriptor(args.char).domain


def _pt(pairs, dom, names=None):
    vals = {k: parse_rational(v, dom) for k, v in pairs}
    if names is not None:
        unknown = set(vals) - set(names)
        if unknown:
            raise InvalidInputError(f"point names unknown variables {sorted(unknown)}")
    return vals


def _cover(args):
    dom = _field(args)
    names = names_in(args.F)
    if args.fiber not in names:
        names = sorted(set(names) | {args.fiber})
    F = parse_polynomial(args.F, names, dom)
    base = [v for v in names if v != args.fiber]
    if not base:
        raise InvalidInputError("the cover needs at least one base variable")
    pt = _pt(args.point, dom, names)
    cover = CoverSpec(F, args.fiber, base, [pt.get(v, dom.zero) for v in base],
                      pt.get(args.fiber, dom.zero))
    inputs = {"F": args.F, "fiber": args.fiber, "base": base,
              "point": {k: str(v) for k, v in sorted(
                  {**{v: dom.zero for v in names}, **pt}.items())}}
    return cover, inputs


def cmd_cover(args):
    cover, inputs = _cover(args)
    rep = zariski_multiplicity(cover, args.seed_index)
    flags = list(rep.flags)
    result = rep.as_dict()
    try:
        oracle = algebraic_multiplicity_cover(cover)
    except ResourceLimitError:
        oracle = None
        flags.append("oracle-skipped")
    result["algebraicOracle"] = oracle
    if oracle is not None and oracle != rep.algebraic:
        raise InternalInconsistencyError(
            f"algebraic multiplicity {rep.algebraic} but local length {oracle}")
    text = [f"zariski multiplicity e = {rep.zariski}",
            f"inseparable exponent n = {rep.insep_exponent}",
            f"algebraic multiplicity d = {rep.algebraic}",
            f"local length = {oracle if oracle is not None else 'skipped'}"]
    return inputs, result, flags, text


def cmd_branches(args):
    cover, inputs = _cover(args)
    branches, direction, n = lift_in_cover(cover, args.prec, args.seed_index)
    base = marked_point(cover)
    out, text = [], []
    for b in branches:
        if b.placeholder:
            out.append({"series": None, "ramification": None, "extensionUsed": True,
                        "notice": b.notice, "near": None})
            text.append(f"(placeholder) {b.notice}")
            continue
        near = is_infinitesimally_near(branch_point(cover, b, direction), base) \
            if not b.extension_used else None
        ext = b.series.domain
        entry = {"series": render_series(b.series), "ramification": b.ramification,
                 "extensionUsed": b.extension_used,
                 "precision": str(b.precision) if b.precision != float("inf") else "inf",
                 "notice": b.notice, "near": near}
        if b.extension_used:
            entry["extension"] = f"{ext.name} with minimal polynomial {ext.minpoly_str()}"
        out.append(entry)
        text.append(f"{args.fiber} = {render_series(b.series)}"
                    + (f"   [{entry['extension']}]" if b.extension_used else ""))
    flags = [f"inseparable:{n}"] if n else []
    if any(b.placeholder for b in branches):
        flags.append("count-only-placeholders")
    result = {"count": len(branches), "direction": [str(c) for c in direction],
              "branches": out}
    text.insert(0, f"{len(branches)} branch(es) along direction "
                   f"({', '.join(str(c) for c in direction)})")
    return inputs, result, flags, text


def cmd_fiber_test(args):
    cover, inputs = _cover(args)
    res = unramified_fiber_test(cover)
    flags = [f"inseparable:{res.insep_exponent}"] if res.insep_exponent else []
    text = [f"generic fiber count = {res.generic_count}",
            f"special fiber count = {res.special_count}",
            f"unramified = {str(res.unramified).lower()}"]
    return inputs, res.as_dict(), flags, text


def cmd_intersect(args):
    dom = _field(args)
    vs = tuple(v.strip() for v in args.vars.split(","))
    if len(vs) != 2:
        raise InvalidInputError("--vars takes exactly two names")
    p1 = parse_polynomial(args.p1, vs, dom)
    p2 = parse_polynomial(args.p2, vs, dom)
    pt = _pt(args.point, dom, vs)
    point = [pt.get(v, dom.zero) for v in vs]
    m = intersection_multiplicity(p1, p2, point, vs, args.seed_index)
    result = {"intersection": m}
    text = [f"intersection multiplicity = {m}"]
    if args.oracle:
        o = intersection_multiplicity_oracle(p1, p2, point, vs)
        result["oracle"] = o
        text.append(f"local length oracle = {o}")
        if o != m:
            raise InternalInconsistencyError(f"resultant gives {m}, local length gives {o}")
    inputs = {"p1": args.p1, "p2": args.p2, "point": [str(c) for c in point],
              "variables": list(vs)}
    return inputs, result, [], text


def cmd_specialize(args):
    dom = _field(args)
    p = parse_point(args.point, dom)
    level = 0 if args.level is None else args.level
    q = tower_specialize(p, level)
    result = {"level": p.level, "specialized": str(q), "targetLevel": level,
              "oneStep": str(specialize_point(p)) if p.level else str(p.normalized())}
    text = [f"{q}"]
    if args.near is not None:
        near = is_infinitesimally_near(p, parse_point(args.near, dom))
        result["near"] = near
        text.append(f"infinitesimally near {args.near}: {str(near).lower()}")
    return {"point": args.point, "near": args.near}, result, [], text


def cmd_etale(args):
    dom = _field(args)
    names = sorted(set(names_in(*args.polys)) | {k for k, _ in args.point})
    polys = [parse_polynomial(t, names, dom) for t in args.polys]
    pt = _pt(args.point, dom, names)
    ok = etale_at(polys, [pt.get(v, dom.zero) for v in names], names)
    return ({"polys": args.polys, "point": {k: str(v) for k, v in pt.items()}},
            {"etale": ok}, [], [f"etale = {str(ok).lower()}"])


def cmd_leftright(args):
    dom = _field(args)
    params = tuple(v.strip() for v in args.params.split(","))
    if len(params) != 2:
        raise InvalidInputError("--params takes exactly two names")
    names = sorted(set(names_in(args.F)) | {args.fiber, *params})
    F = parse_polynomial(args.F, names, dom)
    pt = _pt(args.point, dom, names)
    point = [pt.get(v, dom.zero) for v in (args.fiber, *params)]
    m = left_right_multiplicity(F, point, args.side, args.fiber, params)
    inputs = {"F": args.F, "side": args.side, "params": list(params),
              "point": [str(c) for c in point]}
    return inputs, {"multiplicity": m}, [], [f"{args.side.capitalize()} multiplicity = {m}"]


def cmd_verify(args):
    rep = run_verify(args.corpus, oracle=args.oracle)
    text = []
    for r in rep.results:
        status = "PASS" if r.passed else "FAIL"
        line = f"[{status}] #{r.index} {r.name} ({r.kind}; {r.law}) {r.seconds * 1000:.1f} ms"
        if r.error:
            line += f"  error: {r.error}"
        for m in r.mismatches:
            line += f"  {m['field']}: expected {m['expected']}, computed {m['computed']}"
        text.append(line)
    for w in rep.warnings:
        text.append(f"warning: {w}")
    text.append(f"{rep.passed} passed, {rep.failed} failed")
    result = rep.as_dict()
    if rep.exit_status:
        raise _Fail((result, text))
    return {"corpus": args.corpus or "<bundled>", "oracle": args.oracle}, result, \
        list(rep.warnings), text


COMMANDS = {
    "cover": cmd_cover, "branches": cmd_branches, "fiber-test": cmd_fiber_test,
    "intersect": cmd_intersect, "specialize": cmd_specialize, "etale": cmd_etale,
    "leftright": cmd_leftright, "verify": cmd_verify,
}


def _exit_code(err):
    if isinstance(err, InternalInconsistencyError):
        return EXIT_FAIL
    if isinstance(err, (ResourceLimitError, PrecisionInsufficientError)):
        return EXIT_LIMIT
    return EXIT_INPUT


def _emit(args, inputs, result, flags, errors, text, out, err):
    if args.json:
        doc = {"command": args.command, "inputs": inputs, "result": result,
               "flags": flags, "errors": errors}
        out.write(json.dumps(doc, indent=2, sort_keys=False, default=str) + "\n")
        return
    for line in text:
        out.write(line + "\n")
    for f in flags:
        out.write(f"flag: {f}\n")
    for e in errors:
        err.write(f"error: {e['type']}: {e['message']}\n")


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    handler = COMMANDS[args.command]
    try:
        inputs, result, flags, text = handler(args)
        code = EXIT_OK
        errors = []
    except _Fail as fail:
        result, text = fail.args[0]
        inputs, flags, errors, code = {"corpus": getattr(args, "corpus", None)}, [], [], EXIT_FAIL
    except ZarMultError as exc:
        inputs, result, flags, text = {"argv": list(argv) if argv else sys.argv[1:]}, None, [], []
        errors = [{"type": type(exc).__name__, "message": str(exc)}]
        code = _exit_code(exc)
    _emit(args, inputs, result, flags, errors, text, out, err)
    return code


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
