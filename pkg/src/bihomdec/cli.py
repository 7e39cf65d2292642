"""Command-line front end.

Subcommands mirror the library: ``sylvester analyze|sample``,
``structure generate|analyze|verify-ee7``, ``tangent rank|decompose`` and
``verify <suite>``.  All file payloads use the JSON schemas of
:mod:`bihomdec.serialize`.  Exit codes: 0 success, 1 a verification or suite
failure, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import serialize, suites, sylvester
from .errors import BihomError, ExhaustionError, InfeasibleInstanceError
from .forms import Shape
from .instances import generate_instance
from .linalg import format_rational
from .structure import analyze_pair, extend_witness, verify_ee7
from .tangential import (dependency_set, is_degenerate, reducible_decompose,
                         tangential_decompose, tangential_rank)


class CliInputError(Exception):
    pass


def _parse_shape(text) -> Shape:
    try:
        n1, n2, d1, d2 = (int(x) for x in text.split(","))
        return Shape(n1, n2, d1, d2)
    except (ValueError, BihomError) as exc:
        raise CliInputError(f"bad --shape {text!r}: {exc}")


def _load(path):
    try:
        return serialize.load_json(path)
    except FileNotFoundError:
        raise CliInputError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise CliInputError(
            f"malformed JSON in {path} at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}")


def _emit(obj, out):
    text = json.dumps(obj, sort_keys=True, indent=1)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _witness_obj(witness):
    return [{"w": format_rational(w),
             "point": [format_rational(a), format_rational(b)]}
            for w, (a, b) in witness]


def _cmd_sylvester(args):
    obj = _load(args.infile)
    try:
        q = serialize.binaryform_from_obj(obj)
    except (KeyError, ValueError, BihomError) as exc:
        raise CliInputError(f"bad binary form payload: {exc}")
    if args.cmd == "analyze":
        if args.backend == "numeric":
            res, points, weights, residual = sylvester.analyze_numeric(
                q, args.tol)
            out = {"d": res.degree, "border_rank": res.border_rank,
                   "rank": res.rank, "backend": "numeric"}
            if points is None:
                out["witness"] = _witness_obj(res.witness)
                out["residual"] = 0.0
            else:
                out["witness_numeric"] = [
                    {"w": [w.real, w.imag],
                     "point": None if z is None else [z.real, z.imag]}
                    for w, z in zip(weights, points)]
                out["residual"] = residual
            _emit(out, args.out)
            return 0
        res = sylvester.analyze(q)
        _emit({"d": res.degree, "border_rank": res.border_rank,
               "rank": res.rank, "backend": "exact",
               "kernel_form": [format_rational(c)
                               for c in res.kernel_form.coeffs],
               "witness": _witness_obj(res.witness)}, args.out)
        return 0
    # sample
    try:
        found = sylvester.sample_solutions(q, args.count, args.seed)
        complete = True
    except ExhaustionError as exc:
        found = exc.found
        complete = False
    _emit({"requested": args.count, "found": len(found), "complete": complete,
           "witnesses": [_witness_obj(w) for w in found]}, args.out)
    return 0 if complete else 1


def _cmd_structure(args):
    if args.cmd == "generate":
        shape = _parse_shape(args.shape)
        try:
            inst = generate_instance(shape, args.b, args.e, args.seed,
                                     kind=args.kind)
        except InfeasibleInstanceError as exc:
            raise CliInputError(str(exc))
        _emit(serialize.instance_to_obj(inst), args.out)
        return 0
    inst = serialize.instance_from_obj(_load(args.infile))
    if args.cmd == "analyze":
        split = analyze_pair(inst.p, inst.S, inst.A)
        _emit({
            "kind": split.line.kind,
            "base": [format_rational(c) for c in split.line.base],
            "line": {"a": [format_rational(c) for c in split.line.line.a],
                     "b": [format_rational(c) for c in split.line.line.b]},
            "E": [{"w": format_rational(w),
                   "point": serialize.pointpair_to_obj(pt)}
                  for w, pt in split.e_terms],
            "b": split.b,
            "residual_rank": split.residual_rank,
            "q_form": serialize.binaryform_to_obj(split.q_form),
        }, args.out)
        return 0
    # verify-ee7
    split = analyze_pair(inst.p, inst.S, inst.A)
    avoid = [frozenset((Fraction(x), Fraction(1)) for x in inst.meta.m1_roots),
             frozenset((Fraction(x), Fraction(1)) for x in inst.meta.m2_roots)]
    try:
        extra = sylvester.sample_solutions(split.q_form, args.extra,
                                           seed=args.seed, avoid=avoid)
    except ExhaustionError as exc:
        extra = exc.found
    wits = [inst.S, inst.A] + [extend_witness(split, m) for m in extra]
    report = verify_ee7(inst.p, wits)
    _emit({"witnesses": len(wits),
           "pairs": [{"pair": list(pair), "agrees": sig == report.agreed_signature()}
                     for pair, sig in report.pair_signatures],
           "passed": report.passed}, args.out)
    return 0 if report.passed else 1


def _cmd_tangent(args):
    try:
        jet = serialize.jet_from_obj(_load(args.jet))
    except (KeyError, ValueError, BihomError) as exc:
        raise CliInputError(f"bad jet payload: {exc}")
    if args.cmd == "rank":
        _emit({"rank": tangential_rank(jet),
               "dependency_set": sorted(dependency_set(jet)),
               "degenerate": is_degenerate(jet)}, args.out)
        return 0
    dec = reducible_decompose(jet) if args.reducible else tangential_decompose(jet)
    _emit({
        "rank": tangential_rank(jet),
        "structure": dec.tag,
        "terms": [{"w": format_rational(w),
                   "point": [[format_rational(c) for c in coords]
                             for coords in pt]}
                  for w, pt in dec.terms],
    }, args.out)
    return 0


def _cmd_verify(args):
    shape = _parse_shape(args.shape) if args.shape else None
    report = suites.run_suite(args.suite, shape, args.trials, args.seed,
                              args.coord_bound)
    _emit(report.to_obj(), args.out)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bihomdec")
    sub = p.add_subparsers(dest="group", required=True)

    syl = sub.add_parser("sylvester", help="binary-form rank and decompositions")
    syl_sub = syl.add_subparsers(dest="cmd", required=True)
    for name in ("analyze", "sample"):
        sp = syl_sub.add_parser(name)
        sp.add_argument("--in", dest="infile", required=True)
        sp.add_argument("--out")
        if name == "analyze":
            sp.add_argument("--backend", choices=("exact", "numeric"),
                            default="exact")
            sp.add_argument("--tol", type=float, default=1e-9)
        else:
            sp.add_argument("--count", type=int, required=True)
            sp.add_argument("--seed", type=int, default=0)
    syl.set_defaults(func=_cmd_sylvester)

    st = sub.add_parser("structure", help="two-witness structure operations")
    st_sub = st.add_subparsers(dest="cmd", required=True)
    gen = st_sub.add_parser("generate")
    gen.add_argument("--shape", required=True)
    gen.add_argument("--b", type=int, required=True)
    gen.add_argument("--e", type=int, default=0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--kind", choices=("beta", "alpha"), default="beta")
    gen.add_argument("--out")
    ana = st_sub.add_parser("analyze")
    ana.add_argument("--in", dest="infile", required=True)
    ana.add_argument("--out")
    ver = st_sub.add_parser("verify-ee7")
    ver.add_argument("--in", dest="infile", required=True)
    ver.add_argument("--extra", type=int, default=2)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--out")
    st.set_defaults(func=_cmd_structure)

    tg = sub.add_parser("tangent", help="tangent-vector ranks and decompositions")
    tg_sub = tg.add_subparsers(dest="cmd", required=True)
    for name in ("rank", "decompose"):
        tp = tg_sub.add_parser(name)
        tp.add_argument("--jet", required=True)
        tp.add_argument("--out")
        if name == "decompose":
            tp.add_argument("--reducible", action="store_true")
    tg.set_defaults(func=_cmd_tangent)

    vf = sub.add_parser("verify", help="seeded verification suites")
    vf.add_argument("suite", choices=sorted(suites.SUITES))
    vf.add_argument("--shape")
    vf.add_argument("--trials", type=int, default=100)
    vf.add_argument("--seed", type=int, default=0)
    vf.add_argument("--coord-bound", dest="coord_bound", type=int, default=10)
    vf.add_argument("--out")
    vf.set_defaults(func=_cmd_verify)
    return p


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BihomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
