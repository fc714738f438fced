"""Command-line entry point: classify, blowup, rr, elephants, can-weights, verify-paper."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import __version__
from .blowup import FAIL, BlowupError, WeightedGerm, blowup_report, check_cAn_weights, enumerate_cAn_weights
from .curvecalc import InvariantViolation
from .duval import NotDuVal, Undecided, UndecidedError, classify_cdv, classify_duval
from .elephant import ElephantError, enumerate_typeI_candidates, enumerate_typeII_III_candidates, surviving_pairs
from .poly import DEFAULT_JET_BOUND, ParseError, format_polynomial, parse
from .quotient import Basket, Unrecognized
from .rr import ClassificationError, RRError, chi_Q, context_from_basket, contraction_data, e3_from_pins

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_UNDECIDED, EXIT_UNRECOGNIZED, EXIT_INTERNAL = 0, 1, 2, 3, 4, 5


class UsageError(ValueError):
    pass


def _fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def load_germ_spec(args) -> dict:
    """Germ input from a JSON file (or '-') or from --equation/--variables/--weights."""
    if args.germ:
        try:
            if args.germ == "-":
                data = json.load(sys.stdin)
            else:
                with open(args.germ, encoding="utf-8") as fh:
                    data = json.load(fh)
        except FileNotFoundError as exc:
            raise UsageError(f"germ file not found: {args.germ}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"invalid JSON in {args.germ}: {exc}") from exc
    else:
        if not args.equation:
            raise UsageError("give a germ file or --equation")
        data = {"equation": args.equation}
        if args.variables:
            data["variables"] = [v.strip() for v in args.variables.split(",")]
        if getattr(args, "weights", None):
            data["weights"] = [int(w) for w in args.weights.split(",")]
    if "equation" not in data:
        raise UsageError("germ JSON needs an 'equation' field")
    poly = parse(data["equation"], data.get("variables"))
    data["polynomial"] = poly
    if "weights" in data and len(data["weights"]) != poly.nvars:
        raise UsageError(f"{len(data['weights'])} weights for {poly.nvars} variables")
    return data


def parse_basket(text: str) -> Basket:
    """'3,1;5,2' or '[[3,1],[5,2]]'; empty string is the empty basket."""
    text = text.strip()
    if not text:
        return Basket()
    try:
        if text.startswith("["):
            return Basket.from_json(json.loads(text))
        pairs = []
        for chunk in text.split(";"):
            r, v = chunk.split(",")
            pairs.append((int(r), int(v)))
        return Basket(tuple(pairs))
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read basket {text!r}: {exc}") from exc


def _report(args, command: str, results) -> dict:
    return {
        "command": command,
        "argv": getattr(args, "argv", []),
        "version": __version__,
        "seed": getattr(args, "seed", None),
        "results": results,
    }


def _emit(args, report: dict, lines: List[str]):
    for line in lines:
        print(line)
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True, ensure_ascii=False)
            fh.write("\n")


def cmd_classify(args) -> int:
    spec = load_germ_spec(args)
    f = spec["polynomial"]
    if f.nvars == 3:
        res = classify_duval(f, args.jet_bound)
        results = {"equation": format_polynomial(f), "type": str(res)}
        if isinstance(res, (NotDuVal, Undecided)):
            results["reason"] = res.reason
        _emit(args, _report(args, "classify", results), [f"{format_polynomial(f)}: {res}"])
        if isinstance(res, Undecided):
            print(f"undecided: {res.reason}", file=sys.stderr)
            return EXIT_UNDECIDED
        return EXIT_OK
    if f.nvars == 4:
        res = classify_cdv(f, seed=args.seed, samples=args.samples, jet_bound=args.jet_bound)
        results = {"equation": format_polynomial(f), **res.to_json()}
        lines = [f"{format_polynomial(f)}: {res}"]
        if not res.stable:
            lines.append(f"warning: samples disagree: {', '.join(res.samples)}")
        _emit(args, _report(args, "classify", results), lines)
        return EXIT_OK
    raise UsageError(f"classify expects 3 or 4 variables, got {f.nvars}")


def cmd_blowup(args) -> int:
    spec = load_germ_spec(args)
    if "weights" not in spec:
        raise UsageError("blowup needs weights")
    germ = WeightedGerm(spec["polynomial"], spec["weights"])
    lines = []
    if 1 not in spec["weights"]:
        lines.append("note: no weight equals 1; inputs are assumed to be in normalised coordinates")
    rep = blowup_report(germ)
    results = {"equation": format_polynomial(germ.equation), "weights": list(germ.weights), **rep.to_json()}
    lines.append(f"d = {rep.d}, c = {rep.c}, E^3 = {_fmt(rep.E_cubed)}")
    for key, v in rep.conditions.items():
        lines.append(f"condition ({key}): {v.status}" + (f" [{v.caveat}]" if v.caveat else "") + f" - {v.detail}")
    code = EXIT_OK
    if isinstance(rep.basket, Unrecognized):
        lines.append(f"basket unrecognised at {rep.basket.describe()}")
        lines.append("strata scanned: " + "; ".join(rep.strata))
        code = EXIT_UNRECOGNIZED
    else:
        lines.append(f"J = {rep.basket}")
        try:
            data = contraction_data(rep.c, rep.E_cubed, rep.basket, len(rep.points))
            results["contraction"] = data.to_json()
            lines.append(f"d(-1) = {data.d_minus_1}, type {data.type_tag}")
        except (RRError, ClassificationError) as exc:
            results["contraction"] = {"error": str(exc)}
            lines.append(f"no type: {exc}")
    if code == EXIT_OK and any(v.status == FAIL for v in rep.conditions.values()):
        code = EXIT_FAIL
    _emit(args, _report(args, "blowup", results), lines)
    return code


def cmd_rr(args) -> int:
    basket = parse_basket(args.basket)
    E3 = Fraction(args.E3) if args.E3 else e3_from_pins(args.a, basket)
    ctx = context_from_basket(args.a, E3, basket)
    results = {
        "a": args.a,
        "E3": _fmt(E3),
        "J": basket.to_json(),
        "E.c2": _fmt(ctx.E_dot_c2),
        "chi": {str(i): _fmt(chi_Q(i, ctx)) for i in range(-args.range, args.range + 1)},
    }
    lines = [f"a = {args.a}, E^3 = {_fmt(E3)}, J = {basket}, E.c2 = {_fmt(ctx.E_dot_c2)}"]
    try:
        data = contraction_data(args.a, E3, basket, args.points)
        results["contraction"] = data.to_json()
        lines.append(f"d(-1) = {data.d_minus_1}, type {data.type_tag}")
    except ClassificationError as exc:
        results["contraction"] = {"error": str(exc)}
        lines.append(f"no type: {exc}")
    _emit(args, _report(args, "rr", results), lines)
    return EXIT_OK


def cmd_elephants(args) -> int:
    basket = parse_basket(args.basket)
    if args.type == "I":
        res = enumerate_typeI_candidates(basket, max_rank=args.bound or 16)
    else:
        res = enumerate_typeII_III_candidates(args.type, basket, a=args.a, max_rank=args.bound)
    lines = [f"type {args.type}, J = {basket}, target {_fmt(res.target)}"]
    for row in res.rows:
        if not row.survives_value and not args.all:
            continue
        mark = "excluded" if row.excluded else ("survives" if row.survives else "eliminated")
        label = f" ({row.label})" if row.label else ""
        stars = ",".join(str(t) for t in row.star_types) or "smooth"
        lines.append(f"  {row.s_x} {row.cycle_text()}{label}: value {_fmt(row.value)}, contracted {stars}, {mark}")
    if args.type == "I":
        lines.append("conclusion: " + " or ".join(res.conclusion()))
    else:
        pairs = surviving_pairs(res)
        lines.append("surviving (S_X, S): " + "; ".join(f"{sx} / {','.join(s) or 'smooth'}" for sx, s in pairs))
    results = res.to_json()
    results["surviving_pairs"] = [[sx, list(s)] for sx, s in surviving_pairs(res)]
    _emit(args, _report(args, "elephants", results), lines)
    return EXIT_OK


def cmd_can_weights(args) -> int:
    g = parse(args.g, ["x3", "x4"])
    if args.check:
        try:
            r1, r2, a = (int(x) for x in args.check.split(","))
        except ValueError as exc:
            raise UsageError("--check expects r1,r2,a") from exc
        verdict = check_cAn_weights(g, r1, r2, a)
        results = {"g": format_polynomial(g), "r1": r1, "r2": r2, "a": a,
                   "admissible": verdict.admissible, "violated": list(verdict.violations)}
        _emit(args, _report(args, "can-weights", results), [str(verdict)])
        return EXIT_OK
    triples = enumerate_cAn_weights(g, args.bound or 6)
    results = {"g": format_polynomial(g), "bound": args.bound or 6, "admissible": [list(t) for t in triples]}
    _emit(args, _report(args, "can-weights", results), [f"(r1, r2, a) = {t}" for t in triples] or ["none"])
    return EXIT_OK


def cmd_verify_corpus(args) -> int:
    from .corpus import MODULES, run_criteria
    only = [m.strip() for m in args.only.split(",")] if args.only else None
    if only:
        unknown = [m for m in only if m not in MODULES]
        if unknown:
            raise UsageError(f"unknown module(s) {unknown}; choose from {', '.join(MODULES)}")
    results = run_criteria(only, seed=args.seed)
    lines = [r.line() for r in results]
    if args.verbose:
        for r in results:
            if not r.passed:
                lines += [f"    {d}" for d in r.details if not d.startswith("ok: ")]
    passed = all(r.passed for r in results)
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    _emit(args, _report(args, "verify-paper", [r.to_json() for r in results]), lines)
    return EXIT_OK if passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cdvcalc", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jet-bound", type=int, default=DEFAULT_JET_BOUND)
    common.add_argument("--bound", type=int, default=None)
    common.add_argument("--json", metavar="PATH")
    sub = parser.add_subparsers(dest="command", required=True)

    def germ_args(p, weights):
        p.add_argument("germ", nargs="?", help="JSON file with variables, equation, weights ('-' for stdin)")
        p.add_argument("--equation")
        p.add_argument("--variables", help="comma-separated variable names")
        if weights:
            p.add_argument("--weights", help="comma-separated weights")

    p = sub.add_parser("classify", parents=[common], help="Du Val / compound Du Val type")
    germ_args(p, False)
    p.add_argument("--samples", type=int, default=5)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("blowup", parents=[common], help="weighted blowup report")
    germ_args(p, True)
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("rr", parents=[common], help="Riemann-Roch data for (a, E^3, J)")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--basket", required=True, help="e.g. '3,1;5,2'")
    p.add_argument("--E3", help="E^3 as p/q (default: forced by chi(Q_0)=1, chi(Q_1)=0)")
    p.add_argument("--points", type=int, default=None, help="number of non-Gorenstein points")
    p.add_argument("--range", type=int, default=3, help="report chi(Q_i) for |i| <= range")
    p.set_defaults(func=cmd_rr)

    p = sub.add_parser("elephants", parents=[common], help="partial resolution candidates")
    p.add_argument("--type", required=True, choices=["I", "IIa", "IIb∨", "IIb∨∨", "III", "IIbv", "IIbvv"])
    p.add_argument("--basket", required=True)
    p.add_argument("--a", type=int, default=None)
    p.add_argument("--all", action="store_true", help="also list eliminated rows")
    p.set_defaults(func=cmd_elephants)

    p = sub.add_parser("can-weights", parents=[common], help="cA_n weight admissibility")
    p.add_argument("--g", required=True, help="polynomial in x3, x4")
    p.add_argument("--check", help="r1,r2,a to test a single triple")
    p.set_defaults(func=cmd_can_weights)

    p = sub.add_parser("verify-paper", parents=[common], help="run the golden corpus checks")
    p.add_argument("--only", help="comma-separated modules: blowup, rr, curvecalc, elephants, can, duval")
    p.add_argument("--verbose", "-v", action="store_true")
    p.set_defaults(func=cmd_verify_corpus)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    args.argv = argv
    if getattr(args, "type", None) in ("IIbv", "IIbvv"):
        args.type = {"IIbv": "IIb∨", "IIbvv": "IIb∨∨"}[args.type]
    try:
        return args.func(args)
    except UndecidedError as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (InvariantViolation, AssertionError) as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ParseError, UsageError, BlowupError, ElephantError, RRError, ValueError) as exc:
        # bad input of any kind, including inconsistent Riemann-Roch data
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
