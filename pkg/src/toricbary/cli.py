"""Command-line front end.

Every subcommand reads a polytope document (a path, ``-`` for stdin, or
``--fixture name:params``) and prints a JSON report to stdout.

Exit codes: 0 success, 1 usage error, 2 parse/validation error,
3 mathematical precondition failure, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .chamber import contractibility_obstruction, mass_linear_test
from .cpn import WeightLoop, maslov_index, torsion_class, verify_givental
from .documents import DocumentError, parse_fixture_spec, parse_polytope, parse_rational, to_jsonable
from .exact import dot
from .errors import InvariantViolation, PolytopeError, ToricError
from .invariants import (
    action_maslov_covector,
    collinearity_report,
    euler_identity_check,
    invariant_report,
)
from .polytope import is_delzant, monotone_normalization


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from None


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except DocumentError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("path", nargs="?", help="polytope JSON document, or - for stdin")
    p.add_argument("--fixture", help="built-in polytope, e.g. simplex:2,1 or trapezoid:3,1,1")


def _add_sampling(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=int, default=None, help="extra verification samples (default 4F)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toricbary", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add_input(sub.add_parser("validate", help="Delzant report and monotone normalization"))
    p = sub.add_parser("barycenters", help="lattice volumes Vol_k and barycenters B_k")
    _add_input(p)
    p.add_argument("--k", type=int, default=None)
    p = sub.add_parser("invariant", help="I_{c_L u^{n+1-L}} on one loop")
    _add_input(p)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--loop", type=_int_list, required=True)
    p = sub.add_parser("invariants", help="all invariants on one loop")
    _add_input(p)
    p.add_argument("--loop", type=_int_list, required=True)
    _add_input(sub.add_parser("collinear", help="collinearity of the barycenters"))
    p = sub.add_parser("masslinear", help="mass-linearity test over the chamber")
    _add_input(p)
    p.add_argument("--loop", type=_int_list, required=True)
    p.add_argument("--k", type=int, default=None)
    _add_sampling(p)
    p = sub.add_parser("obstruct", help="search for a non-contractibility certificate")
    _add_input(p)
    p.add_argument("--loop", type=_int_list, required=True)
    _add_sampling(p)
    p = sub.add_parser("cpn", help="Maslov index, Calabi-Weinstein and torsion class of a diagonal loop on CP^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--weights", type=_int_list, required=True)
    p.add_argument("--scale", type=_rational, default=Fraction(1))
    return parser


def _load(args):
    if args.fixture and args.path:
        raise UsageError("give either a path or --fixture, not both")
    if args.fixture:
        return parse_fixture_spec(args.fixture)
    if not args.path:
        raise UsageError("no polytope given (path or --fixture)")
    if args.path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise DocumentError(f"cannot read {args.path}: {e.strerror}") from None
    return parse_polytope(text)


def _check_loop(p, loop) -> None:
    if len(loop) != p.dimension:
        raise UsageError(f"loop has length {len(loop)}, expected {p.dimension}")


def _monotone_json(p):
    m = monotone_normalization(p)
    if m is None:
        return None
    return {"translation": m.translation, "kappa": m.kappa, "unique": m.unique}


def cmd_validate(args, doc):
    report = is_delzant(doc.conormals, doc.supports)
    results = {
        "delzant": report.ok,
        "offending": [{"vertex": v, "determinant": d, "active_facets": a} for v, d, a in report.offending],
    }
    try:
        p = doc.build()
    except PolytopeError as e:
        results["error"] = str(e)
        return results, e
    results.update(
        vertices=p.vertices,
        face_counts=p.face_counts(),
        monotone=_monotone_json(p),
    )
    return results, None


def cmd_barycenters(args, doc):
    p = doc.build()
    prof = p.profile
    if args.k is not None:
        if not 0 <= args.k <= p.dimension:
            raise UsageError(f"--k must lie in 0..{p.dimension}")
        return {"k": args.k, "vol": prof.vol[args.k], "bary": prof.bary[args.k]}, None
    return {
        "n": prof.n,
        "vol": prof.vol,
        "bary": prof.bary,
        "faces": [
            {"dim": f.dim, "facets": [j + 1 for j in sorted(f.active)], "vertex_ids": f.vertex_ids,
             "lattice_volume": f.lattice_volume, "centroid": f.centroid}
            for f in p.faces
        ],
    }, None


def _monotone_extras(p, loop):
    mono = invariant_report(p, loop).monotone
    if mono is None:
        return None
    return {
        "kappa": mono.kappa,
        "action_maslov": mono.action_maslov,
        "futaki": mono.futaki,
        "c1_powers": [{"L": L, "value": v} for L, v in enumerate(mono.c1_powers, 1)],
    }


def cmd_invariant(args, doc):
    p = doc.build()
    _check_loop(p, args.loop)
    if not 0 <= args.L <= p.dimension:
        raise UsageError(f"--L must lie in 0..{p.dimension}")
    c, v = action_maslov_covector(p, args.L)
    return {
        "L": args.L,
        "loop": args.loop,
        "value": c * dot(v, args.loop),
        "covector": {"prefactor": c, "direction": v},
        "monotone": _monotone_extras(p, args.loop),
    }, None


def cmd_invariants(args, doc):
    p = doc.build()
    _check_loop(p, args.loop)
    rep = invariant_report(p, args.loop)
    euler = euler_identity_check(p, args.loop)
    if not euler.holds:
        raise InvariantViolation(f"Euler identity failed: {euler.lhs} != {euler.rhs}")
    return {
        "loop": rep.loop,
        "values": [{"L": L, "value": v} for L, v in enumerate(rep.values)],
        "monotone": _monotone_extras(p, args.loop),
        "euler_identity": {"lhs": euler.lhs, "rhs": euler.rhs, "vertex_count": euler.vertex_count, "holds": euler.holds},
    }, None


def cmd_collinear(args, doc):
    rep = collinearity_report(doc.build())
    return {
        "affine_dimension": rep.affine_dimension,
        "c_delta": rep.c_delta,
        "monotone_identity": rep.monotone_identity,
        "triples": [{"indices": [a, b, c], "collinear": ok} for a, b, c, ok in rep.triples],
    }, None


def cmd_masslinear(args, doc):
    p = doc.build()
    _check_loop(p, args.loop)
    if args.k is not None and not 0 <= args.k <= p.dimension:
        raise UsageError(f"--k must lie in 0..{p.dimension}")
    rep = mass_linear_test(p, args.loop, args.k, args.samples, args.seed, args.threads)
    return {
        "verdict": rep.verdict,
        "probabilistic": True,
        "k": rep.k_index,
        "constant": rep.constant,
        "gradient": rep.gradient,
        "integral": rep.integral,
        "samples_used": rep.samples_used,
        "witness": None if rep.witness is None else {
            "kappa": rep.witness, "value": rep.witness_value, "fitted": rep.witness_fitted},
    }, None


def cmd_obstruct(args, doc):
    p = doc.build()
    _check_loop(p, args.loop)
    rep = contractibility_obstruction(p, args.loop, args.samples, args.seed, args.threads)
    return {
        "verdict": rep.verdict,
        "reference_pairings": [{"k": k, "value": v} for k, v in enumerate(rep.reference_pairings)],
        "points_checked": rep.points_checked,
        "witness": None if rep.witness is None else {
            "kappa": rep.witness, "k": rep.witness_k, "value": rep.witness_value},
    }, None


def cmd_cpn(args):
    if args.n < 1:
        raise UsageError("--n must be positive")
    if len(args.weights) != args.n + 1:
        raise UsageError(f"--weights needs {args.n + 1} entries")
    if args.scale <= 0:
        raise UsageError("--scale must be positive")
    wl = WeightLoop(args.weights, args.scale)
    rep = verify_givental(wl)
    return {
        "n": wl.n,
        "weights": wl.weights,
        "scale": wl.scale,
        "maslov": maslov_index(wl),
        "volume": rep.volume,
        "calabi_weinstein": rep.calabi_weinstein,
        "cw_over_volume": rep.lhs,
        "maslov_over_2n2": rep.rhs,
        "equal": rep.equal,
        "torsion": torsion_class(wl),
        "modulus": wl.n + 1,
    }, None


COMMANDS = {
    "validate": cmd_validate,
    "barycenters": cmd_barycenters,
    "invariant": cmd_invariant,
    "invariants": cmd_invariants,
    "collinear": cmd_collinear,
    "masslinear": cmd_masslinear,
    "obstruct": cmd_obstruct,
}

_ECHO_SKIP = {"command", "path", "fixture"}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = make_parser().parse_args(argv)
    echo = {k: v for k, v in vars(args).items() if k not in _ECHO_SKIP}
    report = {"version": __version__, "command": args.command, "arguments": echo}
    try:
        if args.command == "cpn":
            results, failure = cmd_cpn(args)
        else:
            report["arguments"]["source"] = args.fixture or args.path
            doc = _load(args)
            report["input"] = doc.to_json()
            report["input_digest"] = doc.digest()
            results, failure = COMMANDS[args.command](args, doc)
    except UsageError as e:
        print(f"toricbary: error: {e}", file=sys.stderr)
        return 1
    except ToricError as e:
        print(f"toricbary: error: {e}", file=sys.stderr)
        return e.exit_code
    report["seed"] = getattr(args, "seed", None)
    report["results"] = results
    json.dump(to_jsonable(report), out, indent=2)
    out.write("\n")
    if failure is not None:
        print(f"toricbary: error: {failure}", file=sys.stderr)
        return failure.exit_code
    return 0


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
