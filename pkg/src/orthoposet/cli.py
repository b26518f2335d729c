"""Command-line front end.

Every subcommand prints one JSON document on stdout and a short human
summary on stderr.  Exit status: 0 success or decided, 1 property
violation (not stable, not converged, a failed check), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import serialize as ser
from .catalog import (
    CRITICAL_NAMES,
    deleted_poset,
    deleted_rep,
    family_rep,
    remark5_weight,
)
from .exact import DimensionMismatch
from .poset import PosetError, critical_poset, finiteness_type, normalize_name, parse_poset
from .representation import RepresentationError, are_equivalent, end_dim, is_indecomposable, validate_rep
from .stability import (
    DEFAULT_PRIMES,
    StabilityError,
    extend_weight,
    find_stabilizing_weight,
    is_stable,
)
from .unitary import (
    UnitarizationError,
    extract_unitary,
    intertwiner,
    diagonal_lemma_instance,
    lemma1_verify,
    unitarize,
)

INPUT_ERRORS = (
    ser.FormatError,
    PosetError,
    RepresentationError,
    DimensionMismatch,
    StabilityError,
    UnitarizationError,
    json.JSONDecodeError,
    OSError,
    KeyError,
    ValueError,
)


class UsageError(Exception):
    pass


def _load_json(source: str):
    if source == "-":
        return json.load(sys.stdin)
    path = Path(source)
    if path.exists():
        return json.loads(path.read_text())
    return json.loads(source)


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=2, default=ser.to_jsonable)
    sys.stdout.write("\n")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _primes(args):
    if not getattr(args, "primes", None):
        return None
    return [int(p) for p in args.primes.split(",") if p.strip()]


def _rep(args, prefix: str = ""):
    """A representation from ``--family/--lambda`` or a JSON file."""
    family = getattr(args, prefix + "family", None)
    if family:
        lam = getattr(args, prefix + "lam", None)
        if lam is None:
            raise UsageError("--lambda is required with --family")
        return family_rep(family, ser.scalar_from_json(lam)).rep
    source = getattr(args, prefix + "rep", None)
    if source is None:
        raise UsageError("give a representation file or --family/--lambda")
    return ser.rep_from_json(_load_json(source))


def _weight(spec: str | None, rep, family: str | None):
    if spec is None or spec == "critical":
        if family is None:
            raise UsageError("--weight critical needs --family")
        return remark5_weight(family)
    if spec.lstrip().startswith(("{", "[")) or Path(spec).exists():
        return ser.weight_from_json(_load_json(spec), rep.poset)
    parts = [p.strip() for p in spec.split(",")]
    return ser.weight_from_json(parts, rep.poset)


def cmd_poset_check(args) -> int:
    source = args.poset
    try:
        data = _load_json(source)
    except (json.JSONDecodeError, OSError):
        data = source
    p = parse_poset(data)
    verdict = finiteness_type(p)
    out = verdict.to_json()
    out["certification"] = "exact"
    _emit(out)
    _say(f"{len(p)} elements: {verdict.kind}" + (f" (contains {verdict.witness})" if verdict.witness else ""))
    return 0


def cmd_rep_validate(args) -> int:
    r = _rep(args)
    bad = validate_rep(r)
    _emit({"valid": not bad, "violations": [list(v) for v in bad], "field": r.field(), "certification": "exact"})
    _say("valid" if not bad else f"{len(bad)} containment violations")
    return 0 if not bad else 1


def cmd_rep_equiv(args) -> int:
    files = [f for f in (args.rep, args.other_rep) if f]
    if args.family:
        v = _rep(args)
    elif files:
        v = ser.rep_from_json(_load_json(files.pop(0)))
    else:
        raise UsageError("give two representations")
    if args.other_family:
        w = _rep(args, "other_")
    elif files:
        w = ser.rep_from_json(_load_json(files.pop(0)))
    else:
        raise UsageError("give two representations")
    g = are_equivalent(v, w, seed=args.seed)
    _emit({"equivalent": g is not None, "intertwiner": None if g is None else ser.matrix_to_json(g), "certification": "exact"})
    _say("equivalent" if g is not None else "not equivalent")
    return 0


def cmd_rep_endo(args) -> int:
    r = _rep(args)
    d = end_dim(r)
    ind = is_indecomposable(r, seed=args.seed)
    verdict = {True: "Indecomposable", False: "Decomposable", None: "Unknown"}[ind.verdict]
    out = {"end_dim": d, "schurian": d == 1, "indecomposable": verdict, "field": ind.field, "certification": "exact"}
    if ind.idempotent is not None:
        out["idempotent"] = ser.matrix_to_json(ind.idempotent)
    _emit(out)
    _say(f"dim End = {d}, {verdict}")
    return 0


def cmd_stability_check(args) -> int:
    r = _rep(args)
    chi = _weight(args.weight, r, args.family)
    report = is_stable(r, chi, primes=_primes(args))
    out = ser.stability_to_json(report)
    out["weight"] = ser.weight_to_json(chi)
    _emit(out)
    _say(f"{report.verdict}" + (f", slack {report.slack}" if report.slack is not None else ""))
    return 0


def cmd_weight_find(args) -> int:
    if args.deleted:
        r = deleted_rep(args.deleted)
    else:
        r = _rep(args)
    sw = find_stabilizing_weight(r, primes=_primes(args))
    if sw is None:
        _emit({"weight": None, "certification": "exact LP over F_p-certified subdimension vectors"})
        _say("no stabilising weight")
        return 1
    _emit({
        "weight": ser.weight_to_json(sw.weight),
        "slack": str(sw.slack),
        "stability": ser.stability_to_json(sw.report),
        "certification": "exact LP over F_p-certified subdimension vectors",
    })
    _say(f"weight {[str(v) for v in sw.weight.values()]}, slack {sw.slack}")
    return 0


def cmd_weight_extend(args) -> int:
    name = normalize_name(args.family)
    rep_a = deleted_rep(name)
    if args.weight:
        chi_a = _weight(args.weight, rep_a, None)
    else:
        sw = find_stabilizing_weight(rep_a, primes=_primes(args))
        if sw is None:
            raise StabilityError("the deleted representation has no stabilising weight")
        chi_a = sw.weight
    lam = ser.scalar_from_json(args.lam) if args.lam is not None else Fraction(2)
    inst = family_rep(name, lam)
    eps = ser.scalar_from_json(args.epsilon) if args.epsilon is not None else None
    chi = extend_weight(
        chi_a, rep_a, inst.rep.spaces[inst.lambda_element].dim, eps=eps,
        lam_element=inst.lambda_element, order=inst.rep.poset.elements, primes=_primes(args),
    )
    report = is_stable(inst.rep, chi, primes=_primes(args))
    _emit({"weight": ser.weight_to_json(chi), "lambda": ser.scalar_to_json(lam), "stability": ser.stability_to_json(report)})
    _say(f"extended weight {[str(v) for v in chi.values()]}: {report.verdict} at lambda={lam}")
    return 0 if report.stable else 1


def cmd_unitarize(args) -> int:
    r = _rep(args)
    chi = _weight(args.weight, r, args.family)
    res = unitarize(r, chi, tol=args.tol, max_iter=args.max_iter)
    out = {"converged": res.converged, "status": res.trace.status, "iterations": res.trace.iterations}
    if res.unitary is not None:
        out["unitary"] = ser.unitary_to_json(res.unitary, tol=args.tol)
    else:
        out["reason"] = res.trace.reason
    if args.trace:
        out["trace"] = ser.trace_to_json(res.trace)
    _emit(out)
    _say(f"{res.trace.status} after {res.trace.iterations} iterations, residual {res.trace.residual_history[-1]:.3e}"
         if res.trace.residual_history else res.trace.status)
    return 0 if res.converged else 1


def cmd_extract_unitary(args) -> int:
    u = ser.unitary_from_json(_load_json(args.first))
    u2 = ser.unitary_from_json(_load_json(args.second))
    g_raw = _load_json(args.map)
    if args.exact_map:
        if u.transform is None or u2.transform is None:
            raise UsageError("--exact-map needs both inputs to carry their transform")
        g = intertwiner(u, u2, ser.matrix_from_json(g_raw))
    else:
        g = ser.float_matrix_from_json(g_raw)
    ex = extract_unitary(u, u2, g, tol=args.tol)
    lemma = lemma1_verify(*diagonal_lemma_instance(u, u2, ex), list(u.chi.values()))
    _emit({
        "phi": ser.float_matrix_to_json(ex.phi),
        "error": ex.error,
        "lemma": {"verdict": lemma.verdict, "projection_defect": lemma.projection_defect,
                  "diagonal_spread": lemma.diagonal_spread},
        "certification": "float",
    })
    _say(f"unitary factor conjugates projections within {ex.error:.2e}; lemma check: {lemma.verdict}")
    return 0 if ex.error <= 1e-8 and lemma.verdict != "counterexample" else 1


def cmd_catalog_dump(args) -> int:
    names = [normalize_name(args.family)] if args.family else list(CRITICAL_NAMES)
    lam = ser.scalar_from_json(args.lam) if args.lam is not None else Fraction(2)
    out = {}
    for name in names:
        entry = {
            "poset": critical_poset(name).to_json(),
            "weight": ser.weight_to_json(remark5_weight(name)),
            "family": ser.rep_to_json(family_rep(name, lam).rep),
            "lambda": ser.scalar_to_json(lam),
            "lambda_element": family_rep(name, lam).lambda_element,
            "deleted_poset": deleted_poset(name).to_json(),
            "deleted": ser.rep_to_json(deleted_rep(name)),
        }
        out[name] = entry if args.what == "all" else entry[args.what]
    _emit(out if len(names) > 1 else out[names[0]])
    _say(f"dumped {args.what} for {', '.join(names)}")
    return 0


def cmd_verify_paper(args) -> int:
    from .verify import CHECKS, run_all, run_check

    chosen = args.only or list(range(1, len(CHECKS) + 1))
    results = []
    for k in chosen:
        if not 1 <= k <= len(CHECKS):
            raise UsageError(f"no check number {k}")
        c = run_check(k, seed=args.seed)
        _say(c.line())
        results.append(c)
    _emit({"passed": all(c.passed for c in results), "checks": [c.to_json() for c in results]})
    return 0 if all(c.passed for c in results) else 1


def _add_rep_args(sp, prefix: str = "", positional: bool = True) -> None:
    flag = "--" + prefix.replace("_", "-")
    if positional:
        sp.add_argument(prefix + "rep", nargs="?", help="representation JSON file, inline JSON or '-'")
    sp.add_argument(f"{flag}family", dest=prefix + "family", help="critical family name, e.g. 1,2,5 or N,4")
    sp.add_argument(f"{flag}lambda", dest=prefix + "lam", help="family parameter, e.g. 3 or 1/2")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for the randomised fallbacks")
    common.add_argument("-v", "--verbose", action="store_true")
    parser = argparse.ArgumentParser(prog="orthoposet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help: str):
        return sub.add_parser(name, help=help, parents=[common])

    sp = add("poset-check", "finite or infinite representation type")
    sp.add_argument("poset", help="poset JSON file, inline JSON, or text like 'a<b, c<d'")
    sp.set_defaults(func=cmd_poset_check)

    sp = add("rep-validate", "check the containments of a representation")
    _add_rep_args(sp)
    sp.set_defaults(func=cmd_rep_validate)

    sp = add("rep-equiv", "decide equivalence of two representations")
    _add_rep_args(sp)
    sp.add_argument("other_rep", nargs="?", help="second representation")
    _add_rep_args(sp, "other_", positional=False)
    sp.set_defaults(func=cmd_rep_equiv)

    sp = add("rep-endo", "endomorphism dimension and indecomposability")
    _add_rep_args(sp)
    sp.set_defaults(func=cmd_rep_endo)

    sp = add("stability-check", "certify chi-stability")
    _add_rep_args(sp)
    sp.add_argument("--weight", help="'critical', a comma list, or a JSON object/file")
    sp.add_argument("--primes", help=f"comma-separated primes (default {','.join(map(str, DEFAULT_PRIMES))} then small)")
    sp.set_defaults(func=cmd_stability_check)

    sp = add("weight-find", "weight with the largest stability slack")
    _add_rep_args(sp)
    sp.add_argument("--deleted", help="use the deleted representation of this family")
    sp.add_argument("--primes")
    sp.set_defaults(func=cmd_weight_find)

    sp = add("weight-extend", "extend a deleted-rep weight to the whole family")
    sp.add_argument("--family", required=True)
    sp.add_argument("--lambda", dest="lam", help="parameter to re-certify at (default 2)")
    sp.add_argument("--weight", help="weight on the deleted poset (default: weight-find)")
    sp.add_argument("--epsilon", help="0 < epsilon < R (default R/2)")
    sp.add_argument("--primes")
    sp.set_defaults(func=cmd_weight_extend)

    sp = add("unitarize", "solve sum chi_i P_i = 1 by the balancing flow")
    _add_rep_args(sp)
    sp.add_argument("--weight", help="'critical', a comma list, or a JSON object/file")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-iter", type=int, default=100_000)
    sp.add_argument("--trace", action="store_true", help="include the residual history")
    sp.set_defaults(func=cmd_unitarize)

    sp = add("extract-unitary", "unitary factor of an intertwiner")
    sp.add_argument("first", help="unitary representation JSON (as printed by unitarize)")
    sp.add_argument("second")
    sp.add_argument("map", help="intertwiner matrix JSON")
    sp.add_argument("--exact-map", action="store_true",
                    help="map is exact, in the original coordinates of the two representations")
    sp.add_argument("--tol", type=float, default=1e-6, help="intertwining tolerance")
    sp.set_defaults(func=cmd_extract_unitary)

    sp = add("catalog-dump", "critical posets, families and weights as JSON")
    sp.add_argument("--family")
    sp.add_argument("--lambda", dest="lam")
    sp.add_argument("--what", default="all", choices=["all", "poset", "weight", "family", "deleted", "deleted_poset"])
    sp.set_defaults(func=cmd_catalog_dump)

    sp = add("verify-paper", "run the ten reproducibility checks")
    sp.add_argument("--only", type=int, action="append", help="run just this check (repeatable)")
    sp.set_defaults(func=cmd_verify_paper)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    random.seed(args.seed)
    np.random.seed(args.seed)
    try:
        return args.func(args)
    except UsageError as exc:
        _say(f"error: {exc}")
        return 2
    except INPUT_ERRORS as exc:
        _say(f"error: {type(exc).__name__}: {exc}")
        return 2


def main() -> None:
    sys.exit(run())

