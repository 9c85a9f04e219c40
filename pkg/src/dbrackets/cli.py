"""``dbrackets`` command-line driver.

Exit codes: 0 all checks pass, 1 a check failed or a hypothesis was
violated, 2 malformed input.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from pathlib import Path

import jsonschema

from . import cohomology, derived, higherops, hochschild, shlie
from .errors import HypothesisViolation, InvalidArgument, MalformedInput
from .gradedcore import MultilinearMap, Vector
from .jsonio import AlgebraFile, load_algebra, schema
from .report import Report, _jsonable

VERIFY_SUBJECTS = ("equivalence", "order-calculus", "derived-lie", "voronov", "linfty",
                   "ainfty-symmetrize", "hochschild", "cross-construction", "cdbt")
COMPUTE_TARGETS = ("gamma", "psi", "phi", "unshuffle-sum", "b-bracket", "c-bracket",
                   "bv-bracket", "cohomology", "order")


class Usage(Exception):
    """User-facing input problem (exit code 2)."""


def _parser():
    p = argparse.ArgumentParser(prog="dbrackets",
                                description="Exact derived brackets and higher-order operators.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--algebra", required=True, help="JSON algebra file")
        sp.add_argument("--operator", help="named operator (Δ) or Lie element label")
        sp.add_argument("--differential", help="named differential (d or Q)")
        sp.add_argument("--max-arity", type=int, default=4)
        sp.add_argument("--args", help="comma-separated basis labels")
        sp.add_argument("--l0", help="comma-separated labels spanning L0")
        sp.add_argument("--setting", choices=("auto", "end", "lie", "hochschild"), default="auto",
                        help="ambient Lie algebra for derived-bracket subjects")
        sp.add_argument("--json", metavar="PATH", help="write the full JSON report here")
        sp.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="run a theorem verification")
    v.add_argument("subject", choices=VERIFY_SUBJECTS)
    common(v)
    c = sub.add_parser("compute", help="evaluate a single construction")
    c.add_argument("what", choices=COMPUTE_TARGETS)
    common(c)
    c.add_argument("--max", type=int, help="largest order tested by 'compute order'")
    return p


# ---------------------------------------------------------------------------
# argument helpers

def _labels(text, basis, what="--args"):
    if not text:
        return []
    out = [x.strip() for x in text.split(",") if x.strip()]
    for lab in out:
        if lab not in basis:
            raise Usage(f"{what}: unknown basis label {lab!r}")
    return out


def _operator(F: AlgebraFile, name, flag="--operator"):
    if not name:
        raise Usage(f"{flag} is required")
    if name not in F.algebra.operators:
        raise Usage(f"{flag}: algebra has no operator {name!r}")
    return F.algebra.operators[name]


def _setting(args, F: AlgebraFile):
    if args.setting != "auto":
        return args.setting
    if F.lie is not None:
        return "lie"
    if F.algebra.unit is not None:
        return "end"
    return "hochschild"


def _l0(args, F: AlgebraFile, basis):
    if args.l0:
        return _labels(args.l0, basis, "--l0")
    if F.l0:
        return list(F.l0)
    raise Usage("an L0 is required: pass --l0 or add 'l0' to the file")


def _lie_setup(args, F: AlgebraFile):
    """(L, d, l0 labels, Δ element or None, associative ambient or None, name)."""
    setting = _setting(args, F)
    if setting == "lie":
        if F.lie is None:
            raise Usage("file has no 'lie' section")
        L = F.lie
        l0 = _l0(args, F, L.basis)
        if args.operator:
            if args.operator not in L.basis:
                raise Usage(f"--operator: {args.operator!r} is not an element of L")
            delta = L.vec(args.operator)
            return L, L.ad(delta), l0, delta, None, L.name
        d = _operator(F, args.differential or "d", "--differential")
        return L, d, l0, None, None, L.name
    if setting == "end":
        E = derived.EndAlgebra(F.algebra)
        D = _operator(F, args.operator)
        delta = E.to_vector(D)
        return E.lie, E.lie.ad(delta), E.l0_labels, delta, E, E.lie.name
    raise Usage("this subject needs a Lie setting ('lie' or 'end')")


def _vec_args(F, args):
    labs = _labels(args.args, F.algebra.basis)
    return [F.algebra.vec(lab) for lab in labs]


# ---------------------------------------------------------------------------
# verify subjects

def _violation(report, exc: HypothesisViolation):
    report.violation(f"hypothesis {exc.condition}", exc.witness, message=str(exc))
    return report


def v_equivalence(args, F):
    A = F.algebra
    try:
        higherops.require_commutative_associative(A)
        D = _operator(F, args.operator)
        return higherops.verify_equivalence(A, D, args.max_arity, name=args.operator)
    except HypothesisViolation as exc:
        return _violation(Report(f"verify equivalence {A.name}"), exc)


def v_order_calculus(args, F):
    A = F.algebra
    try:
        higherops.require_commutative_associative(A)
        names = [x for x in (args.operator or "").split(",") if x] or sorted(A.operators)
        pool = {n: _operator(F, n) for n in names}
        return higherops.verify_order_calculus(A, pool, max_filtration=args.max_arity)
    except HypothesisViolation as exc:
        return _violation(Report(f"verify order-calculus {A.name}"), exc)


def v_derived_lie(args, F):
    L, d, l0, _, _, name = _lie_setup(args, F)
    rep = derived.verify_derived_lie(L, d, l0, name=name)
    return rep


def _voronov_families(args, F):
    L, d, l0, delta, E, name = _lie_setup(args, F)
    S = E.split if E is not None else derived.SplitLie(L, l0)
    if delta is not None:
        cfg = derived.DerivedBracketConfig.inner(delta)
    else:
        cfg = derived.DerivedBracketConfig.derivation(d)
    return S, cfg, name


def v_voronov(args, F):
    report = Report(f"verify voronov {F.name}")
    S, cfg, name = _voronov_families(args, F)
    try:
        fam = derived.voronov_family(S, cfg, args.max_arity, name=name)
    except HypothesisViolation as exc:
        return _violation(report, exc).finish()
    report.extend(shlie.check_linfty(fam, args.max_arity))
    # the same family from the other mode
    L = S.ambient
    if cfg.mode == "inner":
        other = derived.voronov_family(S, derived.DerivedBracketConfig.derivation(L.ad(cfg.delta)),
                                       args.max_arity, check=False)
    else:
        star = derived.adjoin_derivation(L, cfg.d, label="⟨d⟩")
        other = derived.voronov_family(derived.SplitLie(star, S.l0_labels),
                                       derived.DerivedBracketConfig.inner(star.vec("⟨d⟩")),
                                       args.max_arity, check=False)
    report.add("inner and derivation modes agree", fam == other)
    report.info["brackets"] = {n: b.describe() for n, b in fam.brackets.items()}
    return report.finish()


def v_linfty(args, F):
    A = F.algebra
    _operator(F, args.operator)
    report = Report(f"verify linfty {A.name} Φ[{args.operator}]")
    try:
        C = cohomology.build_cohomology(A)
        fam = cohomology.cdbt_brackets(C, args.operator, args.max_arity, check=False)
    except HypothesisViolation as exc:
        return _violation(report, exc).finish()
    report.extend(shlie.check_linfty(fam, args.max_arity))
    return report.finish()


def v_ainfty(args, F):
    A = F.algebra
    report = Report(f"verify ainfty-symmetrize {A.name}")
    if args.differential:
        _operator(F, args.differential, "--differential")
    try:
        M = hochschild.suspend_dga(A, args.differential)
        fam = shlie.symmetrize_ainfty(M, args.max_arity)
    except HypothesisViolation as exc:
        return _violation(report, exc).finish()
    report.extend(shlie.check_linfty(fam, args.max_arity))
    report.info["brackets"] = {n: b.describe() for n, b in fam.brackets.items()}
    return report.finish()


def v_hochschild(args, F):
    A = F.algebra
    report = Report(f"verify hochschild {A.name}")
    try:
        C = hochschild.HochschildComplex.from_algebra(A, max(3, args.max_arity))
    except InvalidArgument as exc:
        raise Usage(str(exc)) from None
    m = C.product_element()
    fails = hochschild.ainfty_failures(C, m)
    report.add("[m,m] = 0", not fails, fails[0][1] if fails else None)
    report.info["associative"] = A.properties.associative
    report.add("[m,m] = 0 iff associative", (not fails) == A.properties.associative)
    if fails:
        return report.finish()
    dc = hochschild.derived_commutator(A)
    B = A.basis
    bad = None
    for a, b in itertools.product(B.labels, repeat=2):
        expect = A.mul(B.vector(a), B.vector(b)) - A.mul(B.vector(b), B.vector(a))
        if dc(B.vector(a), B.vector(b)) != expect:
            bad = {"args": [a, b]}
            break
    report.add("[[m,a],b] = ab − ba", bad is None, bad)
    order, wit = hochschild.element_order(C, m)
    report.add("order of m = 2", order == 2, None, order=order, order_witness=wit)
    rng = random.Random(args.seed)
    for n in range(0, min(args.max_arity, 3) + 1):
        entries = {key: {lab: rng.randint(-2, 2) for lab in B.labels}
                   for key in itertools.product(B.labels, repeat=n)}
        f = C.from_map(MultilinearMap(n, B, B, entries, 0))
        order, wit = hochschild.element_order(C, f)
        report.add(f"random {n}-ary map has order <= {n}", order is not None and order <= n,
                   None, order=order, order_witness=wit)
    return report.finish()


def v_cross(args, F):
    setting = _setting(args, F)
    if setting == "hochschild":
        try:
            C = hochschild.HochschildComplex.from_algebra(F.algebra, max(3, args.max_arity))
        except InvalidArgument as exc:
            raise Usage(str(exc)) from None
        m = C.product_element()
        try:
            return derived.verify_cross_construction(C, m, C.l0_basis(), name=f"C({F.name})")
        except HypothesisViolation as exc:
            return _violation(Report(f"verify cross-construction {F.name}"), exc).finish()
    L, d, l0, delta, E, name = _lie_setup(args, F)
    if delta is None:
        L = derived.adjoin_derivation(L, d, label="⟨d⟩")
        delta = L.vec("⟨d⟩")
    try:
        return derived.verify_cross_construction(L, delta, l0, associative=E.assoc if E else None,
                                                 name=name)
    except HypothesisViolation as exc:
        return _violation(Report(f"verify cross-construction {name}"), exc).finish()


def v_cdbt(args, F):
    V = F.algebra
    report = Report(f"verify cdbt {V.name}")
    if args.differential:
        _operator(F, args.differential, "--differential")
    _operator(F, args.operator)
    try:
        C = cohomology.build_cohomology(V, args.differential)
        report.add("Q hypotheses and H commutative associative", True)
        report.info.update(C.info)
        report.info["representatives"] = [str(v) for v in C.representatives]
        report.extend(cohomology.check_descent(C, args.operator, args.max_arity))
        fam = cohomology.cdbt_brackets(C, args.operator, args.max_arity, check=False)
    except HypothesisViolation as exc:
        return _violation(report, exc).finish()
    report.extend(shlie.check_linfty(fam, args.max_arity))
    report.extend(cohomology.representative_independence(C, args.operator, args.max_arity),
                  prefix="independence: ")
    report.info["brackets"] = {n: b.describe() for n, b in fam.brackets.items()}
    return report.finish()


VERIFY = {
    "equivalence": v_equivalence, "order-calculus": v_order_calculus,
    "derived-lie": v_derived_lie, "voronov": v_voronov, "linfty": v_linfty,
    "ainfty-symmetrize": v_ainfty, "hochschild": v_hochschild,
    "cross-construction": v_cross, "cdbt": v_cdbt,
}


# ---------------------------------------------------------------------------
# compute targets

def _end_element(E, op_name, F):
    return E.to_vector(_operator(F, op_name))


def c_values(args, F):
    A = F.algebra
    D = _operator(F, args.operator)
    vs = _vec_args(F, args)
    what = args.what
    try:
        if what == "gamma":
            return higherops.gamma(A, D, vs).describe()
        fn = {"psi": higherops.psi, "phi": higherops.phi, "unshuffle-sum": higherops.unshuffle_sum}[what]
        return str(fn(A, D, vs))
    except HypothesisViolation:
        raise
    except InvalidArgument as exc:
        raise Usage(str(exc)) from None


def c_brackets(args, F):
    setting = _setting(args, F)
    what = args.what
    if setting == "lie":
        L = F.lie
        if L is None:
            raise Usage("file has no 'lie' section")
        labs = _labels(args.args, L.basis)
        vs = [L.vec(x) for x in labs]
        if what == "c-bracket":
            d = _operator(F, args.differential or "d", "--differential")
            return str(derived.c_bracket(L, d, vs))
        if not args.operator or args.operator not in L.basis:
            raise Usage("--operator must name an element of L")
        delta = L.vec(args.operator)
        if what == "bv-bracket" and len(vs) != 2:
            raise Usage("bv-bracket takes exactly two arguments")
        return str(derived.b_bracket(L, delta, vs))
    if setting != "end":
        raise Usage("bracket targets need a unital algebra or a Lie file")
    E = derived.EndAlgebra(F.algebra)
    delta = _end_element(E, args.operator, F)
    labs = _labels(args.args, F.algebra.basis)
    ells = [E.ell(x) for x in labs]
    if what == "bv-bracket" and len(ells) != 2:
        raise Usage("bv-bracket takes exactly two arguments")
    if what == "c-bracket":
        if not ells:
            raise Usage("c-bracket needs at least one argument")
        val = derived.c_bracket(E.lie, E.lie.ad(delta), ells)
    else:
        val = derived.b_bracket(E.lie, delta, ells)
    at_one = E.to_op(val).on_basis(F.algebra.unit)
    return f"{val}\nat 1: {Vector(F.algebra.basis, at_one)}"


def c_cohomology(args, F):
    V = F.algebra
    if args.differential:
        _operator(F, args.differential, "--differential")
    C = cohomology.build_cohomology(V, args.differential)
    lines = [f"dim ker = {C.info['dim ker']}", f"dim im = {C.info['dim im']}",
             f"dim H = {C.info['dim H']}", "representatives:"]
    lines += [f"  {lab} = {v}" for lab, v in zip(C.basis.labels if C.basis else [], C.representatives)]
    return "\n".join(lines)


def c_order(args, F):
    A = F.algebra
    D = _operator(F, args.operator)
    entry = higherops.order_of(A, D, "phi", args.max)
    return str(entry)


def run_compute(args, F):
    if args.what in ("gamma", "psi", "phi", "unshuffle-sum"):
        return c_values(args, F)
    if args.what in ("b-bracket", "c-bracket", "bv-bracket"):
        return c_brackets(args, F)
    if args.what == "cohomology":
        return c_cohomology(args, F)
    return c_order(args, F)


# ---------------------------------------------------------------------------

def _write_json(path, doc):
    jsonschema.validate(doc, schema("report"))
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
                          encoding="utf-8")


def _error_doc(command, message, code):
    return {"command": command, "passed": False, "exit_code": code, "checks": [], "info": {},
            "timing": 0.0, "error": message}


def main(argv=None):
    parser = _parser()
    args = parser.parse_args(argv)
    command = " ".join(["dbrackets"] + list(argv if argv is not None else sys.argv[1:]))
    try:
        F = load_algebra(args.algebra)
        if args.command == "verify":
            report = VERIFY[args.subject](args, F)
            if not report.timing:
                report.finish()
            report.command = command
            print(report.summary())
            if args.json:
                _write_json(args.json, report.to_json())
            return report.exit_code
        text = run_compute(args, F)
        print(text)
        if args.json:
            doc = Report(command).finish().to_json()
            doc["passed"], doc["exit_code"] = True, 0
            doc["info"] = {"result": text}
            _write_json(args.json, doc)
        return 0
    except (MalformedInput, Usage, InvalidArgument) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.json:
            _write_json(args.json, _error_doc(command, str(exc), 2))
        return 2
    except HypothesisViolation as exc:
        print(f"hypothesis-violation: {exc}", file=sys.stderr)
        if args.json:
            doc = _error_doc(command, str(exc), 1)
            doc["checks"] = [{"name": f"hypothesis {exc.condition}", "status": "hypothesis-violation",
                              "witness": _jsonable(exc.witness), "detail": {}}]
            _write_json(args.json, doc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
