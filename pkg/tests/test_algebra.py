import random
from fractions import Fraction
from itertools import product

import pytest

from dbrackets.algebra import (
    AlgebraSpec, LieSpec, check_properties, commutator_bracket, diff1_split, end_decompose,
    is_associative, is_derivation, left_mult, lie_failures,
)
from dbrackets.errors import BasisMismatch, HypothesisViolation, MissingUnit, NotFirstOrder
from dbrackets.fixtures import fix_a, fix_b, fix_c, fix_d, fix_d_nonassociative
from dbrackets.gradedcore import GradedBasis, MultilinearMap, graded_commutator, identity_map

from oracles import Poly


def _table_mul(table, x, y):
    out = {}
    for a, ca in x.items():
        for b, cb in y.items():
            for c, v in table.get((a, b), {}).items():
                out[c] = out.get(c, 0) + ca * cb * v
    return {k: v for k, v in out.items() if v}


def _sub(x, y):
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def _random_product(seed, labels=("a", "b", "c")):
    rng = random.Random(seed)
    B = GradedBasis(labels)
    entries = {}
    for x, y in product(labels, repeat=2):
        out = {z: rng.randint(-1, 1) for z in labels}
        out = {k: v for k, v in out.items() if v}
        if out:
            entries[x, y] = out
    return AlgebraSpec(B, MultilinearMap(2, B, B, entries), name=f"random{seed}")


# -- structure and properties -----------------------------------------------------

def test_truncated_line_has_all_flags():
    p = check_properties(fix_a())
    assert p.commutative and p.associative and p.left_pre_lie and p.pre_lie and p.unital


def test_matrix_fixture_is_associative_not_commutative():
    p = check_properties(fix_d())
    assert p.associative and not p.commutative
    assert not p.unital
    assert p.witnesses["commutative"] == ["E11", "E12"]


def test_exterior_algebra_is_graded_commutative():
    p = check_properties(fix_b())
    assert p.commutative and p.associative


def test_mutated_matrix_fixture_fails_associativity_with_witness():
    A = fix_d_nonassociative()
    ok, wit = is_associative(A)
    assert not ok and wit is not None
    assert not check_properties(A).associative


@pytest.mark.parametrize("seed", range(6))
def test_random_product_flags_match_brute_force(seed):
    A = _random_product(seed)
    t = A.product.entries
    labels = A.basis.labels

    def comm(x, y):
        return _sub(_table_mul(t, x, y), _table_mul(t, y, x))

    jacobi_ok = True
    for a, b, c in product(labels, repeat=3):
        va, vb, vc = {a: 1}, {b: 1}, {c: 1}
        total = {}
        for x, y, z in ((va, vb, vc), (vb, vc, va), (vc, va, vb)):
            for k, v in comm(x, comm(y, z)).items():
                total[k] = total.get(k, 0) + v
        if any(total.values()):
            jacobi_ok = False
    assoc_ok = all(_table_mul(t, _table_mul(t, {a: 1}, {b: 1}), {c: 1})
                   == _table_mul(t, {a: 1}, _table_mul(t, {b: 1}, {c: 1}))
                   for a, b, c in product(labels, repeat=3))
    p = check_properties(A)
    assert p.pre_lie == jacobi_ok
    assert p.associative == assoc_ok
    if not p.pre_lie:
        assert p.witnesses["pre_lie"] is not None


def test_unit_axiom_checked_on_load():
    B = GradedBasis(["e", "a"])
    bad = MultilinearMap(2, B, B, {("e", "e"): {"e": 1}, ("e", "a"): {"a": 1}})
    with pytest.raises(HypothesisViolation):
        AlgebraSpec(B, bad, unit="e")


def test_product_must_live_on_basis():
    B, C = GradedBasis(["a"]), GradedBasis(["b"])
    with pytest.raises(BasisMismatch):
        AlgebraSpec(B, MultilinearMap(2, C, C, {}))


# -- multiplication operators --------------------------------------------------------

def test_left_mult_by_unit_is_identity():
    A = fix_c()
    assert left_mult(A, A.one()) == identity_map(A.basis)


def test_left_mult_matches_polynomial_oracle():
    A = fix_c()
    P = Poly([("x", 0, 2), ("theta", 1, 1)])
    ell = left_mult(A, A.vec("theta"))
    for e in P.monomials():
        lab = P.label(e)
        assert ell.on_basis(lab) == P.as_labels(P.mul(P.mono("theta"), {e: Fraction(1)}))


def test_centroid_is_abelian_on_commutative_fixture():
    A = fix_c()
    for a, b in product(A.basis.labels, repeat=2):
        la, lb = left_mult(A, A.vec(a)), left_mult(A, A.vec(b))
        assert graded_commutator(la, lb).is_zero()


def test_ell_is_lie_homomorphism_on_matrix_fixture():
    A = fix_d()
    for a, b in product(A.basis.labels, repeat=2):
        la, lb = left_mult(A, A.vec(a)), left_mult(A, A.vec(b))
        ab_ba = A.mul(A.vec(a), A.vec(b)) - A.mul(A.vec(b), A.vec(a))
        assert graded_commutator(la, lb) == left_mult(A, ab_ba, degree=0)


# -- End(A) = ℓ_A ⊕ Ann(1) -------------------------------------------------------------

def test_end_decompose_of_left_multiplication():
    A = fix_a()
    lx = A.operator("Lx")
    lpart, rest = end_decompose(A, lx)
    assert lpart == lx and rest.is_zero()


def test_end_decompose_of_derivative_kills_one():
    A = fix_a()
    d = A.operator("D1")
    lpart, rest = end_decompose(A, d)
    assert lpart.is_zero() and rest == d


def test_end_decompose_is_linear():
    A = fix_a()
    T = A.operator("Lx") + A.operator("D1")
    lpart, rest = end_decompose(A, T)
    assert lpart == A.operator("Lx") and rest == A.operator("D1")
    assert lpart + rest == T
    assert not rest(A.one())


def test_end_decompose_needs_unit():
    A = fix_d()
    with pytest.raises(MissingUnit):
        end_decompose(A, identity_map(A.basis))


# -- derivations ----------------------------------------------------------------------

def test_d_dx_on_truncated_line_is_not_a_derivation():
    # d/dx does not preserve the ideal (x⁴): d(x·x³) = d(0) = 0 but the rule gives 4x³
    ok, wit = is_derivation(fix_a(), fix_a().operator("D1"))
    assert not ok
    assert wit == {"args": ["x", "x3"], "d(ab)": "0", "rule": "4·x3"}


def test_partial_derivatives_on_exterior_algebra_are_derivations():
    A = fix_b()
    assert is_derivation(A, A.operator("D1")) == (True, None)
    assert is_derivation(A, A.operator("D2")) == (True, None)


def test_odd_partial_on_mixed_fixture_is_a_derivation():
    A = fix_c()
    assert is_derivation(A, A.operator("Dtheta"))[0]


def test_left_multiplication_is_not_a_derivation():
    A = fix_a()
    ok, wit = is_derivation(A, A.operator("Lx"))
    assert not ok and wit["args"] == ["1", "1"]


def test_zero_map_is_a_derivation():
    A = fix_a()
    assert is_derivation(A, A.operator("Lx") * 0)[0]


def test_diff1_split_rejects_second_derivative_with_witness():
    A = fix_a()
    with pytest.raises(NotFirstOrder) as exc:
        diff1_split(A, A.operator("D2"))
    assert exc.value.witness == {"args": ["x", "x"], "value": "2·1"}


def test_diff1_split_rejects_truncated_first_derivative():
    # Φ²(x, x³) = d(x⁴) − d(x)x³ − x·d(x³) = −4x³
    A = fix_a()
    with pytest.raises(NotFirstOrder) as exc:
        diff1_split(A, A.operator("D1"))
    assert exc.value.witness == {"args": ["x", "x3"], "value": "-4·x3"}


def test_diff1_split_of_left_multiplication():
    A = fix_a()
    lpart, dpart = diff1_split(A, A.operator("Lx"))
    assert lpart == A.operator("Lx") and dpart.is_zero()


def test_diff1_split_on_exterior_algebra():
    A = fix_b()
    lpart, dpart = diff1_split(A, A.operator("D1"))
    assert lpart.is_zero() and dpart == A.operator("D1")


# -- Lie validation --------------------------------------------------------------------

def test_commutator_of_associative_product_is_lie():
    A = fix_d()
    br = commutator_bracket(A)
    LieSpec(A.basis, br)
    assert lie_failures(A.basis, br) == []


def test_non_lie_bracket_rejected_with_witness():
    B = GradedBasis(["a", "b"])
    br = MultilinearMap(2, B, B, {("a", "b"): {"a": 1}})
    with pytest.raises(HypothesisViolation) as exc:
        LieSpec(B, br)
    assert exc.value.condition == "antisymmetry"


def test_jacobi_failure_detected():
    B = GradedBasis(["a", "b", "c"])
    t = {("a", "b"): {"c": 1}, ("b", "a"): {"c": -1},
         ("a", "c"): {"a": 1}, ("c", "a"): {"a": -1},
         ("b", "c"): {"b": 1}, ("c", "b"): {"b": -1}}
    fails = lie_failures(B, MultilinearMap(2, B, B, t))
    assert fails and fails[0][0] == "jacobi"


def test_leibniz_flag_accepts_non_antisymmetric_leibniz_bracket():
    # [a, a] = b with b central: left Leibniz but not antisymmetric
    B = GradedBasis(["a", "b"])
    br = MultilinearMap(2, B, B, {("a", "a"): {"b": 1}})
    LieSpec(B, br, leibniz=True)
    with pytest.raises(HypothesisViolation):
        LieSpec(B, br)
