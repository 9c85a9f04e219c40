import random
from fractions import Fraction
from itertools import product

import pytest

from dbrackets.algebra import left_mult
from dbrackets.derived import EndAlgebra, b_bracket, c_bracket
from dbrackets.errors import HypothesisViolation, InvalidArgument, MissingUnit
from dbrackets.fixtures import fix_a, fix_b, fix_bv, fix_c, fix_d
from dbrackets.gradedcore import compose, graded_commutator, random_operator
from dbrackets.higherops import (
    Tower, gamma, operator_order_report, order_of, phi, psi, unshuffle_sum, verify_equivalence,
    verify_order_calculus,
)

from oracles import Poly, unshuffle_expansion

POLYS = {
    "FIX-A": Poly([("x", 0, 3)]),
    "FIX-B": Poly([("theta1", 1, 1), ("theta2", 1, 1)]),
    "FIX-C": Poly([("x", 0, 2), ("theta", 1, 1)]),
}
BUILDERS = {"FIX-A": fix_a, "FIX-B": fix_b, "FIX-C": fix_c}


def _as_function(P, D):
    """Package operator → function on oracle polynomials (reads only its matrix)."""
    by_label = {P.label(e): e for e in P.monomials()}

    def f(p):
        out = {}
        for e, c in p.items():
            for lab, v in D.on_basis(P.label(e)).items():
                out[by_label[lab]] = out.get(by_label[lab], 0) + c * v
        return {k: v for k, v in out.items() if v}
    return f


# -- Γ -----------------------------------------------------------------------------

def test_gamma_with_no_arguments_is_the_operator():
    A = fix_a()
    assert gamma(A, A.operator("D2"), []) == A.operator("D2")


def test_gamma_of_left_multiplication_vanishes():
    A = fix_c()
    assert gamma(A, left_mult(A, A.vec("x")), [A.vec("theta")]).is_zero()


def test_gamma_second_derivative_x_x_on_truncated_line():
    # 2 on 1 and x; the truncation changes the x² and x³ columns
    A = fix_a()
    g = gamma(A, A.operator("D2"), [A.vec("x"), A.vec("x")])
    assert {lab: g.on_basis(lab) for lab in A.basis.labels} == {
        "1": {"1": 2}, "x": {"x": 2}, "x2": {"x2": -10}, "x3": {"x3": 6}}
    assert g(A.one()) == A.one() * 2


def test_gamma_needs_unit():
    A = fix_d()
    with pytest.raises(MissingUnit):
        gamma(A, A.product.__class__(1, A.basis, A.basis, {}), [])


# -- Ψ and Φ --------------------------------------------------------------------------

def test_psi_arity_one_even_case():
    A = fix_a()
    D = A.operator("Lx") + A.operator("D2")
    a = A.vec("x2")
    assert psi(A, D, [a]) == D(a) - A.mul(a, D(A.one()))


def test_psi_arity_one_graded_case():
    A = fix_c()
    D = left_mult(A, A.vec("theta")) + A.operator("Dtheta") * 0
    a = A.vec("theta")
    # Δ(a) − (−1)^{|Δ||a|} a Δ(1) with |Δ| = |a| = 1
    assert psi(A, D, [a]) == D(a) + A.mul(a, D(A.one()))
    assert not psi(A, D, [a])


def test_psi_of_derivation_vanishes_beyond_arity_one():
    A = fix_b()
    D = A.operator("D1")
    for r in (2, 3):
        for labels in product(A.basis.labels, repeat=r):
            assert not psi(A, D, [A.vec(x) for x in labels])


@pytest.mark.parametrize("fn", [psi, phi, unshuffle_sum])
def test_second_derivative_x_x_is_two(fn):
    A = fix_a()
    assert str(fn(A, A.operator("D2"), [A.vec("x"), A.vec("x")])) == "2·1"


def test_phi_arity_one_matches_psi():
    A = fix_c()
    for name in A.operators:
        D = A.operator(name)
        for lab in A.basis.labels:
            assert phi(A, D, [A.vec(lab)]) == psi(A, D, [A.vec(lab)])


def test_phi_of_unit_argument_vanishes():
    A = fix_a()
    assert not phi(A, A.operator("D2"), [A.one()])


def test_phi_needs_arguments():
    A = fix_a()
    with pytest.raises(InvalidArgument):
        phi(A, A.operator("D1"), [])


def test_phi_x_theta_on_mixed_fixture():
    A = fix_c()
    assert str(phi(A, A.operator("Delta"), [A.vec("x"), A.vec("theta")])) == "1·1"
    P = POLYS["FIX-C"]
    oracle = unshuffle_expansion(P, _as_function(P, A.operator("Delta")),
                                 [(1, 0), (0, 1)], 1)
    assert P.as_labels(oracle) == {"1": 1}


def test_psi_rejects_noncommutative_algebra():
    A = fix_d()
    with pytest.raises(HypothesisViolation):
        psi(A, A.product.__class__(1, A.basis, A.basis, {}), [A.vec("E11")])


@pytest.mark.parametrize("fixture", ["FIX-A", "FIX-B", "FIX-C"])
def test_tower_matches_term_expansion_oracle(fixture):
    A = BUILDERS[fixture]()
    P = POLYS[fixture]
    rng = random.Random(11)
    degrees = sorted({A.basis.degree(b) - A.basis.degree(a)
                      for a in A.basis.labels for b in A.basis.labels})
    for trial in range(3):
        D = random_operator(A.basis, rng.choice(degrees), rng)
        f = _as_function(P, D)
        tower = Tower(A, D)
        mons = {P.label(e): e for e in P.monomials()}
        for r in (1, 2, 3):
            for labels in product(A.basis.labels, repeat=r):
                want = P.as_labels(unshuffle_expansion(P, f, [mons[x] for x in labels], D.degree))
                assert tower.phi(labels) == want
                assert tower.psi(labels) == want


# -- orders -------------------------------------------------------------------------------

def test_left_multiplication_has_order_zero():
    A = fix_c()
    assert order_of(A, left_mult(A, A.vec("x2"))).order == 0


def test_zero_operator_has_order_minus_one():
    A = fix_a()
    assert order_of(A, A.operator("Lx") * 0).order == -1


@pytest.mark.parametrize("fixture, op, order", [
    ("FIX-A", "D1", 4), ("FIX-A", "D2", 5), ("FIX-A", "Lx", 0),
    ("FIX-B", "D1", 1), ("FIX-B", "D2", 1), ("FIX-B", "Delta", 2),
    ("FIX-C", "Delta", 4), ("FIX-C", "Dx", 3), ("FIX-C", "Dtheta", 1),
])
def test_orders_match_oracle(fixture, op, order):
    # the truncated polynomial fixtures raise the order of x-derivatives:
    # Φ^{k+1} ≠ 0 until k reaches the truncation length
    A = BUILDERS[fixture]()
    rep = operator_order_report(A, A.operator(op), op)
    assert (rep.order_gamma, rep.order_psi, rep.order_phi) == (order,) * 3


def test_d_dx_order_witness_on_truncated_line():
    A = fix_a()
    entry = order_of(A, A.operator("D1"))
    assert entry.order == 4
    assert entry.witness == ["x", "x", "x", "x"]
    assert str(entry) == "order = 4"


def test_bv_operator_has_order_two():
    A = fix_bv()
    assert order_of(A, A.operator("Delta")).order == 2


def test_order_search_cap_reported():
    A = fix_a()
    entry = order_of(A, A.operator("D2"), max_r=2)
    assert entry.order is None and str(entry) == "order >= 2"


@pytest.mark.parametrize("fixture", ["FIX-A", "FIX-B", "FIX-C"])
def test_order_recursion_through_commutators(fixture):
    # order(Δ) ≤ k ⇔ order([Δ, ℓ_a]) ≤ k − 1 for every basis a
    A = BUILDERS[fixture]()
    for name, D in A.operators.items():
        k = order_of(A, D).order
        subs = [order_of(A, graded_commutator(D, left_mult(A, A.vec(a)))).order
                for a in A.basis.labels]
        assert max(subs) == k - 1 if k > 0 else all(s == -1 for s in subs)


# -- symmetry --------------------------------------------------------------------------------

@pytest.mark.parametrize("fixture", ["FIX-B", "FIX-C"])
def test_phi_is_graded_symmetric(fixture):
    A = BUILDERS[fixture]()
    for name, D in A.operators.items():
        tower = Tower(A, D)
        for a, b, c in product(A.basis.labels, repeat=3):
            v = tower.phi((a, b, c))
            w = tower.phi((b, a, c))
            s = -1 if A.basis.degree(a) % 2 and A.basis.degree(b) % 2 else 1
            assert v == {k: s * c_ for k, c_ in w.items()}


# -- equivalence -----------------------------------------------------------------------------

def test_equivalence_second_derivative_max_four():
    A = fix_a()
    rep = verify_equivalence(A, A.operator("D2"), 4)
    assert rep.passed and len(rep.checks) == 4


def test_equivalence_graded_case():
    A = fix_b()
    assert verify_equivalence(A, A.operator("D1"), 3).passed


def test_equivalence_rejects_noncommutative_fixture():
    A = fix_d()
    with pytest.raises(HypothesisViolation) as exc:
        verify_equivalence(A, A.product.__class__(1, A.basis, A.basis, {}), 2)
    assert exc.value.condition == "commutative"


def test_equivalence_detects_a_broken_definition():
    # sanity check of the verifier: corrupt one memoized Φ value
    A = fix_a()
    tower = Tower(A, A.operator("D2"))
    tower._phi[("x", "x")] = {"1": Fraction(3)}
    assert tower.phi(("x", "x")) != tower.gamma1(("x", "x"))


# -- order calculus --------------------------------------------------------------------------

def test_order_calculus_on_truncated_line():
    A = fix_a()
    rep = verify_order_calculus(A, dict(A.operators))
    assert rep.passed
    assert rep.info["orders"] == {"D1": 4, "D2": 5, "Lx": 0}


def test_even_self_commutator_is_zero():
    A = fix_a()
    d = A.operator("D1")
    assert graded_commutator(d, d).is_zero()
    assert order_of(A, graded_commutator(d, d)).order == -1


def test_lx_d_dx_commutator_on_truncated_line():
    # −1 on 1, x, x² and +3 on x³: not a left multiplication, order 3
    A = fix_a()
    c = graded_commutator(A.operator("Lx"), A.operator("D1"))
    assert {lab: c.on_basis(lab) for lab in A.basis.labels} == {
        "1": {"1": -1}, "x": {"x": -1}, "x2": {"x2": -1}, "x3": {"x3": 3}}
    assert order_of(A, c).order == 3


def test_composition_orders_on_truncated_line():
    A = fix_a()
    d1, d2 = A.operator("D1"), A.operator("D2")
    assert order_of(A, compose(d2, d1), max_r=9).order == 6
    assert order_of(A, compose(d1, d1), max_r=8).order == 5


def test_composition_bounds_on_exterior_algebra():
    A = fix_b()
    rep = verify_order_calculus(A, dict(A.operators))
    assert rep.passed
    assert rep.info["orders"] == {"D1": 1, "D2": 1, "Delta": 2}


# -- the chain Φ = Ψ = Γ(…)1 = B^r(ℓ…)1 = C^r_{ad T}(ℓ…)1 -----------------------------------

@pytest.mark.parametrize("builder, op", [(fix_a, "D2"), (fix_c, "Delta"), (fix_bv, "Delta")])
def test_bracket_chain_through_end_algebra(builder, op):
    A = builder()
    E = EndAlgebra(A)
    T = A.operator(op)
    delta = E.to_vector(T)
    adT = E.lie.ad(delta)
    tower = Tower(A, T)
    for r in (1, 2, 3):
        for labels in product(A.basis.labels, repeat=r):
            ells = [E.ell(x) for x in labels]
            bval = E.to_op(b_bracket(E.lie, delta, ells)).on_basis(A.unit)
            cval = E.to_op(c_bracket(E.lie, adT, ells)).on_basis(A.unit)
            want = tower.phi(labels)
            assert bval == cval == want == tower.psi(labels) == tower.gamma1(labels)
