from fractions import Fraction
from itertools import product

import pytest

from dbrackets.algebra import LieSpec, is_derivation, left_mult
from dbrackets.derived import (
    DerivedBracketConfig, EndAlgebra, SplitLie, adjoin_derivation, b_bracket, c_bracket,
    derivation_failures, element_order, ks_derived_bracket, restrict_bracket, semidirect_sum,
    verify_cross_construction, verify_derived_lie, voronov_family,
)
from dbrackets.errors import BasisMismatch, HypothesisViolation, InvalidArgument
from dbrackets.fixtures import (
    cartan_fixture, direct_sum_fixture, fix_a, fix_bv, fix_c, fix_d, fix_e, semidirect_fixture,
)
from dbrackets.gradedcore import GradedBasis, MultilinearMap, graded_commutator, solve_coords
from dbrackets.higherops import Tower
from dbrackets.hochschild import HochschildComplex
from dbrackets.shlie import check_linfty

from oracles import Poly, unshuffle_expansion


@pytest.fixture(scope="module")
def end_a():
    return EndAlgebra(fix_a())


@pytest.fixture(scope="module")
def end_bv():
    return EndAlgebra(fix_bv())


@pytest.fixture(scope="module")
def end_c():
    return EndAlgebra(fix_c())


def _abelian(labels, degrees, name):
    B = GradedBasis(labels, degrees)
    return LieSpec(B, MultilinearMap(2, B, B, {}), name=name)


# -- End(A) -----------------------------------------------------------------------------

def test_end_algebra_round_trips_operators(end_c):
    A = end_c.A
    for name, T in A.operators.items():
        assert end_c.to_op(end_c.to_vector(T)) == T


def test_end_algebra_dimension(end_a, end_bv):
    assert len(end_a.basis) == 4 * 4
    assert len(end_bv.basis) == 8 * 8


def test_end_algebra_ell_labels_span_centroid(end_c):
    A = end_c.A
    for a in A.basis.labels:
        assert end_c.to_op(end_c.ell(a)) == left_mult(A, A.vec(a))


def test_split_projection_is_idempotent(end_c):
    S = end_c.split
    P = S.projection
    assert P.compose(P) == P
    for lab in S.l0_labels:
        assert P(S.lift(lab)) == S.lift(lab)
    for lab in S.l1_labels:
        assert not P(S.lift(lab))


def test_split_rejects_unknown_labels(end_c):
    with pytest.raises(BasisMismatch):
        SplitLie(end_c.lie, ["nope"])


def test_split_rejects_non_abelian_l0():
    L, _, _ = cartan_fixture()
    with pytest.raises(HypothesisViolation):
        SplitLie(L, ["LX", "LY"])


# -- B and C brackets -----------------------------------------------------------------------

def test_b_bracket_with_no_arguments_is_delta(end_bv):
    delta = end_bv.element_of("Delta")
    assert b_bracket(end_bv.lie, delta, []) == delta


def test_b_bracket_in_abelian_algebra_vanishes():
    L = _abelian(["a", "b"], {"a": 1, "b": 0}, "ab")
    assert not b_bracket(L, L.vec("a"), [L.vec("b")])


def test_c_bracket_of_inner_derivation_is_b_bracket(end_bv):
    E = end_bv
    delta = E.element_of("Delta")
    ad = E.lie.ad(delta)
    for r in (1, 2, 3):
        for labels in product(["t1", "t2", "t1t3"], repeat=r):
            ells = [E.ell(x) for x in labels]
            assert c_bracket(E.lie, ad, ells) == b_bracket(E.lie, delta, ells)


def test_c_bracket_with_zero_map_vanishes(end_bv):
    E = end_bv
    zero = MultilinearMap(1, E.basis, E.basis, {}, 1)
    assert not c_bracket(E.lie, zero, [E.ell("t1"), E.ell("t2")])


def test_c_bracket_needs_an_argument(end_bv):
    with pytest.raises(InvalidArgument):
        c_bracket(end_bv.lie, end_bv.lie.ad(end_bv.ell("t1")), [])


def test_c_bracket_of_ad_q_matches_gamma_values():
    A = fix_e()
    E = EndAlgebra(A)
    adq = E.lie.ad(E.element_of("Q"))
    tower = Tower(A, A.operator("Q"))
    for labels in product(A.basis.labels, repeat=2):
        val = c_bracket(E.lie, adq, [E.ell(x) for x in labels])
        assert E.to_op(val).on_basis(A.unit) == tower.gamma1(labels)


# -- signed derived bracket ------------------------------------------------------------------

def _degree_minus_one_lie():
    # |a| = 0, |b| = 1, |c| = 0, bracket of degree −1 with [a, b] = c
    B = GradedBasis(["a", "b", "c"], {"a": 0, "b": 1, "c": 0})
    br = MultilinearMap(2, B, B, {("a", "b"): {"c": 1}, ("b", "a"): {"c": -1}}, -1)
    return LieSpec(B, br)


def test_ks_sign_for_degree_minus_one_bracket_and_even_argument():
    L = _degree_minus_one_lie()
    d = MultilinearMap(1, L.basis, L.basis, {("a",): {"a": 1}}, 0)
    assert ks_derived_bracket(L, d, L.vec("a"), L.vec("b"), check=False) == L.bracket(L.vec("a"), L.vec("b"))


def test_ks_sign_for_degree_zero_bracket_and_even_argument(end_bv):
    E = end_bv
    d = E.lie.ad(E.element_of("Delta"))
    a, b = E.ell("t1t2"), E.ell("t1")
    assert ks_derived_bracket(E.lie, d, a, b) == -E.lie.bracket(d(a), b)


def test_ks_bracket_vanishes_when_da_is_zero(end_bv):
    E = end_bv
    d = E.lie.ad(E.element_of("Delta"))
    assert not d(E.ell("1"))
    assert not ks_derived_bracket(E.lie, d, E.ell("1"), E.ell("t1"))


def test_ks_bracket_of_x_theta_in_end_of_mixed_fixture(end_c):
    # [ℓ_x, ℓ_θ]_d = (−1)^{0+0+1}[[Δ, ℓ_x], ℓ_θ]; at 1 this is −Φ²(x, θ)
    E, A = end_c, end_c.A
    d = E.lie.ad(E.element_of("Delta"))
    val = ks_derived_bracket(E.lie, d, E.ell("x"), E.ell("theta"))
    assert E.to_op(val).on_basis(A.unit) == {"1": -1}
    P = Poly([("x", 0, 2), ("theta", 1, 1)])
    delta = lambda p: P.deriv(P.deriv(p, "theta"), "x")
    assert P.as_labels(unshuffle_expansion(P, delta, [(1, 0), (0, 1)], 1)) == {"1": 1}


def test_ks_bracket_checks_hypotheses(end_a):
    d = end_a.lie.ad(end_a.element_of("D2"))
    with pytest.raises(HypothesisViolation) as exc:
        ks_derived_bracket(end_a.lie, d, end_a.ell("x"), end_a.ell("x"))
    assert exc.value.condition == "odd"


def test_derived_bracket_degree_shift():
    L, d, l0 = cartan_fixture()
    sub = restrict_bracket(L, d, l0)
    assert sub.degree == L.degree + 1
    for (a, b), out in sub.bracket_map.entries.items():
        for lab in out:
            assert sub.basis.degree(lab) == sub.basis.degree(a) + sub.basis.degree(b) + L.degree + 1


def test_derivation_failures_reports_each_hypothesis(end_a):
    d = end_a.lie.ad(end_a.element_of("D2"))
    conds = [c for c, _ in derivation_failures(end_a.lie, d)]
    assert conds == ["odd", "square-zero"]


# -- the derived Lie theorem -------------------------------------------------------------------

def test_derived_lie_on_semidirect_fixture():
    L, d, l0 = semidirect_fixture()
    rep = verify_derived_lie(L, d, l0)
    assert rep.passed
    assert [c.name for c in rep.checks] == [
        "(i) left Leibniz", "(ii) d derivation of derived bracket",
        "(iii) graded symmetry on L0", "(iii) Jacobi on L0"]
    assert rep.info["derived bracket vanishes on L0"] is True


def test_direct_sum_fixture_has_zero_derived_bracket():
    L, d, l0 = direct_sum_fixture()
    rep = verify_derived_lie(L, d, l0)
    assert rep.passed
    assert rep.info["derived bracket vanishes on L0"] is True
    assert rep.result.bracket_map.is_zero()


def test_cartan_fixture_derived_bracket_is_iota_of_bracket():
    L, d, l0 = cartan_fixture()
    rep = verify_derived_lie(L, d, l0)
    assert rep.passed
    assert rep.result.bracket_map.entries == {("iX", "iY"): {"iY": 1}, ("iY", "iX"): {"iY": -1}}
    LieSpec(rep.result.basis, rep.result.bracket_map)


def test_derived_lie_output_validates_as_lie_algebra(end_bv):
    E = end_bv
    rep = verify_derived_lie(E.lie, E.lie.ad(E.element_of("Delta")), E.l0_labels)
    assert rep.passed
    sub = rep.result
    LieSpec(sub.basis, sub.bracket_map)
    # |ℓ_t1| odd, so the sign is +1 and the value is ℓ of Φ²(t1, t2) = −t3
    assert sub.bracket_map.on_basis("L[t1]", "L[t2]") == {"L[t3]": -1}


def test_derived_lie_on_end_of_truncated_line_reports_hypotheses(end_a):
    # Δ = d²/dx² is even and [Δ, Δ] ≠ 0; the identities are still evaluated
    E = end_a
    rep = verify_derived_lie(E.lie, E.lie.ad(E.element_of("D2")), E.l0_labels)
    status = {c.name: c.status for c in rep.checks}
    assert status == {
        "hypothesis odd": "hypothesis-violation",
        "hypothesis square-zero": "hypothesis-violation",
        "(i) left Leibniz": "fail",
        "(ii) d derivation of derived bracket": "pass",
        "(iii) preconditions": "hypothesis-violation",
    }
    assert rep.check("(i) left Leibniz").witness["args"] == ["L[x]", "L[x]", "L[x]"]
    pre = rep.check("(iii) preconditions").witness
    assert pre["args"] == ["L[x]", "L[x]"]
    assert pre["value"] == "-2·L[1] + 12·E[x2,x2] + -4·E[x3,x3]"


def test_derived_lie_on_end_of_mixed_fixture(end_c):
    E = end_c
    rep = verify_derived_lie(E.lie, E.lie.ad(E.element_of("Delta")), E.l0_labels)
    assert rep.check("(i) left Leibniz").ok
    assert rep.check("(ii) d derivation of derived bracket").ok
    assert rep.check("(iii) preconditions").status == "hypothesis-violation"


# -- semidirect sums ----------------------------------------------------------------------------

def test_trivial_action_gives_direct_sum():
    L0 = _abelian(["a"], {"a": 0}, "L0")
    B1 = GradedBasis(["p", "q"])
    L1 = LieSpec(B1, MultilinearMap(2, B1, B1, {("p", "q"): {"q": 1}, ("q", "p"): {"q": -1}}))
    L = semidirect_sum(L0, L1, {})
    assert not L.bracket(L.vec("p"), L.vec("a"))
    assert L.bracket(L.vec("p"), L.vec("q")) == L.vec("q")


def test_scaling_action_gives_non_abelian_plane():
    L0 = _abelian(["a"], {"a": 0}, "L0")
    L1 = _abelian(["h"], {"h": 0}, "L1")
    act = {"h": MultilinearMap(1, L0.basis, L0.basis, {("a",): {"a": 1}})}
    L = semidirect_sum(L0, L1, act)
    assert L.bracket(L.vec("h"), L.vec("a")) == L.vec("a")
    assert L.bracket(L.vec("a"), L.vec("h")) == -L.vec("a")


def test_non_homomorphic_action_rejected():
    L0 = _abelian(["a"], {"a": 0}, "L0")
    B1 = GradedBasis(["p", "q"])
    L1 = LieSpec(B1, MultilinearMap(2, B1, B1, {("p", "q"): {"q": 1}, ("q", "p"): {"q": -1}}))
    act = {"q": MultilinearMap(1, L0.basis, L0.basis, {("a",): {"a": 1}})}
    with pytest.raises(HypothesisViolation) as exc:
        semidirect_sum(L0, L1, act)
    assert exc.value.condition == "homomorphism"
    assert exc.value.witness == {"pair": ["p", "q"]}


def test_multiplications_by_derivations_of_truncated_line():
    # ℓ_A ⋊ Der(A); Der(ℚ[x]/(x⁴)) is spanned by x^k d/dx for k = 1, 2, 3
    A = fix_a()
    d = A.operator("D1")
    ders = {f"x{k}d": left_mult(A, A.vec("x" if k == 1 else f"x{k}")).compose(d) for k in (1, 2, 3)}
    for D in ders.values():
        assert is_derivation(A, D)[0]
    names = list(ders)

    def flat(mm):
        return {(k, lab): c for k, out in mm.entries.items() for lab, c in out.items()}

    B1 = GradedBasis(names)
    table = {}
    for p, q in product(names, repeat=2):
        c = graded_commutator(ders[p], ders[q])
        sol = solve_coords([flat(ders[n]) for n in names], flat(c)) if not c.is_zero() else None
        if sol:
            table[p, q] = {n: s for n, s in zip(names, sol) if s}
    L1 = LieSpec(B1, MultilinearMap(2, B1, B1, table))
    l0_names = [f"l[{a}]" for a in A.basis.labels]
    L0 = _abelian(l0_names, {}, "ell")
    act = {}
    for n, D in ders.items():
        entries = {}
        for a in A.basis.labels:
            out = D.on_basis(a)
            if out:
                entries[(f"l[{a}]",)] = {f"l[{k}]": c for k, c in out.items()}
        act[n] = MultilinearMap(1, L0.basis, L0.basis, entries)
    L = semidirect_sum(L0, L1, act, name="diff1")
    assert len(L.basis) == 7
    assert table[("x1d", "x2d")] == {"x2d": 1}


# -- Voronov families ----------------------------------------------------------------------------

def test_voronov_family_on_end_of_bv_fixture(end_bv):
    E = end_bv
    fam = voronov_family(E.split, DerivedBracketConfig.inner(E.element_of("Delta")), 5)
    assert fam.nonzero_arities() == [1, 2]
    assert check_linfty(fam, 5).passed
    assert fam.bracket(2).on_basis("L[t1]", "L[t2]") == {"L[t3]": -1}


def test_voronov_family_brackets_are_phi_values(end_bv):
    E, A = end_bv, end_bv.A
    fam = voronov_family(E.split, DerivedBracketConfig.inner(E.element_of("Delta")), 3)
    tower = Tower(A, A.operator("Delta"))
    for labels in product(A.basis.labels, repeat=2):
        got = fam.bracket(2).on_basis(*(f"L[{x}]" for x in labels))
        assert got == {f"L[{k}]": c for k, c in tower.phi(labels).items()}


def test_voronov_rejects_even_operator(end_a):
    with pytest.raises(HypothesisViolation) as exc:
        voronov_family(end_a.split, DerivedBracketConfig.inner(end_a.element_of("D2")), 3)
    assert exc.value.condition == "odd"


def test_unchecked_voronov_family_on_truncated_line_has_high_arities(end_a):
    # the brackets are ℓ of Φ-values, which reach arity 5 on ℚ[x]/(x⁴)
    E, A = end_a, end_a.A
    fam = voronov_family(E.split, DerivedBracketConfig.inner(E.element_of("D2")), 5, check=False)
    assert fam.nonzero_arities() == [1, 2, 3, 4, 5]
    P = Poly([("x", 0, 3)])
    d2 = lambda p: P.deriv(P.deriv(p, "x"), "x")
    want = P.as_labels(unshuffle_expansion(P, d2, [(1,), (1,), (1,)], 0))
    assert fam.bracket(3).on_basis("L[x]", "L[x]", "L[x]") == {f"L[{k}]": c for k, c in want.items()}


def test_voronov_rejects_delta_in_l0(end_bv):
    E = end_bv
    with pytest.raises(HypothesisViolation) as exc:
        voronov_family(E.split, DerivedBracketConfig.inner(E.ell("t1")), 3)
    assert exc.value.condition == "strict"


def test_voronov_derivation_mode_matches_inner_mode_via_adjoined_derivation():
    L, d, l0 = semidirect_fixture()
    deriv = voronov_family(SplitLie(L, l0), DerivedBracketConfig.derivation(d), 4)
    star = adjoin_derivation(L, d, label="δ")
    inner = voronov_family(SplitLie(star, l0), DerivedBracketConfig.inner(star.vec("δ")), 4)
    assert deriv == inner
    assert deriv.nonzero_arities() == [1]


def test_voronov_modes_agree_on_cartan_fixture():
    L, d, l0 = cartan_fixture()
    deriv = voronov_family(SplitLie(L, l0), DerivedBracketConfig.derivation(d), 4)
    star = adjoin_derivation(L, d, label="δ")
    inner = voronov_family(SplitLie(star, l0), DerivedBracketConfig.inner(star.vec("δ")), 4)
    assert deriv == inner
    assert deriv.nonzero_arities() == [2]
    assert check_linfty(deriv, 4).passed


def test_element_order_of_bv_operator(end_bv):
    E = end_bv
    order, wit = element_order(E.lie, E.element_of("Delta"), [E.ell(a) for a in E.A.basis.labels])
    assert order == 2


def test_element_order_of_second_derivative(end_a):
    E = end_a
    order, _ = element_order(E.lie, E.element_of("D2"), [E.ell(a) for a in E.A.basis.labels])
    assert order == 5


def test_config_validation():
    with pytest.raises(InvalidArgument):
        DerivedBracketConfig("inner")
    with pytest.raises(InvalidArgument):
        DerivedBracketConfig("sideways", delta=1)


# -- BV bracket vs semidirect bracket ------------------------------------------------------------

def test_cross_construction_on_bv_fixture_with_associative_ambient(end_bv):
    E = end_bv
    rep = verify_cross_construction(E.lie, E.element_of("Delta"), E.l0_labels, associative=E.assoc)
    assert rep.passed
    assert rep.check("associative ambient").ok


def test_cross_construction_on_hochschild_complex():
    C = HochschildComplex.from_algebra(fix_d(), 3)
    rep = verify_cross_construction(C, C.product_element(), C.l0_basis())
    assert rep.passed
    assert rep.info["bracket table"] == {
        "E11,E12": {"E12": 1}, "E12,E11": {"E12": -1},
        "E12,E22": {"E12": 1}, "E22,E12": {"E12": -1}}


def test_cross_construction_on_direct_sum_is_zero():
    L, d, l0 = direct_sum_fixture()
    star = adjoin_derivation(L, d, label="δ")
    rep = verify_cross_construction(star, star.vec("δ"), l0)
    assert rep.passed
    assert rep.info["bracket table"] == {}


def test_cross_construction_on_cartan_fixture():
    L, d, l0 = cartan_fixture()
    star = adjoin_derivation(L, d, label="δ")
    rep = verify_cross_construction(star, star.vec("δ"), l0)
    assert rep.passed
    assert rep.info["bracket table"] == {"iX,iY": {"iY": 1}, "iY,iX": {"iY": -1}}


def test_cross_construction_on_truncated_line_fails_containment(end_a):
    E = end_a
    with pytest.raises(HypothesisViolation) as exc:
        verify_cross_construction(E.lie, E.element_of("D2"), E.l0_labels, associative=E.assoc)
    assert exc.value.witness["args"] == ["L[x]", "L[x]"]
