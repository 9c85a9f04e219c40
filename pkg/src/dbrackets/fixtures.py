"""Shipped fixtures, built programmatically.

The JSON copies under ``fixtures/`` are generated from these builders
(``python -m dbrackets.fixtures``) and loaded by the CLI.
"""

from __future__ import annotations

import itertools
from pathlib import Path

from .algebra import AlgebraSpec, LieSpec, left_mult
from .gradedcore import GradedBasis, MultilinearMap, compose

__all__ = [
    "monomial_algebra", "partial", "fix_a", "fix_b", "fix_c", "fix_d", "fix_d_nonassociative",
    "fix_d_dga", "fix_e", "fix_bv", "semidirect_fixture", "direct_sum_fixture", "cartan_fixture",
    "FIXTURE_DIR", "ALL_FIXTURES", "write_json_fixtures",
]

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def _label(gens, exps):
    parts = []
    for (name, _, _), e in zip(gens, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}{e}")
    return "".join(parts) or "1"


def _monomials(gens):
    ranges = [range(top + 1) for _, _, top in gens]
    mons = list(itertools.product(*ranges))
    mons.sort(key=lambda e: (tuple(reversed(e))))
    return mons


def monomial_algebra(gens, name=None) -> AlgebraSpec:
    """Free supercommutative algebra on ``gens`` truncated by exponent bounds.

    ``gens`` is a list of (name, degree, max_exponent); odd generators must
    have max_exponent 1.  Monomials are ordered by the exponent of the last
    generator first, so ℚ[x]/(x³)⊗Λ(θ) lists 1, x, x2, theta, xtheta, x2theta.
    """
    for g, deg, top in gens:
        if deg & 1 and top > 1:
            raise ValueError(f"odd generator {g} squares to zero")
    mons = _monomials(gens)
    labels = [_label(gens, e) for e in mons]
    lookup = dict(zip(mons, labels))
    degree = {lookup[e]: sum(d * k for (_, d, _), k in zip(gens, e)) for e in mons}
    basis = GradedBasis(labels, degree)
    parity = [d & 1 for _, d, _ in gens]
    entries = {}
    for e1, e2 in itertools.product(mons, repeat=2):
        e = tuple(a + b for a, b in zip(e1, e2))
        if e not in lookup:
            continue
        # move each odd factor of the right monomial past the odd factors of
        # the left monomial sitting after it
        swaps = sum(e2[i] * e1[j] for i in range(len(gens)) for j in range(i + 1, len(gens))
                    if parity[i] and parity[j])
        entries[lookup[e1], lookup[e2]] = {lookup[e]: -1 if swaps & 1 else 1}
    product = MultilinearMap(2, basis, basis, entries, 0)
    A = AlgebraSpec(basis, product, "1", name=name)
    A._generators = list(gens)
    A._exponents = {lookup[e]: e for e in mons}
    return A


def partial(A: AlgebraSpec, generator) -> MultilinearMap:
    """Left graded derivative ∂/∂g on a monomial algebra."""
    gens = A._generators
    k = [g for g, _, _ in gens].index(generator)
    gdeg = gens[k][1]
    inverse = {e: lab for lab, e in A._exponents.items()}
    entries = {}
    for lab, e in A._exponents.items():
        if e[k] == 0:
            continue
        before = sum(gens[i][1] * e[i] for i in range(k))
        sign = -1 if (gdeg & 1 and before & 1) else 1
        f = list(e)
        f[k] -= 1
        entries[(lab,)] = {inverse[tuple(f)]: sign * e[k]}
    return MultilinearMap(1, A.basis, A.basis, entries, -gdeg)


def fix_a() -> AlgebraSpec:
    """ℚ[x]/(x⁴), all even, with D1 = d/dx, D2 = d²/dx², Lx = ℓ_x."""
    A = monomial_algebra([("x", 0, 3)], name="FIX-A")
    d = partial(A, "x")
    return A.with_operators(D1=d, D2=compose(d, d), Lx=left_mult(A, A.vec("x")))


def fix_b() -> AlgebraSpec:
    """Λ(θ₁, θ₂) with odd generators; D1 = ∂θ₁, D2 = ∂θ₂, Delta = ∂θ₁∂θ₂."""
    A = monomial_algebra([("theta1", 1, 1), ("theta2", 1, 1)], name="FIX-B")
    d1, d2 = partial(A, "theta1"), partial(A, "theta2")
    return A.with_operators(D1=d1, D2=d2, Delta=compose(d1, d2))


def fix_c() -> AlgebraSpec:
    """ℚ[x]/(x³)⊗Λ(θ) with Delta = ∂x∂θ."""
    A = monomial_algebra([("x", 0, 2), ("theta", 1, 1)], name="FIX-C")
    dx, dt = partial(A, "x"), partial(A, "theta")
    return A.with_operators(Delta=compose(dx, dt), Dx=dx, Dtheta=dt)


def fix_e() -> AlgebraSpec:
    """FIX-C with the differential Q = x∂θ added."""
    C = fix_c()
    Q = compose(left_mult(C, C.vec("x")), C.operator("Dtheta"))
    E = AlgebraSpec(C.basis, C.product, C.unit, dict(C.operators, Q=Q), name="FIX-E")
    return E


def fix_bv() -> AlgebraSpec:
    """Λ(θ₁, θ₂, θ₃) with the odd, square-zero, order-2 operator Delta = θ₃∂θ₁∂θ₂."""
    A = monomial_algebra([("t1", 1, 1), ("t2", 1, 1), ("t3", 1, 1)], name="FIX-BV")
    d1, d2 = partial(A, "t1"), partial(A, "t2")
    delta = compose(left_mult(A, A.vec("t3")), compose(d1, d2))
    return A.with_operators(Delta=delta, D1=d1, D2=d2)


_MATRIX_UNITS = ("E11", "E12", "E22")


def _matrix_product():
    table = {}
    for a, b in itertools.product(_MATRIX_UNITS, repeat=2):
        if a[2] == b[1]:
            c = f"E{a[1]}{b[2]}"
            table[a, b] = {c: 1}
    return table


def fix_d() -> AlgebraSpec:
    """Upper-triangular 2×2 matrices on the matrix units E11, E12, E22."""
    basis = GradedBasis(_MATRIX_UNITS)
    return AlgebraSpec(basis, MultilinearMap(2, basis, basis, _matrix_product()), name="FIX-D")


def fix_d_nonassociative() -> AlgebraSpec:
    """FIX-D with E11·E12 = 2E12, which breaks associativity."""
    basis = GradedBasis(_MATRIX_UNITS)
    table = _matrix_product()
    table["E11", "E12"] = {"E12": 2}
    return AlgebraSpec(basis, MultilinearMap(2, basis, basis, table), name="FIX-D-mutated")


def fix_d_dga() -> AlgebraSpec:
    """FIX-D graded by |E12| = 1 with the inner differential d = [E12, −]."""
    basis = GradedBasis(_MATRIX_UNITS, {"E11": 0, "E12": 1, "E22": 0})
    d = MultilinearMap(1, basis, basis, {("E11",): {"E12": -1}, ("E22",): {"E12": 1}}, 1)
    return AlgebraSpec(basis, MultilinearMap(2, basis, basis, _matrix_product()),
                       operators={"d": d}, name="FIX-D-dga")


def _lie(labels, degrees, table, name):
    basis = GradedBasis(labels, degrees)
    return LieSpec(basis, MultilinearMap(2, basis, basis, table, 0), name=name)


def semidirect_fixture():
    """L₀ = ⟨u, v⟩ abelian (|u| = 0, |v| = 1), L₁ = ⟨D⟩ odd with D·u = v.

    Returns (L, d, l0_labels) where d = ad(D).
    """
    from .derived import semidirect_sum

    L0 = _lie(["u", "v"], {"u": 0, "v": 1}, {}, "L0")
    L1 = _lie(["D"], {"D": 1}, {}, "L1")
    act = MultilinearMap(1, L0.basis, L0.basis, {("u",): {"v": 1}}, 1)
    L = semidirect_sum(L0, L1, {"D": act}, name="semidirect")
    return L, L.ad(L.vec("D")), ["u", "v"]


def direct_sum_fixture():
    """L₀ = ⟨u, v⟩ abelian ⊕ L₁ = ⟨p, q⟩ with [p, q] = q, and d: u ↦ v, p ↦ q."""
    labels = ["u", "v", "p", "q"]
    degrees = {"u": 0, "v": 1, "p": 0, "q": 1}
    table = {("p", "q"): {"q": 1}, ("q", "p"): {"q": -1}}
    L = _lie(labels, degrees, table, "direct-sum")
    d = MultilinearMap(1, L.basis, L.basis, {("u",): {"v": 1}, ("p",): {"q": 1}}, 1)
    return L, d, ["u", "v"]


def cartan_fixture():
    """ι_g ⋊ ℒ_g for g = ⟨X, Y⟩, [X, Y] = Y, with d(ι_X) = ℒ_X.

    ι has degree −1 and is an abelian ideal; the derived bracket on ι_g is
    ι_{[X,Y]}.  Returns (L, d, l0_labels).
    """
    from .derived import semidirect_sum

    L0 = _lie(["iX", "iY"], {"iX": -1, "iY": -1}, {}, "iota")
    L1 = _lie(["LX", "LY"], {"LX": 0, "LY": 0},
              {("LX", "LY"): {"LY": 1}, ("LY", "LX"): {"LY": -1}}, "lie")
    act = {
        "LX": MultilinearMap(1, L0.basis, L0.basis, {("iY",): {"iY": 1}}, 0),
        "LY": MultilinearMap(1, L0.basis, L0.basis, {("iX",): {"iY": -1}}, 0),
    }
    L = semidirect_sum(L0, L1, act, name="cartan")
    d = MultilinearMap(1, L.basis, L.basis, {("iX",): {"LX": 1}, ("iY",): {"LY": 1}}, 1)
    return L, d, ["iX", "iY"]


ALL_FIXTURES = {
    "fix_a": fix_a, "fix_b": fix_b, "fix_c": fix_c, "fix_d": fix_d,
    "fix_d_mutated": fix_d_nonassociative, "fix_d_dga": fix_d_dga, "fix_e": fix_e,
    "fix_bv": fix_bv,
}

LIE_FIXTURES = {
    "semidirect": semidirect_fixture, "direct_sum": direct_sum_fixture, "cartan": cartan_fixture,
}


def write_json_fixtures(directory=FIXTURE_DIR):
    from .jsonio import dump_algebra, dump_lie, write_json

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, build in ALL_FIXTURES.items():
        write_json(directory / f"{name}.json", dump_algebra(build()))
    for name, build in LIE_FIXTURES.items():
        L, d, l0 = build()
        write_json(directory / f"{name}.json", dump_lie(L, {"d": d}, l0))


if __name__ == "__main__":
    write_json_fixtures()
