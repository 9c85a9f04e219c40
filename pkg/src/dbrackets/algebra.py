"""Finite-dimensional algebras and Lie algebras given by structure constants."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import BasisMismatch, HypothesisViolation, InvalidArgument, MissingUnit, NotFirstOrder
from .gradedcore import (
    GradedBasis, MultilinearMap, Vector, _axpy, _sign,
)

__all__ = [
    "AlgebraSpec", "LieSpec", "AlgebraProperties", "check_properties",
    "left_mult", "right_mult", "end_decompose", "diff1_split", "is_derivation",
    "lie_failures", "commutator_bracket", "is_associative",
]


class AlgebraSpec:
    """Graded algebra (A, m, 1) with optional named operators (Δ, d, Q, ...)."""

    def __init__(self, basis: GradedBasis, product: MultilinearMap, unit=None,
                 operators=None, name=None):
        if product.arity != 2 or product.source != basis or product.target != basis:
            raise BasisMismatch("product must be a bilinear map on the basis")
        if product.degree != 0:
            raise InvalidArgument("product must have degree 0")
        self.basis = basis
        self.product = product
        self.unit = unit
        self.name = name or "A"
        self.operators = dict(operators or {})
        for op_name, op in self.operators.items():
            if op.arity != 1 or op.source != basis or op.target != basis:
                raise BasisMismatch(f"operator {op_name!r} is not an endomorphism of the basis")
        if unit is not None:
            if unit not in basis:
                raise InvalidArgument(f"unit {unit!r} is not a basis label")
            if basis.degree(unit) != 0:
                raise InvalidArgument("unit must have degree 0")
            for lab in basis.labels:
                for out in (product.on_basis(unit, lab), product.on_basis(lab, unit)):
                    if out != {lab: 1}:
                        raise HypothesisViolation("unit", (unit, lab), "unit axiom fails")

    # -- products -----------------------------------------------------------
    def mul_coords(self, a: dict, b: dict) -> dict:
        acc: dict = {}
        ent = self.product.entries
        for ka, ca in a.items():
            for kb, cb in b.items():
                out = ent.get((ka, kb))
                if out:
                    _axpy(acc, ca * cb, out)
        return acc

    def mul(self, a: Vector, b: Vector) -> Vector:
        if a.basis != self.basis or b.basis != self.basis:
            raise BasisMismatch("factor not in this algebra")
        return Vector(self.basis, self.mul_coords(a.coords, b.coords), _trusted=True)

    def mul_many(self, vectors) -> Vector:
        out = self.one() if self.unit is not None else None
        for v in vectors:
            out = v if out is None else self.mul(out, v)
        if out is None:
            raise MissingUnit("empty product in a non-unital algebra")
        return out

    def one(self) -> Vector:
        if self.unit is None:
            raise MissingUnit()
        return self.basis.vector(self.unit)

    def require_unit(self):
        if self.unit is None:
            raise MissingUnit(f"algebra {self.name} has no unit")

    def vec(self, label, coeff=1) -> Vector:
        return self.basis.vector(label, coeff)

    def operator(self, name) -> MultilinearMap:
        try:
            return self.operators[name]
        except KeyError:
            raise InvalidArgument(f"algebra {self.name} has no operator {name!r}") from None

    def with_operators(self, **ops) -> AlgebraSpec:
        merged = dict(self.operators)
        merged.update(ops)
        out = AlgebraSpec(self.basis, self.product, self.unit, merged, self.name)
        # monomial metadata used by fixtures.partial
        for attr in ("_generators", "_exponents"):
            if hasattr(self, attr):
                setattr(out, attr, getattr(self, attr))
        return out

    @cached_property
    def properties(self) -> AlgebraProperties:
        return check_properties(self)

    def __eq__(self, other):
        if not isinstance(other, AlgebraSpec):
            return NotImplemented
        return (self.basis == other.basis and self.product == other.product
                and self.unit == other.unit and self.operators == other.operators)

    __hash__ = object.__hash__

    def __repr__(self):
        return f"AlgebraSpec({self.name}, dim={len(self.basis)})"


def lie_failures(basis: GradedBasis, bracket, degree=0, leibniz=False, labels=None,
                 stop_at_first=True):
    """Check graded antisymmetry and the left-Leibniz Jacobi identity.

    ``bracket`` is a bilinear MultilinearMap or a callable on Vectors.
    Shifted parities ā = |a| + degree are used, so a bracket of degree n is
    tested as

        [a,b] = −(−1)^{āb̄}[b,a]
        [a,[b,c]] = [[a,b],c] + (−1)^{āb̄}[b,[a,c]]

    Returns a list of (condition, witness) pairs; empty on success.
    """
    labels = list(labels or basis.labels)
    if isinstance(bracket, MultilinearMap):
        ent = bracket.entries

        def br(x: dict, y: dict) -> dict:
            acc: dict = {}
            for kx, cx in x.items():
                for ky, cy in y.items():
                    out = ent.get((kx, ky))
                    if out:
                        _axpy(acc, cx * cy, out)
            return acc
    else:
        def br(x: dict, y: dict) -> dict:
            return bracket(Vector(basis, x, _trusted=True), Vector(basis, y, _trusted=True)).coords

    def show(coords):
        return str(Vector(basis, coords, _trusted=True))

    shifted = {lab: basis.degree(lab) + degree for lab in labels}
    failures = []
    table = {}
    for a, b in itertools.product(labels, repeat=2):
        table[a, b] = br({a: 1}, {b: 1})
    if not leibniz:
        for a, b in itertools.product(labels, repeat=2):
            s = _sign(shifted[a] * shifted[b])
            lhs = table[a, b]
            rhs = {k: -s * c for k, c in table[b, a].items()}
            if lhs != rhs:
                failures.append(("antisymmetry", {"args": [a, b], "lhs": show(lhs), "rhs": show(rhs)}))
                if stop_at_first:
                    return failures
    for a, b, c in itertools.product(labels, repeat=3):
        bc, ab, ac = table[b, c], table[a, b], table[a, c]
        if not (bc or ab or ac):
            continue
        s = _sign(shifted[a] * shifted[b])
        lhs = br({a: 1}, bc) if bc else {}
        rhs = br(ab, {c: 1}) if ab else {}
        if ac:
            _axpy(rhs, s, br({b: 1}, ac))
        if lhs != rhs:
            failures.append(("jacobi", {"args": [a, b, c], "lhs": show(lhs), "rhs": show(rhs)}))
            if stop_at_first:
                return failures
    return failures


class LieSpec:
    """Graded Lie (or left Leibniz) algebra with a bracket of degree n.

    Validation runs on construction unless ``validate=False``; it is only
    skipped by internal constructors whose output is Lie by construction
    (for instance commutators in an endomorphism algebra).
    """

    def __init__(self, basis: GradedBasis, bracket: MultilinearMap, leibniz=False,
                 validate=True, name=None):
        if bracket.arity != 2 or bracket.source != basis or bracket.target != basis:
            raise BasisMismatch("bracket must be bilinear on the basis")
        self.basis = basis
        self.bracket_map = bracket
        self.degree = bracket.degree
        self.leibniz = leibniz
        self.name = name or "L"
        if validate:
            fails = lie_failures(basis, bracket, self.degree, leibniz)
            if fails:
                cond, wit = fails[0]
                raise HypothesisViolation(cond, wit, f"bracket fails {cond}")

    def bracket_coords(self, x: dict, y: dict) -> dict:
        acc: dict = {}
        ent = self.bracket_map.entries
        for kx, cx in x.items():
            for ky, cy in y.items():
                out = ent.get((kx, ky))
                if out:
                    _axpy(acc, cx * cy, out)
        return acc

    def bracket(self, x: Vector, y: Vector) -> Vector:
        if x.basis != self.basis or y.basis != self.basis:
            raise BasisMismatch("elements not in this Lie algebra")
        return Vector(self.basis, self.bracket_coords(x.coords, y.coords), _trusted=True)

    def ad(self, x: Vector) -> MultilinearMap:
        deg = x.degree()
        deg = (deg or 0) + self.degree
        return MultilinearMap.from_function(
            1, self.basis, self.basis, lambda b: self.bracket(x, self.basis.vector(b)), deg)

    def parity_of(self, x: Vector) -> int:
        d = x.degree()
        return 0 if d is None else d & 1

    def zero(self) -> Vector:
        return self.basis.zero()

    def vec(self, label, coeff=1) -> Vector:
        return self.basis.vector(label, coeff)

    def __repr__(self):
        return f"LieSpec({self.name}, dim={len(self.basis)}, degree={self.degree})"


def commutator_bracket(A: AlgebraSpec) -> MultilinearMap:
    """(a, b) ↦ m(a,b) − (−1)^{|a||b|} m(b,a)."""
    B = A.basis

    def br(a, b):
        acc = dict(A.product.on_basis(a, b))
        _axpy(acc, -_sign(B.degree(a) * B.degree(b)), A.product.on_basis(b, a))
        return acc

    return MultilinearMap.from_function(2, B, B, br, 0)


# ---------------------------------------------------------------------------
# properties

@dataclass
class AlgebraProperties:
    commutative: bool
    associative: bool
    left_pre_lie: bool
    right_pre_lie: bool
    pre_lie: bool
    unital: bool
    witnesses: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "commutative": self.commutative, "associative": self.associative,
            "left_pre_lie": self.left_pre_lie, "right_pre_lie": self.right_pre_lie,
            "pre_lie": self.pre_lie, "unital": self.unital,
            "witnesses": self.witnesses,
        }


def _associator_witness(A: AlgebraSpec):
    labels = A.basis.labels
    ent = A.product.entries
    mul = A.mul_coords
    show = lambda c: str(Vector(A.basis, c, _trusted=True))  # noqa: E731
    for a, b, c in itertools.product(labels, repeat=3):
        ab, bc = ent.get((a, b)), ent.get((b, c))
        lhs = mul(ab, {c: 1}) if ab else {}
        rhs = mul({a: 1}, bc) if bc else {}
        if lhs != rhs:
            return {"args": [a, b, c], "(ab)c": show(lhs), "a(bc)": show(rhs)}
    return None


def is_associative(A: AlgebraSpec):
    """(True, None) or (False, witness triple)."""
    wit = _associator_witness(A)
    return wit is None, wit


def check_properties(A: AlgebraSpec) -> AlgebraProperties:
    """Exhaustive exact checks over basis pairs/triples, with witnesses."""
    B = A.basis
    labels = B.labels
    deg = {lab: B.degree(lab) for lab in labels}
    ent = A.product.entries
    mul = A.mul_coords
    wit = {}

    def e(a, b):
        return ent.get((a, b), {})

    def comm(x: dict, y: dict) -> dict:
        out = mul(x, y)
        for kx, cx in x.items():
            for ky, cy in y.items():
                _axpy(out, -_sign(deg[kx] * deg[ky]) * cx * cy, e(ky, kx))
        return out

    def combo(p: dict, q: dict, s) -> dict:
        out = dict(p)
        _axpy(out, s, q)
        return out

    commutative = True
    for a, b in itertools.product(labels, repeat=2):
        if e(a, b) != {k: _sign(deg[a] * deg[b]) * c for k, c in e(b, a).items()}:
            commutative = False
            wit["commutative"] = [a, b]
            break

    assoc_wit = _associator_witness(A)
    associative = assoc_wit is None
    if assoc_wit:
        wit["associative"] = assoc_wit

    # [ℓ_a, ℓ_b] = ℓ_{[a,b]} evaluated on c
    left = True
    for a, b, c in itertools.product(labels, repeat=3):
        s = _sign(deg[a] * deg[b])
        lhs = combo(mul({a: 1}, e(b, c)), mul({b: 1}, e(a, c)), -s)
        rhs = mul(comm({a: 1}, {b: 1}), {c: 1})
        if lhs != rhs:
            left = False
            wit["left_pre_lie"] = [a, b, c]
            break

    # [r_b, r_c] = r_{[c,b]} evaluated on a : (ac)b − ± (ab)c = a[c,b]
    right = True
    for b, c, a in itertools.product(labels, repeat=3):
        s = _sign(deg[b] * deg[c])
        lhs = combo(mul(e(a, c), {b: 1}), mul(e(a, b), {c: 1}), -s)
        rhs = mul({a: 1}, comm({c: 1}, {b: 1}))
        if lhs != rhs:
            right = False
            wit["right_pre_lie"] = [b, c, a]
            break

    cm = MultilinearMap(2, B, B, {(a, b): v for a, b in itertools.product(labels, repeat=2)
                                  if (v := comm({a: 1}, {b: 1}))}, 0, check=False)
    fails = lie_failures(B, cm, 0)
    pre_lie = not fails
    if fails:
        wit["pre_lie"] = fails[0][1]

    return AlgebraProperties(commutative, associative, left, right, pre_lie,
                             A.unit is not None, wit)


# ---------------------------------------------------------------------------
# multiplication operators and the End(A) = ℓ_A ⊕ Ann(1) split

def left_mult(A: AlgebraSpec, a: Vector, degree=None) -> MultilinearMap:
    """ℓ_a = m(a, −)."""
    if a.basis != A.basis:
        raise BasisMismatch("element not in the algebra")
    if degree is None:
        degree = a.degree() or 0
    B = A.basis
    return MultilinearMap.from_function(1, B, B, lambda b: A.mul_coords(a.coords, {b: 1}), degree)


def right_mult(A: AlgebraSpec, b: Vector, degree=None) -> MultilinearMap:
    if b.basis != A.basis:
        raise BasisMismatch("element not in the algebra")
    if degree is None:
        degree = b.degree() or 0
    B = A.basis
    return MultilinearMap.from_function(1, B, B, lambda a: A.mul_coords({a: 1}, b.coords), degree)


def end_decompose(A: AlgebraSpec, T: MultilinearMap):
    """Split T = ℓ_{T(1)} + (T − ℓ_{T(1)}); the second part kills 1."""
    A.require_unit()
    lpart = left_mult(A, T(A.one()), degree=T.degree)
    return lpart, T - lpart


def is_derivation(A: AlgebraSpec, d: MultilinearMap):
    """Graded product rule d(ab) = (da)b + (−1)^{|d||a|} a(db) on basis pairs."""
    B = A.basis
    for a, b in itertools.product(B.labels, repeat=2):
        va, vb = B.vector(a), B.vector(b)
        lhs = d(A.mul(va, vb))
        rhs = A.mul(d(va), vb) + _sign(d.degree * B.degree(a)) * A.mul(va, d(vb))
        if lhs != rhs:
            return False, {"args": [a, b], "d(ab)": str(lhs), "rule": str(rhs)}
    return True, None


def diff1_split(A: AlgebraSpec, T: MultilinearMap):
    """Write an order ≤ 1 operator as left multiplication + derivation."""
    from .higherops import phi

    A.require_unit()
    B = A.basis
    for a, b in itertools.product(B.labels, repeat=2):
        val = phi(A, T, [B.vector(a), B.vector(b)])
        if val:
            raise NotFirstOrder({"args": [a, b], "value": str(val)})
    lpart, dpart = end_decompose(A, T)
    ok, wit = is_derivation(A, dpart)
    if not ok:
        raise HypothesisViolation("derivation", wit)
    return lpart, dpart

