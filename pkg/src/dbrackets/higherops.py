"""Higher-order differential operators: the Γ, Ψ and Φ towers.

Sign conventions (graded case):

* Γ uses graded commutators in End(A).
* Ψ is m∘(id⊗Δ) applied to λ(a_1)⋯λ(a_r), λ(a) = 1⊗a − a⊗1, in A⊗A with
  (x⊗y)(z⊗w) = (−1)^{|y||z|} xz⊗yw, and (id⊗Δ)(x⊗y) = (−1)^{|Δ||x|} x⊗Δy.
* Φ follows the recursion
      Φ^{r+1}(a_1..a_{r+1}) = Φ^r(a_1..a_r a_{r+1}) − Φ^r(a_1..a_r) a_{r+1}
                              − κ a_r Φ^r(a_1..a_{r−1}, a_{r+1}),
  κ = (−1)^{|a_r|(|Δ| + |a_1| + … + |a_{r−1}|)}, which is what the tensor
  calculus above forces.
* The closed unshuffle sum carries ε(σ) and the factor (−1)^{|Δ||x_I|} for Δ
  passing the left block x_I.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import AlgebraSpec, left_mult
from .errors import BasisMismatch, HypothesisViolation, InvalidArgument
from .gradedcore import (
    MultilinearMap, Vector, _axpy, _koszul_exponent, _sign, compose, graded_commutator,
    unshuffle_table,
)
from .report import Report

__all__ = [
    "gamma", "psi", "phi", "unshuffle_sum", "Tower", "order_of", "OperatorOrderReport",
    "operator_order_report", "verify_equivalence", "verify_order_calculus",
    "require_commutative_associative",
]

DEFINITIONS = ("gamma", "psi", "phi")


def require_commutative_associative(A: AlgebraSpec):
    props = A.properties
    for flag in ("commutative", "associative"):
        if not getattr(props, flag):
            raise HypothesisViolation(flag, props.witnesses.get(flag))
    A.require_unit()


def _check_op(A, D):
    if D.arity != 1 or D.source != A.basis or D.target != A.basis:
        raise BasisMismatch("operator is not an endomorphism of the algebra")


def _expand(args):
    """Multilinear expansion of vector arguments into (coeff, label tuple)."""
    supports = [list(a.coords.items()) for a in args]
    for combo in itertools.product(*supports):
        c = 1
        for _, v in combo:
            c *= v
        yield c, tuple(k for k, _ in combo)


class Tower:
    """Memoized Γ/Ψ/Φ/unshuffle values on basis tuples for one (A, Δ)."""

    def __init__(self, A: AlgebraSpec, D: MultilinearMap):
        _check_op(A, D)
        A.require_unit()
        self.A = A
        self.D = D
        self.B = A.basis
        self.unit = A.unit
        self._deg = {lab: A.basis.degree(lab) for lab in A.basis.labels}
        self._lmult = {}
        self._gamma = {(): D}
        self._tensor = {(): {(self.unit, self.unit): 1}}
        self._phi = {}
        self._prod = {(): {self.unit: 1}}
        self._dprod = {}

    # -- helpers ------------------------------------------------------------
    def ell(self, lab):
        m = self._lmult.get(lab)
        if m is None:
            m = left_mult(self.A, self.B.vector(lab))
            self._lmult[lab] = m
        return m

    def mul(self, a: dict, b: dict) -> dict:
        return self.A.mul_coords(a, b)

    def Dc(self, coords: dict) -> dict:
        return self.D.apply_coords(coords)

    # -- Γ --------------------------------------------------------------------
    def gamma_op(self, labels) -> MultilinearMap:
        labels = tuple(labels)
        op = self._gamma.get(labels)
        if op is None:
            op = graded_commutator(self.gamma_op(labels[:-1]), self.ell(labels[-1]))
            self._gamma[labels] = op
        return op

    def gamma1(self, labels) -> dict:
        return dict(self.gamma_op(labels).on_basis(self.unit))

    # -- Ψ --------------------------------------------------------------------
    def tensor(self, labels) -> dict:
        """λ(a_1)⋯λ(a_r) as {(x, y): coeff} in A⊗A."""
        labels = tuple(labels)
        t = self._tensor.get(labels)
        if t is not None:
            return t
        prev = self.tensor(labels[:-1])
        a = labels[-1]
        da = self._deg[a]
        acc: dict = {}
        for (x, y), c in prev.items():
            # (x⊗y)(1⊗a) = x ⊗ ya
            for k, v in self.A.product.on_basis(y, a).items():
                key = (x, k)
                acc[key] = acc.get(key, 0) + c * v
            # −(x⊗y)(a⊗1) = −(−1)^{|y||a|} xa ⊗ y
            s = -_sign(self._deg[y] * da)
            for k, v in self.A.product.on_basis(x, a).items():
                key = (k, y)
                acc[key] = acc.get(key, 0) + s * c * v
        acc = {k: v for k, v in acc.items() if v}
        self._tensor[labels] = acc
        return acc

    def psi(self, labels) -> dict:
        out: dict = {}
        dD = self.D.degree
        for (x, y), c in self.tensor(labels).items():
            dy = self.D.on_basis(y)
            if dy:
                _axpy(out, c * _sign(dD * self._deg[x]), self.mul({x: 1}, dy))
        return out

    # -- Φ --------------------------------------------------------------------
    def phi(self, labels) -> dict:
        labels = tuple(labels)
        val = self._phi.get(labels)
        if val is not None:
            return val
        r = len(labels)
        if r == 0:
            raise InvalidArgument("Φ needs at least one argument")
        if r == 1:
            a = labels[0]
            val = dict(self.D.on_basis(a))
            _axpy(val, -1, self.mul(self.D.on_basis(self.unit), {a: 1}))
        else:
            head, ar, last = labels[:-2], labels[-2], labels[-1]
            val = {}
            for k, c in self.A.product.on_basis(ar, last).items():
                _axpy(val, c, self.phi(head + (k,)))
            _axpy(val, -1, self.mul(self.phi(labels[:-1]), {last: 1}))
            expo = self._deg[ar] * (self.D.degree + sum(self._deg[x] for x in head))
            _axpy(val, -_sign(expo), self.mul({ar: 1}, self.phi(head + (last,))))
        self._phi[labels] = val
        return val

    # -- closed unshuffle sum -------------------------------------------------
    def product(self, labels) -> dict:
        labels = tuple(labels)
        p = self._prod.get(labels)
        if p is None:
            p = self.mul(self.product(labels[:-1]), {labels[-1]: 1})
            self._prod[labels] = p
        return p

    def d_product(self, labels) -> dict:
        labels = tuple(labels)
        p = self._dprod.get(labels)
        if p is None:
            p = self.Dc(self.product(labels))
            self._dprod[labels] = p
        return p

    def unshuffle(self, labels) -> dict:
        labels = tuple(labels)
        degs = [self._deg[x] for x in labels]
        dD = self.D.degree
        out: dict = {}
        for k, imgs in unshuffle_table(len(labels)):
            right = tuple(labels[i - 1] for i in imgs[k:])
            dright = self.d_product(right)
            if not dright:
                continue
            left = tuple(labels[i - 1] for i in imgs[:k])
            expo = k + _koszul_exponent(imgs, degs) + dD * sum(self._deg[x] for x in left)
            _axpy(out, _sign(expo), self.mul(self.product(left), dright))
        return out

    def value(self, definition, labels) -> dict:
        if definition == "gamma":
            return self.gamma1(labels)
        if definition == "psi":
            return self.psi(labels)
        if definition == "phi":
            return self.phi(labels)
        if definition == "unshuffle":
            return self.unshuffle(labels)
        raise InvalidArgument(f"unknown definition {definition!r}")

    def vanishes(self, definition, r):
        """(True, None) if arity-r values vanish on all basis tuples else (False, witness)."""
        for labels in itertools.product(self.B.labels, repeat=r):
            if definition == "gamma":
                op = self.gamma_op(labels)
                if not op.is_zero():
                    return False, list(labels)
            else:
                v = self.value(definition, labels)
                if v:
                    return False, list(labels)
        return True, None


def _vector_value(A, D, definition, args):
    for a in args:
        if a.basis != A.basis:
            raise BasisMismatch("argument not in the algebra")
    tower = Tower(A, D)
    acc: dict = {}
    for c, labels in _expand(args):
        _axpy(acc, c, tower.value(definition, labels))
    return Vector(A.basis, acc, _trusted=True)


def gamma(A: AlgebraSpec, D: MultilinearMap, args) -> MultilinearMap:
    """[⋯[[Δ, ℓ_{a_1}], ℓ_{a_2}], ⋯, ℓ_{a_r}] in End(A)."""
    _check_op(A, D)
    A.require_unit()
    op = D
    for a in args:
        if a.basis != A.basis:
            raise BasisMismatch("argument not in the algebra")
        op = graded_commutator(op, left_mult(A, a))
    return op


def psi(A: AlgebraSpec, D: MultilinearMap, args) -> Vector:
    """m∘(id⊗Δ) λ(a_1)⋯λ(a_r)."""
    _check_op(A, D)
    A.require_unit()
    require_commutative_associative(A)
    return _vector_value(A, D, "psi", args)


def phi(A: AlgebraSpec, D: MultilinearMap, args) -> Vector:
    """Recursive Φ^r_Δ(a_1, …, a_r); works for any unital algebra."""
    _check_op(A, D)
    A.require_unit()
    if not args:
        raise InvalidArgument("Φ needs at least one argument")
    return _vector_value(A, D, "phi", args)


def unshuffle_sum(A: AlgebraSpec, D: MultilinearMap, args) -> Vector:
    """Σ_k Σ_{σ ∈ S_{k,r−k}} (−1)^k ε(σ) a_{σ(1)}⋯a_{σ(k)} Δ(a_{σ(k+1)}⋯a_{σ(r)})."""
    _check_op(A, D)
    require_commutative_associative(A)
    return _vector_value(A, D, "unshuffle", args)


# ---------------------------------------------------------------------------
# orders

@dataclass
class OrderEntry:
    definition: str
    order: int | None      # None means "≥ max_tested"
    max_tested: int
    witness: list | None

    def __str__(self):
        return f"order = {self.order}" if self.order is not None else f"order >= {self.max_tested}"


def order_of(A: AlgebraSpec, D: MultilinearMap, definition="phi", max_r=None, tower=None):
    """Smallest k ≤ max_r with all arity-(k+1) values vanishing on basis tuples."""
    if definition not in DEFINITIONS:
        raise InvalidArgument(f"definition must be one of {DEFINITIONS}")
    if max_r is None:
        max_r = len(A.basis) + 1
    if max_r < 1:
        raise InvalidArgument("max_r must be >= 1")
    if D.is_zero():
        return OrderEntry(definition, -1, max_r, None)
    tower = tower or Tower(A, D)
    witness = None
    for k in range(0, max_r + 1):
        ok, wit = tower.vanishes(definition, k + 1)
        if ok:
            return OrderEntry(definition, k, max_r, witness)
        witness = wit
    return OrderEntry(definition, None, max_r, witness)


@dataclass
class OperatorOrderReport:
    name: str
    order_gamma: int | None
    order_psi: int | None
    order_phi: int | None
    max_tested: int
    witnesses: dict = field(default_factory=dict)

    @property
    def consistent(self):
        orders = (self.order_gamma, self.order_psi, self.order_phi)
        return None in orders or len(set(orders)) == 1


def operator_order_report(A, D, name="Δ", max_r=None):
    tower = Tower(A, D)
    entries = {d: order_of(A, D, d, max_r, tower) for d in DEFINITIONS}
    rep = OperatorOrderReport(name, entries["gamma"].order, entries["psi"].order,
                              entries["phi"].order, entries["phi"].max_tested,
                              {d: e.witness for d, e in entries.items()})
    if None not in (rep.order_gamma, rep.order_psi, rep.order_phi) and not rep.consistent:
        raise AssertionError(f"orders disagree for {name}: {rep}")
    return rep


def verify_equivalence(A: AlgebraSpec, D: MultilinearMap, max_r=4, name="Δ") -> Report:
    """Γ(…)1 = Ψ = Φ = unshuffle sum on every basis tuple of arity ≤ max_r."""
    require_commutative_associative(A)
    report = Report(f"verify equivalence {A.name} {name} max_r={max_r}")
    tower = Tower(A, D)
    for r in range(1, max_r + 1):
        bad = None
        count = 0
        for labels in itertools.product(A.basis.labels, repeat=r):
            count += 1
            g = tower.gamma1(labels)
            vals = {"psi": tower.psi(labels), "phi": tower.phi(labels),
                    "unshuffle": tower.unshuffle(labels)}
            for which, v in vals.items():
                if v != g:
                    bad = {"args": list(labels), "gamma": str(Vector(A.basis, g, _trusted=True)),
                           which: str(Vector(A.basis, v, _trusted=True))}
                    break
            if bad:
                break
        report.add(f"arity {r}", bad is None, bad, tuples=count)
    return report.finish()


def verify_order_calculus(A: AlgebraSpec, pool: dict, max_r=None, max_filtration=4) -> Report:
    """Composition/commutator order bounds and nesting of the order filtration."""
    require_commutative_associative(A)
    report = Report(f"verify order-calculus {A.name}")
    orders = {}
    for name, op in pool.items():
        orders[name] = operator_order_report(A, op, name, max_r)
        rep = orders[name]
        report.add(f"consistent orders {name}", rep.consistent, None,
                   gamma=rep.order_gamma, psi=rep.order_psi, phi=rep.order_phi)
    report.info["orders"] = {n: r.order_phi for n, r in orders.items()}
    for (fn, f), (gn, g) in itertools.product(pool.items(), repeat=2):
        of, og = orders[fn].order_phi, orders[gn].order_phi
        if of is None or og is None:
            report.add(f"bounds {fn},{gn}", True, None, note="order not determined; skipped")
            continue
        # search far enough that "not found" really means the bound is broken
        cap = max(of + og, max_r or len(A.basis) + 1)
        comp = order_of(A, compose(f, g), "phi", cap)
        comm = order_of(A, graded_commutator(f, g), "phi", cap)
        ok_c = comp.order is not None and comp.order <= of + og
        ok_b = comm.order is not None and comm.order <= of + og - 1
        report.add(f"composition {fn}∘{gn}", ok_c, None if ok_c else {"order": comp.order},
                   order=comp.order, bound=of + og)
        report.add(f"commutator [{fn},{gn}]", ok_b, None if ok_b else {"order": comm.order},
                   order=comm.order, bound=of + og - 1)
    for name, op in pool.items():
        tower = Tower(A, op)
        ok = True
        wit = None
        for definition in DEFINITIONS:
            for k in range(0, max_filtration + 1):
                lower, _ = tower.vanishes(definition, k + 1)
                if lower:
                    upper, w = tower.vanishes(definition, k + 2)
                    if not upper:
                        ok, wit = False, {"definition": definition, "k": k, "args": w}
                        break
            if not ok:
                break
        report.add(f"filtration {name}", ok, wit, up_to=max_filtration)
    return report.finish()
