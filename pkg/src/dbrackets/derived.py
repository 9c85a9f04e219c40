"""Derived brackets: B^r and C^r towers, the signed binary derived bracket,
semidirect sums, projected (Voronov) L∞ families, and the BV/semidirect
cross-check.

The functions that only need ``bracket(x, y)`` work for any Lie-like context:
a :class:`LieSpec` (elements are Vectors) or a Hochschild complex (elements
are HochschildElements).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import AlgebraSpec, LieSpec, is_associative, left_mult, lie_failures
from .errors import BasisMismatch, HypothesisViolation, InvalidArgument
from .gradedcore import (
    GradedBasis, MultilinearMap, Vector, _axpy, _sign, compose, graded_commutator, solve_coords,
)
from .report import Report
from .shlie import BracketFamily

__all__ = [
    "SplitLie", "DerivedBracketConfig", "EndAlgebra", "end_algebra",
    "b_bracket", "c_bracket", "ks_derived_bracket", "derivation_failures",
    "verify_derived_lie", "semidirect_sum", "adjoin_derivation", "voronov_family",
    "verify_cross_construction", "element_order", "restrict_bracket",
]


# ---------------------------------------------------------------------------
# generic element helpers

def _flat(L, x) -> dict:
    if isinstance(x, Vector):
        return x.coords
    return L.flat(x)


def _degree(L, x):
    if isinstance(x, Vector):
        return x.degree()
    return L.degree_of(x)


def _apply(d, x):
    return d(x)


def b_bracket(L, delta, args):
    """[⋯[[Δ, a_1], a_2], ⋯, a_r]; r = 0 returns Δ."""
    out = delta
    for a in args:
        out = L.bracket(out, a)
    return out


def c_bracket(L, d, args):
    """[⋯[d a_1, a_2], ⋯, a_r] for r ≥ 1."""
    if not args:
        raise InvalidArgument("C-brackets need at least one argument")
    out = _apply(d, args[0])
    for a in args[1:]:
        out = L.bracket(out, a)
    return out


def element_order(L, x, l0, max_order=6):
    """Order of x with respect to the subalgebra spanned by ``l0``.

    Smallest r such that B^{r+1}_x vanishes on all tuples from ``l0`` (a
    list of elements).  Returns (order, witness); −1 for x = 0 and None if
    no r ≤ max_order works.
    """
    if not _flat(L, x):
        return -1, None
    level = {(): x}
    witness = None
    for r in range(0, max_order + 1):
        nxt = {}
        for t, val in level.items():
            for i, u in enumerate(l0):
                b = L.bracket(val, u)
                if _flat(L, b):
                    nxt[t + (i,)] = b
        if not nxt:
            return r, witness
        witness = list(next(iter(nxt)))
        level = nxt
    return None, witness


# ---------------------------------------------------------------------------
# split Lie algebras and End(A)

class SplitLie:
    """L = L₀ ⊕ L₁ with P the coordinate projection onto the L₀ labels."""

    def __init__(self, ambient: LieSpec, l0_labels, abelian=True):
        self.ambient = ambient
        self.l0_labels = list(l0_labels)
        missing = [lab for lab in self.l0_labels if lab not in ambient.basis]
        if missing:
            raise BasisMismatch(f"labels {missing} not in the ambient basis")
        l0 = set(self.l0_labels)
        self.l1_labels = [lab for lab in ambient.basis.labels if lab not in l0]
        self.abelian = abelian
        B = ambient.basis
        self.l0_basis = GradedBasis(self.l0_labels, {lab: B.degree(lab) for lab in self.l0_labels})
        if abelian:
            for a, b in itertools.product(self.l0_labels, repeat=2):
                v = ambient.bracket(B.vector(a), B.vector(b))
                if v:
                    raise HypothesisViolation("abelian", {"args": [a, b], "value": str(v)},
                                              "L0 is not abelian")

    @property
    def projection(self) -> MultilinearMap:
        B = self.ambient.basis
        return MultilinearMap(1, B, B, {(lab,): {lab: 1} for lab in self.l0_labels}, 0)

    def project(self, v) -> Vector:
        keep = set(self.l0_labels)
        return Vector(self.l0_basis, {k: c for k, c in v.coords.items() if k in keep},
                      _trusted=True)

    def lift(self, lab) -> Vector:
        return self.ambient.basis.vector(lab)

    def in_l1(self, v) -> bool:
        return not self.project(v)


class EndAlgebra:
    """End(A) in the adapted basis ℓ_A ⊕ Ann(1).

    Basis labels are ``L[a]`` for ℓ_a and ``E[b,a]`` (a ≠ 1) for the map
    sending a to b and every other basis vector, including 1, to 0.
    """

    def __init__(self, A: AlgebraSpec):
        A.require_unit()
        self.A = A
        B = A.basis
        labels, degrees = [], {}
        for a in B.labels:
            labels.append(f"L[{a}]")
            degrees[f"L[{a}]"] = B.degree(a)
        for a in B.labels:
            if a == A.unit:
                continue
            for b in B.labels:
                lab = f"E[{b},{a}]"
                labels.append(lab)
                degrees[lab] = B.degree(b) - B.degree(a)
        self.basis = GradedBasis(labels, degrees)
        self._ops = {}
        for a in B.labels:
            self._ops[f"L[{a}]"] = left_mult(A, B.vector(a))
        for a in B.labels:
            if a == A.unit:
                continue
            for b in B.labels:
                self._ops[f"E[{b},{a}]"] = MultilinearMap(
                    1, B, B, {(a,): {b: 1}}, B.degree(b) - B.degree(a))
        comm, prod = {}, {}
        for x, y in itertools.product(labels, repeat=2):
            fx, fy = self._ops[x], self._ops[y]
            p = compose(fx, fy)
            if not p.is_zero():
                prod[x, y] = self.to_vector(p).coords
            c = graded_commutator(fx, fy)
            if not c.is_zero():
                comm[x, y] = self.to_vector(c).coords
        self.lie = LieSpec(self.basis, MultilinearMap(2, self.basis, self.basis, comm, 0,
                                                      check=False),
                           validate=False, name=f"End({A.name})")
        self.assoc = AlgebraSpec(self.basis, MultilinearMap(2, self.basis, self.basis, prod, 0,
                                                            check=False),
                                 unit=f"L[{A.unit}]", name=f"End({A.name})")
        self.l0_labels = [f"L[{a}]" for a in B.labels]
        self.split = SplitLie(self.lie, self.l0_labels, abelian=A.properties.commutative
                              and A.properties.associative)

    def to_vector(self, T: MultilinearMap) -> Vector:
        A = self.A
        if T.arity != 1 or T.source != A.basis or T.target != A.basis:
            raise BasisMismatch("not an endomorphism of the algebra")
        t1 = T.on_basis(A.unit)
        coords = {f"L[{a}]": c for a, c in t1.items()}
        for a in A.basis.labels:
            if a == A.unit:
                continue
            rest = dict(T.on_basis(a))
            _axpy(rest, -1, A.mul_coords(t1, {a: 1}))
            for b, c in rest.items():
                coords[f"E[{b},{a}]"] = c
        return Vector(self.basis, coords)

    def to_op(self, v: Vector) -> MultilinearMap:
        B = self.A.basis
        entries: dict = {}
        degs = set()
        for lab, c in v.coords.items():
            op = self._ops[lab]
            degs.add(op.degree)
            for key, out in op.entries.items():
                _axpy(entries.setdefault(key, {}), c, out)
        if len(degs) > 1:
            raise InvalidArgument("element is not homogeneous")
        return MultilinearMap(1, B, B, entries, degs.pop() if degs else 0)

    def ell(self, a) -> Vector:
        return self.basis.vector(f"L[{a}]")

    def element_of(self, name) -> Vector:
        """The named operator of A as an element of End(A)."""
        return self.to_vector(self.A.operator(name))


def end_algebra(A: AlgebraSpec) -> EndAlgebra:
    return EndAlgebra(A)


# ---------------------------------------------------------------------------
# derivations and the signed derived bracket

@dataclass
class DerivedBracketConfig:
    """Either an odd element Δ (inner mode) or an odd derivation d."""

    mode: str
    delta: Vector | None = None
    d: MultilinearMap | None = None
    ks_sign: bool = False

    def __post_init__(self):
        if self.mode not in ("inner", "derivation"):
            raise InvalidArgument("mode must be 'inner' or 'derivation'")
        if self.mode == "inner" and self.delta is None:
            raise InvalidArgument("inner mode needs an element")
        if self.mode == "derivation" and self.d is None:
            raise InvalidArgument("derivation mode needs a map")

    @classmethod
    def inner(cls, delta, ks_sign=False):
        return cls("inner", delta=delta, ks_sign=ks_sign)

    @classmethod
    def derivation(cls, d, ks_sign=False):
        return cls("derivation", d=d, ks_sign=ks_sign)

    def as_map(self, L: LieSpec) -> MultilinearMap:
        return L.ad(self.delta) if self.mode == "inner" else self.d

    def degree(self):
        return self.delta.degree() if self.mode == "inner" else self.d.degree


def derivation_failures(L: LieSpec, d: MultilinearMap, require_odd=True):
    """Hypothesis checks on d: odd, d² = 0, d[a,b] = [da,b] + (−1)^{|d|(|a|+n)}[a,db]."""
    if d.arity != 1 or d.source != L.basis or d.target != L.basis:
        raise BasisMismatch("d is not an endomorphism of the Lie algebra")
    fails = []
    if require_odd and not d.degree & 1:
        fails.append(("odd", {"degree": d.degree}))
    sq = compose(d, d)
    if not sq.is_zero():
        key = min(sq.entries, key=lambda k: L.basis.sort_key(k[0]))
        fails.append(("square-zero", {"args": list(key),
                                      "value": str(Vector(L.basis, sq.entries[key], _trusted=True))}))
    B, n = L.basis, L.degree
    for a, b in itertools.product(B.labels, repeat=2):
        va, vb = B.vector(a), B.vector(b)
        lhs = d(L.bracket(va, vb))
        rhs = L.bracket(d(va), vb) + _sign(d.degree * (B.degree(a) + n)) * L.bracket(va, d(vb))
        if lhs != rhs:
            fails.append(("derivation", {"args": [a, b], "lhs": str(lhs), "rhs": str(rhs)}))
            break
    return fails


def _homogeneous(v: Vector):
    return v.homogeneous_parts().items()


def ks_derived_bracket(L: LieSpec, d: MultilinearMap, a: Vector, b: Vector, check=True):
    """[a, b]_d = (−1)^{n+|a|+1} [da, b]."""
    if check:
        fails = derivation_failures(L, d)
        if fails:
            raise HypothesisViolation(fails[0][0], fails[0][1])
    out = L.zero()
    for deg, part in _homogeneous(a):
        out = out + L.bracket(d(part), b) * _sign(L.degree + deg + 1)
    return out


def _derived_table(L, d):
    B = L.basis
    table = {}
    for a in B.labels:
        da = d.on_basis(a)
        s = _sign(L.degree + B.degree(a) + 1)
        for b in B.labels:
            v = L.bracket_coords(da, {b: 1})
            if v:
                table[a, b] = {k: s * c for k, c in v.items()}
    return table


def restrict_bracket(L: LieSpec, d: MultilinearMap, labels, name=None, validate=True):
    """The derived bracket restricted to span(labels) as a LieSpec of degree n+1."""
    B = L.basis
    sub = GradedBasis(labels, {lab: B.degree(lab) for lab in labels})
    keep = set(labels)
    entries = {}
    for (a, b), v in _derived_table(L, d).items():
        if a in keep and b in keep:
            if any(k not in keep for k in v):
                raise HypothesisViolation("closure", {"args": [a, b]})
            entries[a, b] = v
    mm = MultilinearMap(2, sub, sub, entries, L.degree + d.degree)
    return LieSpec(sub, mm, validate=validate, name=name or "derived")


def verify_derived_lie(L: LieSpec, d: MultilinearMap, l0_labels, name=None) -> Report:
    """Leibniz (i), derivation (ii) and Lie-on-L₀ (iii) for [a,b]_d.

    Shifted parities ā = |a| + n + 1 are used throughout.  Hypothesis
    failures are reported, and every identity is still evaluated.
    """
    report = Report(f"verify derived-lie {name or L.name}")
    B, n = L.basis, L.degree
    for cond, wit in derivation_failures(L, d):
        report.violation(f"hypothesis {cond}", wit)
    table = _derived_table(L, d)
    der = MultilinearMap(2, B, B, table, n + d.degree, check=False)
    dbr = LieSpec(B, der, leibniz=True, validate=False)
    fails = lie_failures(B, der, n + 1, leibniz=True)
    report.add("(i) left Leibniz", not fails, fails[0][1] if fails else None)
    wit = None
    for a, b in itertools.product(B.labels, repeat=2):
        va, vb = B.vector(a), B.vector(b)
        lhs = d(dbr.bracket(va, vb))
        rhs = dbr.bracket(d(va), vb) + dbr.bracket(va, d(vb)) * _sign(d.degree * (B.degree(a) + n + 1))
        if lhs != rhs:
            wit = {"args": [a, b], "lhs": str(lhs), "rhs": str(rhs)}
            break
    report.add("(ii) d derivation of derived bracket", wit is None, wit)
    l0 = list(l0_labels)
    keep = set(l0)
    pre = None
    for a, b in itertools.product(l0, repeat=2):
        v = L.bracket(B.vector(a), B.vector(b))
        if v:
            pre = {"condition": "L0 abelian", "args": [a, b], "value": str(v)}
            break
        w = table.get((a, b), {})
        if any(k not in keep for k in w):
            pre = {"condition": "[dL0, L0] in L0", "args": [a, b],
                   "value": str(Vector(B, w, _trusted=True))}
            break
    if pre:
        report.violation("(iii) preconditions", pre)
    else:
        sub = restrict_bracket(L, d, l0, validate=False)
        fails = lie_failures(sub.basis, sub.bracket_map, sub.degree)
        anti = [f for f in fails if f[0] == "antisymmetry"]
        report.add("(iii) graded symmetry on L0", not anti, anti[0][1] if anti else None)
        jac = lie_failures(sub.basis, sub.bracket_map, sub.degree, leibniz=True)
        report.add("(iii) Jacobi on L0", not jac, jac[0][1] if jac else None)
        report.info["derived bracket on L0"] = sub.bracket_map.describe()
        report.info["derived bracket vanishes on L0"] = sub.bracket_map.is_zero()
        report.result = sub
    return report.finish()


# ---------------------------------------------------------------------------
# semidirect sums

def semidirect_sum(L0: LieSpec, L1: LieSpec, action: dict, name=None) -> LieSpec:
    """L₀ ⋊ L₁ with [D, a] = ρ(D)a and [a, D] = −(−1)^{|a||D|} ρ(D)a."""
    if L0.degree != 0 or L1.degree != 0:
        raise InvalidArgument("semidirect sums are built for degree-0 brackets")
    clash = set(L0.basis.labels) & set(L1.basis.labels)
    if clash:
        raise InvalidArgument(f"label clash {sorted(clash)}")
    B0, B1 = L0.basis, L1.basis
    rho = {}
    for D in B1.labels:
        op = action.get(D)
        if op is None:
            op = MultilinearMap(1, B0, B0, {}, B1.degree(D))
        if op.source != B0 or op.target != B0:
            raise BasisMismatch(f"action of {D} is not an endomorphism of L0")
        if not op.is_zero() and op.degree != B1.degree(D):
            raise InvalidArgument(f"action of {D} has degree {op.degree}, expected {B1.degree(D)}")
        rho[D] = op
    for D in B1.labels:
        for a, b in itertools.product(B0.labels, repeat=2):
            va, vb = B0.vector(a), B0.vector(b)
            lhs = rho[D](L0.bracket(va, vb))
            rhs = L0.bracket(rho[D](va), vb) + _sign(B1.degree(D) * B0.degree(a)) * L0.bracket(va, rho[D](vb))
            if lhs != rhs:
                raise HypothesisViolation("derivation", {"acting": D, "args": [a, b]},
                                          f"{D} does not act by a derivation")
    for D1, D2 in itertools.product(B1.labels, repeat=2):
        br = L1.bracket(B1.vector(D1), B1.vector(D2))
        lhs = MultilinearMap(1, B0, B0, {}, B1.degree(D1) + B1.degree(D2))
        for lab, c in br.coords.items():
            lhs = lhs + rho[lab] * c
        rhs = graded_commutator(rho[D1], rho[D2])
        if lhs.entries != rhs.entries:
            raise HypothesisViolation("homomorphism", {"pair": [D1, D2]},
                                      "action is not a Lie homomorphism")
    labels = list(B0.labels) + list(B1.labels)
    degrees = {**B0.degrees, **B1.degrees}
    basis = GradedBasis(labels, degrees)
    entries = {}
    for key, out in L0.bracket_map.entries.items():
        entries[key] = dict(out)
    for key, out in L1.bracket_map.entries.items():
        entries[key] = dict(out)
    for D in B1.labels:
        for a in B0.labels:
            out = rho[D].on_basis(a)
            if out:
                entries[D, a] = dict(out)
                s = -_sign(B0.degree(a) * B1.degree(D))
                entries[a, D] = {k: s * c for k, c in out.items()}
    return LieSpec(basis, MultilinearMap(2, basis, basis, entries, 0), name=name or "L0⋊L1")


def adjoin_derivation(L: LieSpec, d: MultilinearMap, label="d", name=None) -> LieSpec:
    """L ⋊ 𝐂d: adjoin d as an element with [d, x] = d(x)."""
    if label in L.basis:
        raise InvalidArgument(f"label {label!r} already used")
    if L.degree != 0:
        raise InvalidArgument("adjoining a derivation needs a degree-0 bracket")
    B = L.basis
    basis = GradedBasis(list(B.labels) + [label], {**B.degrees, label: d.degree})
    entries = {k: dict(v) for k, v in L.bracket_map.entries.items()}
    for x in B.labels:
        out = d.on_basis(x)
        if out:
            entries[label, x] = dict(out)
            s = -_sign(B.degree(x) * d.degree)
            entries[x, label] = {k: s * c for k, c in out.items()}
    return LieSpec(basis, MultilinearMap(2, basis, basis, entries, 0),
                   leibniz=L.leibniz, name=name or f"{L.name}⋊{label}")


# ---------------------------------------------------------------------------
# Voronov families

def _voronov_hypotheses(S: SplitLie, config: DerivedBracketConfig):
    L = S.ambient
    fails = []
    if config.mode == "inner":
        delta = config.delta
        deg = delta.degree()
        if deg is None or not deg & 1:
            fails.append(("odd", {"degree": deg}))
        sq = L.bracket(delta, delta)
        if sq:
            fails.append(("square-zero", {"[Δ,Δ]": str(sq)}))
        if not S.in_l1(delta):
            fails.append(("strict", {"P(Δ)": str(S.project(delta))}))
    else:
        d = config.d
        fails.extend(derivation_failures(L, d))
        for lab in S.l1_labels:
            img = d.on_basis(lab)
            bad = [k for k in img if k in set(S.l0_labels)]
            if bad:
                fails.append(("preserves L1", {"element": lab,
                                               "value": str(Vector(L.basis, img, _trusted=True))}))
                break
    return fails


def voronov_family(S: SplitLie, config: DerivedBracketConfig, max_arity=4, check=True,
                   name=None) -> BracketFamily:
    """b_r = P∘B^r_Δ (inner mode) or P∘C^r_d (derivation mode), 1 ≤ r ≤ max_arity."""
    if not S.abelian:
        raise HypothesisViolation("abelian", None, "L0 must be abelian")
    if check:
        fails = _voronov_hypotheses(S, config)
        if fails:
            raise HypothesisViolation(fails[0][0], fails[0][1],
                                      f"hypothesis {fails[0][0]} fails")
    L = S.ambient
    B = L.basis
    d = config.as_map(L)
    l0 = S.l0_labels
    brackets = {}
    level = {}
    for a in l0:
        v = d.on_basis(a)
        if v:
            level[(a,)] = dict(v)
    for r in range(1, max_arity + 1):
        if r > 1:
            nxt = {}
            for t, val in level.items():
                for a in l0:
                    v = L.bracket_coords(val, {a: 1})
                    if v:
                        nxt[t + (a,)] = v
            level = nxt
        keep = set(l0)
        entries = {}
        for t, val in level.items():
            proj = {k: c for k, c in val.items() if k in keep}
            if proj:
                entries[t] = proj
        if entries:
            brackets[r] = MultilinearMap(r, S.l0_basis, S.l0_basis, entries, d.degree,
                                         check=False)
        if not level:
            break
    return BracketFamily(S.l0_basis, brackets, declared_max=max_arity, check=check,
                         name=name or f"Voronov({L.name})")


# ---------------------------------------------------------------------------
# BV construction vs semidirect sum

def _elements(L, l0):
    if isinstance(L, LieSpec):
        return [(lab, L.basis.vector(lab)) for lab in l0]
    return list(l0)


def verify_cross_construction(L, delta, l0, associative: AlgebraSpec | None = None,
                              name=None) -> Report:
    """[[Δ,u],v] (BV side) against [du, v] in L₀ ⋊ ad[Δ, L₀] (semidirect side).

    ``l0`` is a list of labels for a LieSpec, or (label, element) pairs for
    other contexts such as a Hochschild complex.  When ``associative`` is an
    associative algebra on the same basis whose commutator is the bracket of
    L, the identity [[ad Δ, ℓ_u], ℓ_v] = ℓ_{[[Δ,u],v]} in End(Y) is also
    checked, together with its value at 1.
    """
    report = Report(f"verify cross-construction {name or getattr(L, 'name', 'L')}")
    elems = _elements(L, l0)
    labels = [lab for lab, _ in elems]
    flats = [_flat(L, e) for _, e in elems]
    ddeg = _degree(L, delta)
    report.info["Δ odd"] = ddeg is not None and bool(ddeg & 1)
    report.info["[Δ,Δ] = 0"] = not _flat(L, L.bracket(delta, delta))
    order, _ = element_order(L, delta, [e for _, e in elems], max_order=3)
    report.info["order of Δ wrt L0"] = order

    # containment [[Δ, L0], L0] ⊆ L0
    ad = [L.bracket(delta, e) for _, e in elems]
    bv = {}
    for i, j in itertools.product(range(len(elems)), repeat=2):
        t = L.bracket(ad[i], elems[j][1])
        sol = solve_coords(flats, _flat(L, t))
        if sol is None:
            raise HypothesisViolation("containment", {"args": [labels[i], labels[j]]},
                                      "[[Δ,L0],L0] is not contained in L0")
        bv[i, j] = {labels[k]: c for k, c in enumerate(sol) if c}
    l0_table = {}
    for i, j in itertools.product(range(len(elems)), repeat=2):
        t = _flat(L, L.bracket(elems[i][1], elems[j][1]))
        if not t:
            continue
        sol = solve_coords(flats, t)
        if sol is None:
            raise HypothesisViolation("subalgebra", {"args": [labels[i], labels[j]]},
                                      "L0 is not closed under the bracket")
        l0_table[f"u[{labels[i]}]", f"u[{labels[j]}]"] = {
            f"u[{labels[k]}]": c for k, c in enumerate(sol) if c}
    report.info["L0 abelian"] = not l0_table

    # W = span [Δ, L0] with an independent basis
    w_idx, w_vecs = [], []
    for i, a in enumerate(ad):
        fa = _flat(L, a)
        if not fa:
            continue
        if w_vecs and solve_coords(w_vecs, fa) is not None:
            continue
        w_idx.append(i)
        w_vecs.append(fa)
    w_labels = [f"w[{labels[i]}]" for i in w_idx]
    w_deg = {w: (_degree(L, ad[i]) or 0) for w, i in zip(w_labels, w_idx)}
    closed = True
    w_table = {}
    for (p, i), (q, j) in itertools.product(enumerate(w_idx), repeat=2):
        t = _flat(L, L.bracket(ad[i], ad[j]))
        sol = solve_coords(w_vecs, t) if t else [0] * len(w_vecs)
        if sol is None:
            closed = False
            report.add("[W,W] ⊆ W", False, {"args": [w_labels[p], w_labels[q]]})
            break
        coords = {w_labels[k]: c for k, c in enumerate(sol) if c}
        if coords:
            w_table[w_labels[p], w_labels[q]] = coords
    if closed:
        report.add("[W,W] ⊆ W", True)
        l0_basis = GradedBasis([f"u[{lab}]" for lab in labels],
                               {f"u[{lab}]": (_degree(L, e) or 0) for lab, e in elems})
        L0 = LieSpec(l0_basis, MultilinearMap(2, l0_basis, l0_basis, l0_table, 0), name="L0")
        wb = GradedBasis(w_labels, w_deg)
        W = LieSpec(wb, MultilinearMap(2, wb, wb, w_table, 0, check=False), name="W",
                    validate=False)
        action = {}
        for w, i in zip(w_labels, w_idx):
            ent = {}
            for j in range(len(elems)):
                out = {f"u[{k}]": c for k, c in bv[i, j].items()}
                if out:
                    ent[(f"u[{labels[j]}]",)] = out
            action[w] = MultilinearMap(1, l0_basis, l0_basis, ent, w_deg[w])
        try:
            star = semidirect_sum(L0, W, action, name="L0⋊W")
        except HypothesisViolation as exc:
            report.add("L0 ⋊ W is a Lie algebra", False, {"condition": exc.condition,
                                                         "witness": exc.witness})
            star = None
        if star is not None:
            report.add("L0 ⋊ W is a Lie algebra", True)
            # d(u) = [Δ, u] written in the W basis
            d_coords = {}
            for i in range(len(elems)):
                fa = _flat(L, ad[i])
                sol = solve_coords(w_vecs, fa) if fa else [0] * len(w_vecs)
                d_coords[i] = {w_labels[k]: c for k, c in enumerate(sol) if c}
            bad = None
            for i, j in itertools.product(range(len(elems)), repeat=2):
                semi = star.bracket_coords(d_coords[i], {f"u[{labels[j]}]": 1})
                semi = {k[2:-1]: c for k, c in semi.items()}
                if semi != bv[i, j]:
                    bad = {"args": [labels[i], labels[j]], "bv": bv[i, j], "semidirect": semi}
                    break
            report.add("BV bracket = semidirect bracket", bad is None, bad)
            report.info["bracket table"] = {f"{labels[i]},{labels[j]}": v
                                            for (i, j), v in bv.items() if v}
    if associative is not None:
        report.add("associative ambient", *_check_associative_ambient(L, associative, delta,
                                                                      elems, bv))
    return report.finish()


def _check_associative_ambient(L, Y: AlgebraSpec, delta, elems, bv):
    """[[ad Δ, ℓ_u], ℓ_v] = ℓ_{[[Δ,u],v]} in End(Y), and its value at the unit."""
    if not isinstance(L, LieSpec) or Y.basis != L.basis:
        raise InvalidArgument("associative ambient must share the Lie basis")
    ok, wit = is_associative(Y)
    if not ok:
        raise HypothesisViolation("associative", wit)
    Y.require_unit()
    dY = MultilinearMap.from_function(
        1, Y.basis, Y.basis,
        lambda b: L.bracket(delta, Y.basis.vector(b)), delta.degree())
    one = Y.one()
    ell = [left_mult(Y, e) for _, e in elems]
    first = [graded_commutator(dY, m) for m in ell]
    for (i, (a, _)), (j, (b, _)) in itertools.product(enumerate(elems), repeat=2):
        op = graded_commutator(first[i], ell[j])
        expected = Vector(L.basis, bv[i, j])
        if op != left_mult(Y, expected, degree=op.degree) or op(one) != expected:
            return False, {"args": [a, b], "at 1": str(op(one)), "expected": str(expected)}
    return True, None
