"""Hochschild complex C•(A) = ⊕ Hom(A^⊗n, A) with the Gerstenhaber bracket.

Elements are multilinear maps on the *suspended* basis sA.  For an ungraded
algebra every basis element of sA has degree −1 and an n-ary map has
degree n − 1; the pre-Lie composition is

    (f∘g)(x_1, …) = Σ_i (−1)^{|g|(|x_1| + … + |x_{i−1}|)} f(x_1, …, g(x_i, …), …)

which for ungraded A is the familiar sign (−1)^{(q−1)(i−1)}.  Elements of A
are the 0-ary maps; composing anything into them gives zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import AlgebraSpec
from .errors import BasisMismatch, HypothesisViolation, InvalidArgument, UnsupportedInput
from .gradedcore import GradedBasis, MultilinearMap, Vector, _axpy, _sign

__all__ = [
    "HochschildElement", "HochschildComplex", "AInftyFamily",
    "gerstenhaber_circ", "gerstenhaber_bracket", "element_order", "derived_commutator",
    "suspend_dga", "ainfty_failures",
]


class HochschildElement:
    """Finite sum of homogeneous multilinear maps keyed by (arity, degree)."""

    __slots__ = ("basis", "pieces")

    def __init__(self, basis: GradedBasis, pieces=None):
        self.basis = basis
        clean = {}
        for key, mm in (pieces or {}).items():
            if mm.is_zero():
                continue
            if mm.source != basis or mm.target != basis:
                raise BasisMismatch("component not over the suspended basis")
            clean[(mm.arity, mm.degree)] = mm
        self.pieces = clean

    @classmethod
    def of(cls, basis, *maps):
        out = cls(basis)
        for mm in maps:
            out = out + cls(basis, {(mm.arity, mm.degree): mm})
        return out

    def _combine(self, other, c):
        if not isinstance(other, HochschildElement):
            return NotImplemented
        if other.basis != self.basis:
            raise BasisMismatch("elements of different complexes")
        pieces = dict(self.pieces)
        for key, mm in other.pieces.items():
            scaled = mm * c
            pieces[key] = pieces[key] + scaled if key in pieces else scaled
        return HochschildElement(self.basis, pieces)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, c):
        if isinstance(c, (HochschildElement, Vector, float)):
            return NotImplemented
        return HochschildElement(self.basis, {k: mm * c for k, mm in self.pieces.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        if not isinstance(other, HochschildElement):
            return NotImplemented
        return self.basis == other.basis and self.pieces == other.pieces

    __hash__ = object.__hash__

    def is_zero(self):
        return not self.pieces

    def __bool__(self):
        return bool(self.pieces)

    def arities(self):
        return sorted({a for a, _ in self.pieces})

    def component(self, arity) -> HochschildElement:
        return HochschildElement(self.basis, {k: v for k, v in self.pieces.items() if k[0] == arity})

    def as_vector(self) -> Vector:
        """The arity-0 part as a vector of sA."""
        acc: dict = {}
        for (arity, _), mm in self.pieces.items():
            if arity == 0:
                _axpy(acc, 1, mm.entries.get((), {}))
        return Vector(self.basis, acc, _trusted=True)

    def flat(self) -> dict:
        out = {}
        for (arity, _), mm in self.pieces.items():
            for key, coords in mm.entries.items():
                for lab, c in coords.items():
                    out[(arity, key, lab)] = c
        return out

    def degree(self):
        degs = {d for _, d in self.pieces}
        if not degs:
            return None
        if len(degs) > 1:
            raise InvalidArgument("element is not homogeneous")
        return degs.pop()

    def __repr__(self):
        parts = ", ".join(f"arity {a} deg {d}: {len(mm.entries)} entries"
                          for (a, d), mm in sorted(self.pieces.items()))
        return f"HochschildElement({parts or '0'})"


def _circ_maps(f: MultilinearMap, g: MultilinearMap, max_arity):
    p, q = f.arity, g.arity
    if p == 0:
        return None
    arity = p + q - 1
    if arity > max_arity:
        return None
    by_out: dict = {}
    for s, gout in g.entries.items():
        for lab, c in gout.items():
            by_out.setdefault(lab, []).append((s, c))
    deg = f.source.degree
    entries: dict = {}
    gpar = g.degree & 1
    for t, fout in f.entries.items():
        prefix_deg = 0
        for i in range(p):
            hits = by_out.get(t[i])
            if hits:
                sign = -1 if (gpar and prefix_deg & 1) else 1
                head, tail = t[:i], t[i + 1:]
                for s, c in hits:
                    key = head + s + tail
                    _axpy(entries.setdefault(key, {}), sign * c, fout)
            prefix_deg += deg(t[i])
    return MultilinearMap(arity, f.source, f.target, entries, f.degree + g.degree, check=False)


class HochschildComplex:
    """Truncated Hochschild–Gerstenhaber Lie algebra on a suspended basis."""

    def __init__(self, basis: GradedBasis, max_arity=4, algebra=None):
        self.basis = basis
        self.max_arity = max_arity
        self.algebra = algebra

    @classmethod
    def from_algebra(cls, A: AlgebraSpec, max_arity=4):
        """C•(A) for an ungraded algebra; m becomes an odd element of arity 2."""
        if any(A.basis.degree(lab) for lab in A.basis.labels):
            raise UnsupportedInput("Hochschild complex needs a trivially graded algebra")
        sbasis = GradedBasis(A.basis.labels, {lab: -1 for lab in A.basis.labels})
        return cls(sbasis, max_arity, A)

    # -- construction -------------------------------------------------------
    def element(self, v) -> HochschildElement:
        """Embed a vector (or label) of A as a 0-ary map."""
        if isinstance(v, str):
            coords = {v: 1}
        else:
            coords = v.coords
        if not coords:
            return self.zero()
        pieces = {}
        for lab, c in coords.items():
            d = self.basis.degree(lab)
            mm = MultilinearMap(0, self.basis, self.basis, {(): {lab: c}}, d, check=False)
            key = (0, d)
            pieces[key] = pieces[key] + mm if key in pieces else mm
        return HochschildElement(self.basis, pieces)

    def from_map(self, mm: MultilinearMap) -> HochschildElement:
        """Lift a map on A (or on sA) to an element; degree recomputed on sA."""
        entries = mm.entries
        degs = set()
        for key, out in entries.items():
            src = sum(self.basis.degree(x) for x in key)
            for lab in out:
                degs.add(self.basis.degree(lab) - src)
        if len(degs) > 1:
            raise InvalidArgument("map is not homogeneous on the suspended basis")
        deg = degs.pop() if degs else mm.arity - 1
        lifted = MultilinearMap(mm.arity, self.basis, self.basis, entries, deg)
        return HochschildElement(self.basis, {(mm.arity, deg): lifted})

    def product_element(self) -> HochschildElement:
        if self.algebra is None:
            raise InvalidArgument("complex was not built from an algebra")
        return self.from_map(self.algebra.product)

    def zero(self):
        return HochschildElement(self.basis)

    # -- operations ---------------------------------------------------------
    def circ(self, f: HochschildElement, g: HochschildElement) -> HochschildElement:
        out: dict = {}
        for fm in f.pieces.values():
            for gm in g.pieces.values():
                h = _circ_maps(fm, gm, self.max_arity)
                if h is None or h.is_zero():
                    continue
                key = (h.arity, h.degree)
                out[key] = out[key] + h if key in out else h
        return HochschildElement(self.basis, out)

    def bracket(self, f: HochschildElement, g: HochschildElement) -> HochschildElement:
        out = self.zero()
        for fm in f.pieces.values():
            for gm in g.pieces.values():
                fe = HochschildElement(self.basis, {(fm.arity, fm.degree): fm})
                ge = HochschildElement(self.basis, {(gm.arity, gm.degree): gm})
                s = _sign(fm.degree * gm.degree)
                out = out + self.circ(fe, ge) - self.circ(ge, fe) * s
        return out

    def flat(self, f: HochschildElement) -> dict:
        return f.flat()

    def degree_of(self, f: HochschildElement):
        return f.degree()

    def project(self, f: HochschildElement) -> HochschildElement:
        """Canonical projection onto the abelian subalgebra A = arity 0."""
        return f.component(0)

    def l0_basis(self):
        return [(lab, self.element(lab)) for lab in self.basis.labels]


def gerstenhaber_circ(C: HochschildComplex, f, g):
    return C.circ(f, g)


def gerstenhaber_bracket(C: HochschildComplex, f, g):
    return C.bracket(f, g)


def element_order(C: HochschildComplex, f: HochschildElement, max_order=None):
    """Order of f with respect to A = C⁰: smallest r with B^{r+1}_f ≡ 0 on A.

    Returns (order, witness) where witness is a basis tuple with B^order_f ≠ 0
    (None for order ≤ 0 or when no such tuple exists).
    """
    if max_order is None:
        max_order = C.max_arity + 1
    if f.is_zero():
        return -1, None
    elems = {lab: C.element(lab) for lab in C.basis.labels}
    level = {(): f}
    witness = None
    for r in range(0, max_order + 1):
        nxt = {}
        for t, val in level.items():
            for lab, e in elems.items():
                b = C.bracket(val, e)
                if not b.is_zero():
                    nxt[t + (lab,)] = b
        if not nxt:
            return r, witness
        witness = list(next(iter(nxt)))
        level = nxt
    return None, witness


def ainfty_failures(C: HochschildComplex, m: HochschildElement):
    """Components of [m, m] up to the truncation arity, as (arity, witness)."""
    sq = C.bracket(m, m)
    fails = []
    for (arity, _), mm in sorted(sq.pieces.items()):
        key = min(mm.entries)
        fails.append((arity, {"args": list(key),
                              "value": str(Vector(C.basis, mm.entries[key], _trusted=True))}))
    return fails


def derived_commutator(A: AlgebraSpec, max_arity=3) -> MultilinearMap:
    """Restriction of [[m, −], −] to A; equals (a, b) ↦ m(a,b) − m(b,a)."""
    C = HochschildComplex.from_algebra(A, max_arity=max(3, max_arity))
    m = C.product_element()
    fails = ainfty_failures(C, m)
    if fails:
        raise HypothesisViolation("associative", {"[m,m] arity": fails[0][0], **fails[0][1]})
    elems = {lab: C.element(lab) for lab in A.basis.labels}
    ad = {lab: C.bracket(m, e) for lab, e in elems.items()}
    entries = {}
    for a, b in itertools.product(A.basis.labels, repeat=2):
        val = C.bracket(ad[a], elems[b]).as_vector()
        if val:
            entries[(a, b)] = val.coords
    return MultilinearMap(2, A.basis, A.basis, entries, 0)


@dataclass
class AInftyFamily:
    """m = m_1 + m_2 + … on a suspended basis, every m_n odd."""

    base: GradedBasis
    maps: dict

    def __post_init__(self):
        for n, mm in self.maps.items():
            if mm.arity != n:
                raise InvalidArgument(f"m_{n} has arity {mm.arity}")
            if mm.source != self.base or mm.target != self.base:
                raise BasisMismatch(f"m_{n} not over the suspended basis")
            if not mm.degree & 1 and not mm.is_zero():
                raise HypothesisViolation("odd", {"arity": n, "degree": mm.degree})

    def element(self, C: HochschildComplex) -> HochschildElement:
        return HochschildElement.of(self.base, *self.maps.values())

    @property
    def max_arity(self):
        return max(self.maps) if self.maps else 0


def suspend_dga(A: AlgebraSpec, differential=None) -> AInftyFamily:
    """A∞ structure (m_1 = d, m_2 = suspended product) of a DGA on sA.

    With |sa| = |a| − 1 the suspended product is m_2(sa, sb) = (−1)^{|a|} s(ab)
    and m_1(sa) = s(da).  Both have degree +1.
    """
    B = A.basis
    sbasis = GradedBasis(B.labels, {lab: B.degree(lab) - 1 for lab in B.labels})
    maps = {}
    if differential is not None:
        d = A.operator(differential) if isinstance(differential, str) else differential
        if d.degree != 1:
            raise InvalidArgument("the differential of a DGA must have degree +1")
        maps[1] = MultilinearMap(1, sbasis, sbasis, d.entries, 1)
    entries = {}
    for key, out in A.product.entries.items():
        s = _sign(B.degree(key[0]))
        entries[key] = {lab: s * c for lab, c in out.items()}
    maps[2] = MultilinearMap(2, sbasis, sbasis, entries, 1)
    return AInftyFamily(sbasis, maps)
