"""L∞ (sh-Lie) families and the A∞ → L∞ symmetrization.

Brackets follow the odd, graded-symmetric convention: every b_n has odd
degree, b_n(…, a, b, …) = (−1)^{|a||b|} b_n(…, b, a, …), and the r-th
generalized Jacobi identity reads

    Σ_{k=1}^{r} Σ_{σ ∈ S_{k,r−k}} ε(σ) b_{r−k+1}(b_k(a_σ(1), …, a_σ(k)), a_σ(k+1), …, a_σ(r)) = 0.
"""

from __future__ import annotations

import itertools

from .errors import HypothesisViolation, InvalidArgument
from .gradedcore import (
    GradedBasis, MultilinearMap, Vector, _axpy, _koszul_exponent, unshuffle_table,
)
from .hochschild import AInftyFamily, HochschildComplex, HochschildElement, ainfty_failures
from .report import Report

__all__ = [
    "BracketFamily", "AInftyFamily", "check_graded_symmetric", "check_linfty",
    "symmetrize_ainfty", "linfty_failures",
]


def check_graded_symmetric(f: MultilinearMap):
    """(True, None) iff f is graded-symmetric under adjacent transpositions."""
    deg = f.source.degree
    for key in itertools.product(f.source.labels, repeat=f.arity):
        here = f.entries.get(key, {})
        for i in range(f.arity - 1):
            a, b = key[i], key[i + 1]
            if a == b and not deg(a) & 1:
                continue
            swapped = key[:i] + (b, a) + key[i + 2:]
            there = f.entries.get(swapped, {})
            if deg(a) & 1 and deg(b) & 1:
                there = {k: -c for k, c in there.items()}
            if here != there:
                return False, {"args": list(key), "position": i + 1,
                               "value": str(Vector(f.target, here, _trusted=True)),
                               "swapped": str(Vector(f.target, dict(there), _trusted=True))}
    return True, None


class BracketFamily:
    """Arity-indexed odd graded-symmetric brackets b_1, …, b_N on one basis.

    Arities up to ``declared_max`` that are absent from ``brackets`` are zero.
    """

    def __init__(self, base: GradedBasis, brackets: dict, declared_max=None, check=True,
                 name=None):
        self.base = base
        self.brackets = {}
        self.name = name or "L∞"
        for n, b in brackets.items():
            if b.arity != n or b.source != base or b.target != base:
                raise InvalidArgument(f"bracket {n} is not an {n}-ary map on the base")
            if not b.is_zero():
                self.brackets[n] = b
        self.declared_max = declared_max if declared_max is not None else max(brackets, default=0)
        if check:
            for n, b in self.brackets.items():
                if not b.degree & 1:
                    raise HypothesisViolation("odd", {"arity": n, "degree": b.degree},
                                              f"bracket of arity {n} is even")
                ok, wit = check_graded_symmetric(b)
                if not ok:
                    raise HypothesisViolation("graded-symmetric", {"arity": n, **wit})

    def bracket(self, n) -> MultilinearMap:
        if n < 1 or n > self.declared_max:
            raise InvalidArgument(f"arity {n} outside 1..{self.declared_max}")
        b = self.brackets.get(n)
        if b is None:
            return MultilinearMap(n, self.base, self.base, {}, 1, check=False)
        return b

    def __call__(self, *args) -> Vector:
        return self.bracket(len(args))(*args)

    def nonzero_arities(self):
        return sorted(self.brackets)

    def __eq__(self, other):
        if not isinstance(other, BracketFamily):
            return NotImplemented
        if self.base != other.base:
            return False
        return {n: b.entries for n, b in self.brackets.items()} == \
            {n: b.entries for n, b in other.brackets.items()}

    __hash__ = object.__hash__

    def __repr__(self):
        return f"BracketFamily({self.name}, nonzero arities {self.nonzero_arities()})"


def _unshuffle_table(r):
    return tuple(row for row in unshuffle_table(r) if row[0] >= 1)


def _jacobi_value(F: BracketFamily, labels, table):
    degs = [F.base.degree(lab) for lab in labels]
    r = len(labels)
    acc: dict = {}
    for k, images in table:
        inner = F.brackets.get(k)
        outer = F.brackets.get(r - k + 1)
        if inner is None or outer is None:
            continue
        first = tuple(labels[i - 1] for i in images[:k])
        rest = tuple(labels[i - 1] for i in images[k:])
        val = inner.entries.get(first)
        if not val:
            continue
        out = outer.apply_coords(val, *({lab: 1} for lab in rest))
        if out:
            e = _koszul_exponent(images, degs)
            _axpy(acc, -1 if e & 1 else 1, out)
    return acc


def linfty_failures(F: BracketFamily, r):
    """First basis tuple violating the r-th Jacobi identity, or None."""
    table = _unshuffle_table(r)
    for labels in itertools.product(F.base.labels, repeat=r):
        val = _jacobi_value(F, labels, table)
        if val:
            return {"args": list(labels), "value": str(Vector(F.base, val, _trusted=True))}
    return None


def check_linfty(F: BracketFamily, max_r) -> Report:
    """Exhaustive generalized Jacobi check for r = 1..max_r."""
    if max_r > F.declared_max:
        raise InvalidArgument(f"family only defined up to arity {F.declared_max}")
    report = Report(f"verify linfty {F.name} max_r={max_r}")
    for r in range(1, max_r + 1):
        wit = linfty_failures(F, r)
        report.add(f"jacobi r={r}", wit is None, wit)
    report.info["nonzero arities"] = F.nonzero_arities()
    return report.finish()


def symmetrize_ainfty(M: AInftyFamily, max_r, check=True) -> BracketFamily:
    """b_r(a_1..a_r) = [⋯[[m, a_1], a_2], ⋯, a_r] in the Hochschild Lie algebra.

    Only m_r contributes to b_r, and the result is the Koszul-signed
    symmetrization of m_r.  With ``check`` the A∞ relation [m, m] = 0 is
    verified up to the arity the relations reach.
    """
    top = max(M.max_arity, max_r)
    C = HochschildComplex(M.base, max_arity=max(top, 2 * M.max_arity - 1))
    m = M.element(C)
    if check:
        fails = ainfty_failures(C, m)
        if fails:
            arity, wit = fails[0]
            raise HypothesisViolation("ainfty", {"[m,m] arity": arity, **wit})
    elems = {lab: C.element(lab) for lab in M.base.labels}
    brackets = {}
    level = {(): m}
    for r in range(1, max_r + 1):
        nxt = {}
        entries = {}
        for t, val in level.items():
            for lab, e in elems.items():
                b = C.bracket(val, e)
                if b.is_zero():
                    continue
                key = t + (lab,)
                nxt[key] = b
                v = b.as_vector()
                if v:
                    entries[key] = v.coords
        if entries:
            brackets[r] = MultilinearMap(r, M.base, M.base, entries, 1)
        level = {k: HochschildElement(v.basis, {a: mm for a, mm in v.pieces.items() if a[0] > 0})
                 for k, v in nxt.items()}
        level = {k: v for k, v in level.items() if not v.is_zero()}
    return BracketFamily(M.base, brackets, declared_max=max_r, name="symmetrized A∞")
