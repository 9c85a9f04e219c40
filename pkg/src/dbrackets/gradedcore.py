"""Exact graded linear algebra: scalars, graded bases, sparse multilinear maps.

Everything here is exact.  Coefficients are ``int`` or ``fractions.Fraction``
(both are exact rationals and compare equal across types); nothing ever goes
through floating point.  Signs only ever depend on degree parity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .errors import BasisMismatch, InhomogeneousMap, InvalidArgument

__all__ = [
    "Scalar", "scalar", "format_scalar",
    "GradedBasis", "Vector", "MultilinearMap", "Permutation",
    "unshuffles", "koszul_sign", "graded_commutator", "compose",
    "identity_map", "zero_map", "random_operator",
    "rref", "kernel_image", "solve_in_span", "solve_coords", "rank",
]

Scalar = Fraction


def scalar(value) -> Fraction:
    """Parse ``'p/q'``, ``'p'``, an int or a Fraction into a Fraction."""
    if isinstance(value, bool):
        raise InvalidArgument(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                return Fraction(int(num), int(den))
            return Fraction(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidArgument(f"not a rational: {value!r}") from exc
    raise InvalidArgument(f"not a rational: {value!r}")


def format_scalar(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _sign(exponent: int) -> int:
    return -1 if exponent & 1 else 1


# ---------------------------------------------------------------------------
# raw sparse-dict helpers (label -> coefficient); used in the hot loops

def _axpy(acc: dict, c, coords: dict) -> None:
    """acc += c * coords, dropping zeros."""
    if not c:
        return
    for k, v in coords.items():
        s = acc.get(k, 0) + c * v
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


def _clean(coords: dict) -> dict:
    return {k: v for k, v in coords.items() if v}


class GradedBasis:
    """Finite ordered basis with an integer degree per label."""

    __slots__ = ("labels", "_degrees", "_index", "_hash")

    def __init__(self, labels, degrees=None):
        labels = tuple(labels)
        if not labels:
            raise InvalidArgument("basis must be non-empty")
        if len(set(labels)) != len(labels):
            raise InvalidArgument("basis labels must be unique")
        degrees = dict(degrees or {})
        unknown = set(degrees) - set(labels)
        if unknown:
            raise InvalidArgument(f"degrees given for unknown labels {sorted(unknown)}")
        for lab in labels:
            if not isinstance(lab, str) or not lab:
                raise InvalidArgument(f"labels must be non-empty strings, got {lab!r}")
            d = degrees.setdefault(lab, 0)
            if not isinstance(d, int) or isinstance(d, bool):
                raise InvalidArgument(f"degree of {lab!r} must be an integer")
        self.labels = labels
        self._degrees = degrees
        self._index = {lab: i for i, lab in enumerate(labels)}
        self._hash = hash((labels, tuple(degrees[lab] for lab in labels)))

    def degree(self, label) -> int:
        return self._degrees[label]

    def parity(self, label) -> int:
        return self._degrees[label] & 1

    @property
    def degrees(self) -> dict:
        return dict(self._degrees)

    def index(self, label) -> int:
        return self._index[label]

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self._index

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, GradedBasis) and self.labels == other.labels
                and self._degrees == other._degrees)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{lab}:{self._degrees[lab]}" for lab in self.labels)
        return f"GradedBasis({inner})"

    def vector(self, label, coeff=1) -> Vector:
        if label not in self._index:
            raise BasisMismatch(f"{label!r} is not a basis label")
        return Vector(self, {label: coeff})

    def zero(self) -> Vector:
        return Vector(self, {})

    def vectors(self):
        return [Vector(self, {lab: 1}) for lab in self.labels]

    def sort_key(self, label):
        return self._index[label]


class Vector:
    """Sparse vector over a GradedBasis.  Treated as immutable."""

    __slots__ = ("basis", "coords")

    def __init__(self, basis: GradedBasis, coords=None, *, _trusted=False):
        self.basis = basis
        if _trusted:
            self.coords = coords
            return
        clean = {}
        for k, v in (coords or {}).items():
            if k not in basis:
                raise BasisMismatch(f"{k!r} is not a label of {basis!r}")
            if isinstance(v, (str, float)):
                v = scalar(v) if isinstance(v, str) else _reject_float(v)
            if v:
                clean[k] = v
        self.coords = clean

    def _check(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        if other.basis != self.basis:
            raise BasisMismatch("vectors live over different bases")
        return True

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        acc = dict(self.coords)
        _axpy(acc, 1, other.coords)
        return Vector(self.basis, acc, _trusted=True)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        acc = dict(self.coords)
        _axpy(acc, -1, other.coords)
        return Vector(self.basis, acc, _trusted=True)

    def __neg__(self):
        return Vector(self.basis, {k: -v for k, v in self.coords.items()}, _trusted=True)

    def __mul__(self, c):
        if isinstance(c, (Vector, float)):
            return NotImplemented
        if not c:
            return Vector(self.basis, {}, _trusted=True)
        return Vector(self.basis, {k: c * v for k, v in self.coords.items()}, _trusted=True)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return self.basis == other.basis and self.coords == other.coords

    def __hash__(self):
        return hash((self.basis, frozenset(self.coords.items())))

    def __bool__(self):
        return bool(self.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def coeff(self, label):
        return self.coords.get(label, 0)

    def items(self):
        """(label, coeff) pairs in basis order."""
        return sorted(self.coords.items(), key=lambda kv: self.basis.sort_key(kv[0]))

    def degrees(self) -> set:
        return {self.basis.degree(k) for k in self.coords}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self):
        """Degree of a homogeneous vector (None for zero)."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise InhomogeneousMap(f"vector {self} is not homogeneous")
        return degs.pop()

    def homogeneous_parts(self) -> dict:
        parts: dict = {}
        for k, v in self.coords.items():
            parts.setdefault(self.basis.degree(k), {})[k] = v
        return {d: Vector(self.basis, c, _trusted=True) for d, c in parts.items()}

    def __str__(self):
        if not self.coords:
            return "0"
        return " + ".join(f"{format_scalar(c)}·{lab}" for lab, c in self.items())

    def __repr__(self):
        return f"Vector({self})"


def _reject_float(v):
    raise InvalidArgument(f"floating point coefficient {v!r} not allowed")


class MultilinearMap:
    """Arity-n homogeneous map given by structure constants on basis tuples.

    ``entries`` maps an input label tuple to a sparse output coordinate dict.
    Arity 0 encodes a single vector (key ``()``).  Homogeneity is checked on
    construction: each output label has degree ``sum(inputs) + degree``.
    """

    __slots__ = ("arity", "source", "target", "entries", "degree")

    def __init__(self, arity, source, target, entries, degree=0, *, check=True):
        if arity < 0:
            raise InvalidArgument("arity must be >= 0")
        self.arity = arity
        self.source = source
        self.target = target
        self.degree = degree
        clean = {}
        for key, out in entries.items():
            key = tuple(key)
            if isinstance(out, Vector):
                if out.basis != target:
                    raise BasisMismatch("output vector over wrong basis")
                out = out.coords
            out = _clean(out)
            if not out:
                continue
            if check:
                if len(key) != arity:
                    raise InvalidArgument(f"input {key} has length != arity {arity}")
                for lab in key:
                    if lab not in source:
                        raise BasisMismatch(f"{lab!r} not in source basis")
                want = sum(source.degree(lab) for lab in key) + degree
                for lab in out:
                    if lab not in target:
                        raise BasisMismatch(f"{lab!r} not in target basis")
                    if target.degree(lab) != want:
                        raise InhomogeneousMap(
                            f"entry {key} -> {lab} breaks homogeneity of degree {degree}")
            clean[key] = out
        self.entries = clean

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_function(cls, arity, source, target, fn, degree=0):
        """Tabulate ``fn`` (basis labels -> Vector or coords) on every basis tuple."""
        entries = {}
        for key in itertools.product(source.labels, repeat=arity):
            out = fn(*key)
            if isinstance(out, Vector):
                out = out.coords
            if out:
                entries[key] = out
        return cls(arity, source, target, entries, degree)

    @classmethod
    def from_vector(cls, v: Vector, source=None):
        deg = v.degree() or 0
        return cls(0, source or v.basis, v.basis, {(): v.coords}, deg)

    # -- evaluation ---------------------------------------------------------
    @property
    def parity(self):
        return self.degree & 1

    def on_basis(self, *labels) -> dict:
        return self.entries.get(labels, {})

    def apply_coords(self, *coords) -> dict:
        """Evaluate on raw coordinate dicts; returns a raw dict."""
        if len(coords) != self.arity:
            raise InvalidArgument(f"expected {self.arity} arguments, got {len(coords)}")
        acc: dict = {}
        if self.arity == 0:
            return dict(self.entries.get((), {}))
        if self.arity == 1:
            ent = self.entries
            for k, c in coords[0].items():
                out = ent.get((k,))
                if out:
                    _axpy(acc, c, out)
            return acc
        supports = [list(c.items()) for c in coords]
        ent = self.entries
        for combo in itertools.product(*supports):
            key = tuple(k for k, _ in combo)
            out = ent.get(key)
            if out:
                c = 1
                for _, v in combo:
                    c *= v
                _axpy(acc, c, out)
        return acc

    def __call__(self, *args) -> Vector:
        for a in args:
            if a.basis != self.source:
                raise BasisMismatch("argument not over the source basis")
        return Vector(self.target, self.apply_coords(*(a.coords for a in args)), _trusted=True)

    def as_vector(self) -> Vector:
        if self.arity != 0:
            raise InvalidArgument("only arity-0 maps encode a vector")
        return Vector(self.target, dict(self.entries.get((), {})), _trusted=True)

    # -- linear structure ---------------------------------------------------
    def _compatible(self, other):
        if not isinstance(other, MultilinearMap):
            raise InvalidArgument("expected a MultilinearMap")
        if (self.arity, self.source, self.target) != (other.arity, other.source, other.target):
            raise BasisMismatch("maps have different shapes")
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise InhomogeneousMap("cannot add maps of different degree")

    def _combine(self, other, c):
        self._compatible(other)
        deg = self.degree if not self.is_zero() else other.degree
        acc = {k: dict(v) for k, v in self.entries.items()}
        for k, out in other.entries.items():
            slot = acc.setdefault(k, {})
            _axpy(slot, c, out)
        return MultilinearMap(self.arity, self.source, self.target, acc, deg, check=False)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, c):
        if isinstance(c, (MultilinearMap, Vector, float)):
            return NotImplemented
        entries = {k: {lab: c * v for lab, v in out.items()} for k, out in self.entries.items()}
        return MultilinearMap(self.arity, self.source, self.target, entries, self.degree, check=False)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, MultilinearMap):
            return NotImplemented
        if (self.arity, self.source, self.target) != (other.arity, other.source, other.target):
            return False
        if self.entries != other.entries:
            return False
        return self.degree == other.degree or self.is_zero()

    def __hash__(self):
        return hash((self.arity, self.source, len(self.entries)))

    def __repr__(self):
        return f"MultilinearMap(arity={self.arity}, degree={self.degree}, nnz={len(self.entries)})"

    def describe(self) -> str:
        """Lines ``inputs -> output`` in canonical basis order."""
        src = self.source
        keys = sorted(self.entries, key=lambda k: tuple(src.sort_key(x) for x in k))
        lines = []
        for k in keys:
            out = Vector(self.target, self.entries[k], _trusted=True)
            lines.append(f"({', '.join(k)}) -> {out}")
        return "\n".join(lines) if lines else "0"

    # -- endomorphism helpers -----------------------------------------------
    def compose(self, other: MultilinearMap) -> MultilinearMap:
        """self ∘ other for arity-1 maps."""
        return compose(self, other)

    def matrix(self):
        """Dense matrix (rows = target labels, columns = source labels); arity 1 only."""
        if self.arity != 1:
            raise InvalidArgument("matrix() needs an arity-1 map")
        tidx = self.target._index
        m = [[0] * len(self.source) for _ in range(len(self.target))]
        for j, lab in enumerate(self.source.labels):
            for t, c in self.entries.get((lab,), {}).items():
                m[tidx[t]][j] = c
        return m


def identity_map(basis: GradedBasis) -> MultilinearMap:
    return MultilinearMap(1, basis, basis, {(lab,): {lab: 1} for lab in basis}, 0, check=False)


def zero_map(basis: GradedBasis, arity=1, degree=0, target=None) -> MultilinearMap:
    return MultilinearMap(arity, basis, target or basis, {}, degree, check=False)


def compose(f: MultilinearMap, g: MultilinearMap) -> MultilinearMap:
    """f ∘ g for arity-1 maps."""
    if f.arity != 1 or g.arity != 1:
        raise InvalidArgument("compose needs arity-1 maps")
    if g.target != f.source:
        raise BasisMismatch("cannot compose: target of g is not source of f")
    entries = {}
    fe = f.entries
    for key, gout in g.entries.items():
        acc: dict = {}
        for lab, c in gout.items():
            out = fe.get((lab,))
            if out:
                _axpy(acc, c, out)
        if acc:
            entries[key] = acc
    return MultilinearMap(1, g.source, f.target, entries, f.degree + g.degree, check=False)


def graded_commutator(f: MultilinearMap, g: MultilinearMap) -> MultilinearMap:
    """[f, g] = f∘g − (−1)^{|f||g|} g∘f."""
    if f.arity != 1 or g.arity != 1:
        raise InvalidArgument("graded_commutator needs endomorphisms")
    if not (f.source == f.target == g.source == g.target):
        raise BasisMismatch("endomorphisms of different spaces")
    fg = compose(f, g)
    gf = compose(g, f)
    s = _sign(f.degree * g.degree)
    entries = {k: dict(v) for k, v in fg.entries.items()}
    for k, out in gf.entries.items():
        _axpy(entries.setdefault(k, {}), -s, out)
    return MultilinearMap(1, f.source, f.target, entries, f.degree + g.degree, check=False)


def random_operator(basis: GradedBasis, degree: int, rng, low=-3, high=3, density=1.0):
    """Random homogeneous endomorphism with small integer entries."""
    entries = {}
    for a in basis.labels:
        out = {}
        for b in basis.labels:
            if basis.degree(b) == basis.degree(a) + degree and rng.random() < density:
                c = rng.randint(low, high)
                if c:
                    out[b] = c
        if out:
            entries[(a,)] = out
    return MultilinearMap(1, basis, basis, entries, degree, check=False)


# ---------------------------------------------------------------------------
# permutations

@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..r}; ``images[i-1] = σ(i)``."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise InvalidArgument(f"{imgs} is not a permutation of 1..{len(imgs)}")

    @classmethod
    def identity(cls, r):
        return cls(tuple(range(1, r + 1)))

    def __len__(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i - 1]

    def compose(self, other: Permutation) -> Permutation:
        """(self ∘ other)(i) = self(other(i))."""
        if len(self) != len(other):
            raise InvalidArgument("permutations of different sizes")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> Permutation:
        inv = [0] * len(self)
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def apply(self, seq):
        """Output order (seq[σ(1)], …, seq[σ(r)]) with 1-based σ."""
        if len(seq) != len(self):
            raise InvalidArgument("sequence length does not match permutation")
        return [seq[j - 1] for j in self.images]


def unshuffles(k: int, r: int) -> list:
    """All (k, r−k)-unshuffles of {1..r}, in lexicographic order."""
    if not (0 <= k <= r):
        raise InvalidArgument(f"need 0 <= k <= r, got k={k}, r={r}")
    out = []
    full = range(1, r + 1)
    for first in itertools.combinations(full, k):
        chosen = set(first)
        rest = tuple(i for i in full if i not in chosen)
        out.append(Permutation(first + rest))
    return out


@lru_cache(maxsize=None)
def unshuffle_table(r: int) -> tuple:
    """((k, images), …) for every (k, r−k)-unshuffle, k = 0..r; cached per r."""
    return tuple((k, s.images) for k in range(r + 1) for s in unshuffles(k, r))


def _koszul_exponent(images, degrees) -> int:
    e = 0
    r = len(images)
    for i in range(r):
        di = degrees[images[i] - 1]
        if not di & 1:
            continue
        for j in range(i + 1, r):
            if images[i] > images[j] and degrees[images[j] - 1] & 1:
                e += 1
    return e


def koszul_sign(sigma: Permutation, degrees) -> int:
    """Sign of reordering graded a_1..a_r into a_{σ(1)}..a_{σ(r)}."""
    if len(degrees) != len(sigma):
        raise InvalidArgument("degree list length does not match permutation")
    return _sign(_koszul_exponent(sigma.images, degrees))


# ---------------------------------------------------------------------------
# fraction-free row reduction

def _integer_rows(rows):
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * den) for x in row])
    return out


def _bareiss(m):
    """Fraction-free (Bareiss) forward elimination in place.

    Returns (echelon rows, pivot columns).  All divisions are exact.
    """
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        prow = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            f = row[c]
            for j in range(c + 1, ncols):
                q, rem = divmod(piv * row[j] - f * prow[j], prev)
                assert rem == 0, "non-exact division in fraction-free elimination"
                row[j] = q
            row[c] = 0
        # rows above r keep their entries; they are not touched by Bareiss
        prev = piv
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref(rows):
    """Reduced row echelon form (Fractions) and pivot columns."""
    if not rows:
        return [], []
    ech, pivots = _bareiss(_integer_rows(rows))
    red = [[Fraction(x) for x in row] for row in ech]
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        p = red[k][c]
        red[k] = [x / p for x in red[k]]
        for i in range(k):
            f = red[i][c]
            if f:
                red[i] = [a - f * b for a, b in zip(red[i], red[k])]
    return red, pivots


def rank(vectors) -> int:
    if not vectors:
        return 0
    basis = vectors[0].basis
    rows = [[v.coeff(lab) for lab in basis.labels] for v in vectors]
    return len(rref(rows)[1])


def kernel_image(f: MultilinearMap):
    """Homogeneous bases of ker f and im f for an endomorphism ``f``.

    Computed degree block by degree block of the source, so every returned
    vector is homogeneous.  Image vectors are images of pivot basis columns,
    so each has an explicit preimage.
    """
    if f.arity != 1:
        raise InvalidArgument("kernel_image needs an arity-1 map")
    src, tgt = f.source, f.target
    kernel, image = [], []
    blocks: dict = {}
    for lab in src.labels:
        blocks.setdefault(src.degree(lab), []).append(lab)
    for deg in sorted(blocks):
        cols = blocks[deg]
        rows = [[f.on_basis(c).get(t, 0) for c in cols] for t in tgt.labels]
        red, pivots = rref(rows)
        pivset = set(pivots)
        for j in pivots:
            image.append(Vector(tgt, dict(f.on_basis(cols[j])), _trusted=True))
        for fc in range(len(cols)):
            if fc in pivset:
                continue
            coords = {cols[fc]: Fraction(1)}
            for k, pc in enumerate(pivots):
                v = -red[k][fc]
                if v:
                    coords[cols[pc]] = v
            kernel.append(Vector(src, coords, _trusted=True))
    kernel.sort(key=lambda v: min(src.sort_key(k) for k in v.coords))
    return kernel, image


def solve_coords(vectors, target: dict):
    """Like :func:`solve_in_span` but on raw coordinate dicts with any hashable keys."""
    keys = {}
    for v in list(vectors) + [target]:
        for k in v:
            keys.setdefault(k, None)
    n = len(vectors)
    rows = [[v.get(k, 0) for v in vectors] + [target.get(k, 0)] for k in keys]
    if not rows:
        return [Fraction(0)] * n
    red, pivots = rref(rows)
    if n in pivots:
        return None
    sol = [Fraction(0)] * n
    for k, c in enumerate(pivots):
        sol[c] = red[k][n]
    return sol


def solve_in_span(vectors, target: Vector):
    """Coefficients c with Σ c_i vectors[i] = target, or None if not in the span.

    When the vectors are dependent the free coefficients are set to zero.
    """
    for v in vectors:
        if v.basis != target.basis:
            raise BasisMismatch("vectors over different bases")
    return solve_coords([v.coords for v in vectors], target.coords)
