"""Cohomology H(V, Q) of a differential algebra and the descended Φ-brackets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import AlgebraSpec, is_derivation
from .errors import HypothesisViolation, InvalidArgument
from .gradedcore import (
    GradedBasis, MultilinearMap, Vector, _axpy, compose, graded_commutator, kernel_image,
    solve_in_span,
)
from .higherops import Tower
from .report import Report
from .shlie import BracketFamily

__all__ = [
    "CohomologyPresentation", "build_cohomology", "check_descent", "cdbt_brackets",
    "representative_independence", "phi_on_vectors",
]


def _square_zero_witness(op: MultilinearMap):
    sq = compose(op, op)
    if sq.is_zero():
        return None
    key = min(sq.entries, key=lambda k: op.source.sort_key(k[0]))
    return {"args": list(key), "value": str(Vector(op.target, sq.entries[key], _trusted=True))}


def _h_label(v: Vector, i):
    if len(v.coords) == 1:
        (lab, c), = v.coords.items()
        if c == 1:
            return f"[{lab}]"
    return f"h{i}"


@dataclass
class CohomologyPresentation:
    ambient: AlgebraSpec
    q_name: str
    kernel: list
    image: list
    representatives: list
    basis: GradedBasis
    product: MultilinearMap | None = None
    info: dict = field(default_factory=dict)

    @property
    def Q(self) -> MultilinearMap:
        return self.ambient.operator(self.q_name) if self.q_name else None

    @property
    def dim(self):
        return len(self.representatives)

    def rep(self, label) -> Vector:
        return self.representatives[self.basis.index(label)]

    def project(self, v: Vector) -> Vector:
        """H-coordinates of a cocycle; raises if v is not in Ker(Q)."""
        sol = solve_in_span(self.image + self.representatives, v)
        if sol is None:
            raise InvalidArgument(f"{v} is not a cocycle")
        k = len(self.image)
        return Vector(self.basis, {lab: c for lab, c in zip(self.basis.labels, sol[k:]) if c})

    def in_image(self, v: Vector) -> bool:
        if not v:
            return True
        return bool(self.image) and solve_in_span(self.image, v) is not None

    def in_kernel(self, v: Vector) -> bool:
        Q = self.Q
        return Q is None or not Q(v)

    def with_representatives(self, reps) -> CohomologyPresentation:
        return CohomologyPresentation(self.ambient, self.q_name, self.kernel, self.image,
                                      list(reps), self.basis, self.product, dict(self.info))


def build_cohomology(V: AlgebraSpec, q_name=None) -> CohomologyPresentation:
    """Ker(Q)/Im(Q) with deterministic representatives; Q = None means Q = 0."""
    if q_name is None:
        Q = MultilinearMap(1, V.basis, V.basis, {}, 1)
    else:
        Q = V.operator(q_name)
        if not Q.degree & 1:
            raise HypothesisViolation("odd", {"degree": Q.degree}, "Q must be odd")
        wit = _square_zero_witness(Q)
        if wit:
            raise HypothesisViolation("square-zero", wit, "Q² ≠ 0")
        ok, wit = is_derivation(V, Q)
        if not ok:
            raise HypothesisViolation("derivation", wit, "Q is not a derivation")
    kernel, image = kernel_image(Q)
    reps = []
    for v in kernel:
        if solve_in_span(image + reps, v) is None:
            reps.append(v)
    labels = [_h_label(v, i) for i, v in enumerate(reps)]
    if len(set(labels)) != len(labels):
        labels = [f"h{i}" for i in range(len(reps))]
    basis = GradedBasis(labels, {lab: v.degree() for lab, v in zip(labels, reps)}) if reps else None
    pres = CohomologyPresentation(V, q_name, kernel, image, reps, basis)
    pres.info["dim ker"], pres.info["dim im"], pres.info["dim H"] = len(kernel), len(image), len(reps)
    if not reps:
        return pres
    entries = {}
    for (i, a), (j, b) in itertools.product(enumerate(reps), repeat=2):
        p = pres.project(V.mul(a, b))
        if p:
            entries[labels[i], labels[j]] = p.coords
    pres.product = MultilinearMap(2, basis, basis, entries, 0)
    H = AlgebraSpec(basis, pres.product, name=f"H({V.name})")
    props = H.properties
    for flag in ("commutative", "associative"):
        if not getattr(props, flag):
            raise HypothesisViolation(flag, props.witnesses.get(flag),
                                      f"induced product on H is not {flag}")
    pres.info["V pre-Lie"] = V.properties.pre_lie
    return pres


def phi_on_vectors(tower: Tower, vectors) -> dict:
    acc: dict = {}
    supports = [list(v.coords.items()) for v in vectors]
    for combo in itertools.product(*supports):
        c = 1
        for _, x in combo:
            c *= x
        _axpy(acc, c, tower.phi(tuple(k for k, _ in combo)))
    return acc


def _delta_hypotheses(C: CohomologyPresentation, delta_name):
    V = C.ambient
    D = V.operator(delta_name)
    if not D.degree & 1:
        raise HypothesisViolation("odd", {"degree": D.degree}, "Δ must be odd")
    wit = _square_zero_witness(D)
    if wit:
        raise HypothesisViolation("square-zero", wit, "Δ² ≠ 0")
    Q = C.Q
    if Q is not None:
        br = graded_commutator(Q, D)
        if not br.is_zero():
            key = min(br.entries, key=lambda k: V.basis.sort_key(k[0]))
            raise HypothesisViolation(
                "[Q,Δ] = 0", {"args": list(key),
                              "value": str(Vector(V.basis, br.entries[key], _trusted=True))})
    return D


def check_descent(C: CohomologyPresentation, delta_name, max_r=4) -> Report:
    """Φ^r_Δ maps Ker-tuples into Ker and Ker-tuples with one Im entry into Im."""
    D = _delta_hypotheses(C, delta_name)
    V = C.ambient
    report = Report(f"verify descent {V.name} Δ={delta_name} max_r={max_r}")
    tower = Tower(V, D)
    for r in range(1, max_r + 1):
        bad = None
        for vs in itertools.product(range(len(C.kernel)), repeat=r):
            val = Vector(V.basis, phi_on_vectors(tower, [C.kernel[i] for i in vs]), _trusted=True)
            if not C.in_kernel(val):
                bad = {"kernel args": [str(C.kernel[i]) for i in vs], "value": str(val)}
                break
        report.add(f"Ker closure r={r}", bad is None, bad)
        bad = None
        for pos in range(r):
            for w in C.image:
                for vs in itertools.product(range(len(C.kernel)), repeat=r - 1):
                    args = [C.kernel[i] for i in vs]
                    args.insert(pos, w)
                    val = Vector(V.basis, phi_on_vectors(tower, args), _trusted=True)
                    if not C.in_image(val):
                        bad = {"args": [str(a) for a in args], "value": str(val)}
                        break
                if bad:
                    break
            if bad:
                break
        report.add(f"Im closure r={r}", bad is None, bad)
    return report.finish()


def _brackets(C: CohomologyPresentation, tower: Tower, max_r, reps=None):
    reps = reps if reps is not None else C.representatives
    labels = C.basis.labels
    out = {}
    for r in range(1, max_r + 1):
        entries = {}
        for idx in itertools.product(range(len(reps)), repeat=r):
            val = Vector(C.ambient.basis, phi_on_vectors(tower, [reps[i] for i in idx]),
                         _trusted=True)
            if val:
                p = C.project(val)
                if p:
                    entries[tuple(labels[i] for i in idx)] = p.coords
        if entries:
            out[r] = MultilinearMap(r, C.basis, C.basis, entries, tower.D.degree, check=False)
    return out


def cdbt_brackets(C: CohomologyPresentation, delta_name, max_r=4, check=True) -> BracketFamily:
    """[h_1, …, h_r] = project(Φ^r_Δ(rep h_1, …, rep h_r))."""
    if C.basis is None:
        raise InvalidArgument("cohomology is zero")
    if check:
        rep = check_descent(C, delta_name, max_r)
        if not rep.passed:
            bad = rep.failures[0]
            raise HypothesisViolation("descent", bad.witness, f"{bad.name} fails")
    else:
        _delta_hypotheses(C, delta_name)
    tower = Tower(C.ambient, C.ambient.operator(delta_name))
    return BracketFamily(C.basis, _brackets(C, tower, max_r), declared_max=max_r,
                         name=f"H({C.ambient.name})")


def representative_independence(C: CohomologyPresentation, delta_name, max_r=4) -> Report:
    """Shift each representative by each image basis vector; brackets must not move."""
    report = Report(f"verify representative-independence {C.ambient.name}")
    tower = Tower(C.ambient, C.ambient.operator(delta_name))
    base = _brackets(C, tower, max_r)
    base_entries = {n: b.entries for n, b in base.items()}
    for i, w in itertools.product(range(len(C.representatives)), C.image):
        reps = list(C.representatives)
        reps[i] = reps[i] + w
        moved = {n: b.entries for n, b in _brackets(C, tower, max_r, reps).items()}
        ok = moved == base_entries
        report.add(f"{C.basis.labels[i]} + {w}", ok,
                   None if ok else {"representative": C.basis.labels[i], "shift": str(w)})
    if not C.image:
        report.add("no image vectors", True)
    return report.finish()
