"""JSON algebra files.

Format::

    {"basis": [labels], "degrees": {label: int}, "unit": label,
     "products": [{"left": a, "right": b, "result": [{"basis": c, "coeff": "p/q"}]}],
     "operators": {name: [{"from": a, "to": [{"basis": b, "coeff": "p/q"}]}]},
     "lie": {"bracket": <same shape as products>, "degree": n},
     "l0": [labels]}

``unit``, ``operators``, ``lie`` and ``l0`` are optional; omitted products
are zero.  Dumping is canonical (basis order, operators sorted by name), so a
load/dump/load round trip is the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .algebra import AlgebraSpec, LieSpec
from .errors import InvalidArgument, MalformedInput
from .gradedcore import GradedBasis, MultilinearMap, format_scalar, scalar

__all__ = ["AlgebraFile", "load_algebra", "loads_algebra", "parse_algebra", "dump_algebra",
           "dump_lie", "write_json", "schema"]

SCHEMA_DIR = Path(__file__).parent / "schemas"


@dataclass
class AlgebraFile:
    algebra: AlgebraSpec
    lie: LieSpec | None = None
    l0: list | None = None
    name: str = "A"


def _require(cond, msg):
    if not cond:
        raise MalformedInput(msg)


def _coeffs(items, labels, where):
    _require(isinstance(items, list), f"{where}: expected a list of terms")
    out = {}
    for term in items:
        _require(isinstance(term, dict) and set(term) == {"basis", "coeff"},
                 f"{where}: each term needs exactly 'basis' and 'coeff'")
        lab = term["basis"]
        _require(lab in labels, f"{where}: unknown label {lab!r}")
        coeff = term["coeff"]
        _require(not isinstance(coeff, float), f"{where}: coefficients must be exact, got {coeff!r}")
        try:
            c = scalar(coeff)
        except InvalidArgument as exc:
            raise MalformedInput(f"{where}: {exc}") from None
        c += out.get(lab, 0)
        if c:
            out[lab] = c
        else:
            out.pop(lab, None)
    return out


def _table(items, basis, where):
    _require(isinstance(items, list), f"{where}: expected a list")
    entries = {}
    labels = set(basis.labels)
    for k, row in enumerate(items):
        _require(isinstance(row, dict) and set(row) == {"left", "right", "result"},
                 f"{where}[{k}]: needs 'left', 'right', 'result'")
        a, b = row["left"], row["right"]
        _require(a in labels and b in labels, f"{where}[{k}]: unknown label")
        _require((a, b) not in entries, f"{where}[{k}]: duplicate entry for ({a}, {b})")
        entries[a, b] = _coeffs(row["result"], labels, f"{where}[{k}]")
    return entries


def _infer_degree(entries, basis, arity):
    degs = set()
    for key, out in entries.items():
        src = sum(basis.degree(x) for x in key)
        for lab in out:
            degs.add(basis.degree(lab) - src)
    _require(len(degs) <= 1, "operator mixes degrees; split it into homogeneous pieces")
    return degs.pop() if degs else 0


def parse_algebra(doc, name=None) -> AlgebraFile:
    _require(isinstance(doc, dict), "top level must be an object")
    known = {"basis", "degrees", "unit", "products", "operators", "lie", "l0", "name"}
    extra = set(doc) - known
    _require(not extra, f"unknown keys {sorted(extra)}")
    labels = doc.get("basis")
    _require(isinstance(labels, list) and labels and all(isinstance(x, str) for x in labels),
             "'basis' must be a non-empty list of strings")
    _require(len(set(labels)) == len(labels), "basis labels must be unique")
    degrees = doc.get("degrees", {})
    _require(isinstance(degrees, dict), "'degrees' must be an object")
    _require(set(degrees) <= set(labels), "'degrees' names unknown labels")
    _require(all(isinstance(v, int) and not isinstance(v, bool) for v in degrees.values()),
             "degrees must be integers")
    basis = GradedBasis(labels, {lab: degrees.get(lab, 0) for lab in labels})
    name = name or doc.get("name") or "A"
    try:
        product = MultilinearMap(2, basis, basis, _table(doc.get("products", []), basis, "products"), 0)
    except InvalidArgument as exc:
        raise MalformedInput(f"products: {exc}") from None
    unit = doc.get("unit")
    _require(unit is None or unit in labels, f"unit {unit!r} is not a basis label")
    ops_doc = doc.get("operators", {})
    _require(isinstance(ops_doc, dict), "'operators' must be an object")
    ops = {}
    for op_name, rows in ops_doc.items():
        _require(isinstance(rows, list), f"operator {op_name}: expected a list")
        entries = {}
        for k, row in enumerate(rows):
            _require(isinstance(row, dict) and set(row) == {"from", "to"},
                     f"operator {op_name}[{k}]: needs 'from' and 'to'")
            src = row["from"]
            _require(src in basis, f"operator {op_name}[{k}]: unknown label {src!r}")
            _require((src,) not in entries, f"operator {op_name}[{k}]: duplicate 'from'")
            entries[(src,)] = _coeffs(row["to"], set(labels), f"operator {op_name}[{k}]")
        ops[op_name] = MultilinearMap(1, basis, basis, entries, _infer_degree(entries, basis, 1))
    try:
        A = AlgebraSpec(basis, product, unit, ops, name=name)
    except InvalidArgument as exc:
        raise MalformedInput(str(exc)) from None
    lie = None
    if "lie" in doc:
        ld = doc["lie"]
        _require(isinstance(ld, dict) and "bracket" in ld, "'lie' needs a 'bracket'")
        _require(set(ld) <= {"bracket", "degree"}, "'lie' has unknown keys")
        deg = ld.get("degree", 0)
        _require(isinstance(deg, int) and not isinstance(deg, bool), "lie degree must be an integer")
        try:
            br = MultilinearMap(2, basis, basis, _table(ld["bracket"], basis, "lie.bracket"), deg)
        except InvalidArgument as exc:
            raise MalformedInput(f"lie.bracket: {exc}") from None
        lie = LieSpec(basis, br, name=name)
    l0 = doc.get("l0")
    if l0 is not None:
        _require(isinstance(l0, list) and all(x in basis for x in l0), "'l0' must list basis labels")
    return AlgebraFile(A, lie, l0, name)


def loads_algebra(text, name=None) -> AlgebraFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from None
    return parse_algebra(doc, name)


def load_algebra(path) -> AlgebraFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from None
    return loads_algebra(text, name=path.stem)


def _dump_terms(basis, coords):
    return [{"basis": lab, "coeff": format_scalar(coords[lab])}
            for lab in basis.labels if lab in coords]


def _dump_table(basis, mm):
    rows = []
    for key in sorted(mm.entries, key=lambda k: (basis.index(k[0]), basis.index(k[1]))):
        rows.append({"left": key[0], "right": key[1], "result": _dump_terms(basis, mm.entries[key])})
    return rows


def _dump_ops(basis, ops):
    out = {}
    for name in sorted(ops):
        mm = ops[name]
        out[name] = [{"from": k[0], "to": _dump_terms(basis, mm.entries[k])}
                     for k in sorted(mm.entries, key=lambda k: basis.index(k[0]))]
    return out


def dump_algebra(A: AlgebraSpec, lie: LieSpec | None = None, l0=None) -> dict:
    B = A.basis
    doc = {"name": A.name, "basis": list(B.labels),
           "degrees": {lab: B.degree(lab) for lab in B.labels}}
    if A.unit is not None:
        doc["unit"] = A.unit
    doc["products"] = _dump_table(B, A.product)
    if A.operators:
        doc["operators"] = _dump_ops(B, A.operators)
    if lie is not None:
        doc["lie"] = {"bracket": _dump_table(B, lie.bracket_map), "degree": lie.degree}
    if l0 is not None:
        doc["l0"] = list(l0)
    return doc


def dump_lie(L: LieSpec, operators=None, l0=None) -> dict:
    """A Lie-algebra file: zero product, the bracket under 'lie', named maps on L."""
    zero = MultilinearMap(2, L.basis, L.basis, {}, 0)
    A = AlgebraSpec(L.basis, zero, None, operators or {}, name=L.name)
    return dump_algebra(A, L, l0)


def write_json(path, doc):
    Path(path).write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def schema(name="report"):
    return json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text(encoding="utf-8"))
