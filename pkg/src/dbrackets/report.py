"""Verification reports: per-check status plus witnesses, JSON-serializable."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

PASS = "pass"
FAIL = "fail"
HYPOTHESIS = "hypothesis-violation"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


@dataclass
class CheckResult:
    name: str
    status: str
    witness: object = None
    detail: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.status == PASS

    def to_json(self):
        return {"name": self.name, "status": self.status,
                "witness": _jsonable(self.witness), "detail": _jsonable(self.detail)}


@dataclass
class Report:
    command: str
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)
    timing: float = 0.0
    result: object = field(default=None, repr=False)
    _start: float = field(default_factory=time.perf_counter, repr=False)

    def add(self, name, ok, witness=None, **detail):
        self.checks.append(CheckResult(name, PASS if ok else FAIL, witness, detail))
        return ok

    def violation(self, name, witness=None, **detail):
        self.checks.append(CheckResult(name, HYPOTHESIS, witness, detail))

    def extend(self, other: Report, prefix=""):
        for c in other.checks:
            self.checks.append(CheckResult(prefix + c.name, c.status, c.witness, c.detail))
        for k, v in other.info.items():
            self.info.setdefault(prefix + k, v)

    @property
    def passed(self):
        return bool(self.checks) and all(c.ok for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.ok]

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def finish(self):
        self.timing = time.perf_counter() - self._start
        return self

    @property
    def exit_code(self):
        return 0 if self.passed else 1

    def to_json(self):
        return {
            "command": self.command,
            "passed": self.passed,
            "exit_code": self.exit_code,
            "checks": [c.to_json() for c in self.checks],
            "info": _jsonable(self.info),
            "timing": self.timing,
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False)

    def summary(self):
        lines = [f"{self.command}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            line = f"  [{c.status}] {c.name}"
            if c.witness is not None and not c.ok:
                line += f"  witness={_jsonable(c.witness)}"
            lines.append(line)
        for k, v in self.info.items():
            lines.append(f"  {k} = {_jsonable(v)}")
        return "\n".join(lines)
