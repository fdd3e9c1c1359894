"""Verification reports: per-statement pass/fail with witnesses."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

MAX_WITNESSES = 10


@dataclass
class StatementResult:
    statement: str
    checked: int = 0
    failed: int = 0
    witnesses: list = field(default_factory=list)
    applicable: bool = True

    @property
    def status(self) -> str:
        if not self.applicable:
            return "not applicable"
        return "fail" if self.failed else "pass"

    def to_json(self) -> dict:
        return {"statement": self.statement, "status": self.status,
                "checked": self.checked, "failed": self.failed,
                "witnesses": self.witnesses}


@dataclass
class Report:
    title: str
    seed: int | None = None
    statements: dict[str, StatementResult] = field(default_factory=dict)
    info: dict[str, Any] = field(default_factory=dict)

    def _get(self, statement: str) -> StatementResult:
        if statement not in self.statements:
            self.statements[statement] = StatementResult(statement)
        return self.statements[statement]

    def check(self, statement: str, passed: bool, witness: Any = None) -> bool:
        r = self._get(statement)
        r.checked += 1
        if not passed:
            r.failed += 1
            if len(r.witnesses) < MAX_WITNESSES:
                r.witnesses.append(jsonable(witness))
        return passed

    def not_applicable(self, statement: str, reason: str):
        r = self._get(statement)
        r.applicable = False
        r.witnesses.append(reason)

    def merge(self, other: "Report", prefix: str = ""):
        for name, r in other.statements.items():
            mine = self._get(prefix + name)
            mine.checked += r.checked
            mine.failed += r.failed
            mine.applicable = mine.applicable and r.applicable
            room = MAX_WITNESSES - len(mine.witnesses)
            mine.witnesses.extend(r.witnesses[:max(room, 0)])

    @property
    def ok(self) -> bool:
        return all(r.failed == 0 for r in self.statements.values())

    @property
    def violations(self) -> list[dict]:
        out = []
        for r in self.statements.values():
            for w in r.witnesses if r.failed else []:
                out.append({"statement": r.statement, "witness": w})
        return out

    def first_violation(self):
        v = self.violations
        return v[0] if v else None

    def to_json(self) -> dict:
        doc = {"report": self.title, "ok": self.ok, "seed": self.seed,
               "statements": [r.to_json() for r in self.statements.values()]}
        if self.info:
            doc["info"] = jsonable(self.info)
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False)


def jsonable(x: Any) -> Any:
    """Best-effort conversion of witnesses to JSON-compatible values."""
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "tolist"):
        return jsonable(x.tolist())
    return str(x)
