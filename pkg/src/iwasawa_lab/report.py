"""Scenario reports and their byte-stable serialisation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .provenance import ASSERTED, LedgerItem, Quantity

REPORT_SCHEMA = "iwasawa-lab/report-v1"

STATUS_EXIT = {
    "pass": 0,
    "fail": 1,
    "hypothesis-not-met": 2,
    "unverified": 3,
    "precision-exhausted": 4,
}


@dataclass
class ScenarioReport:
    scenario: str
    inputs: dict
    precision: int
    seed: int | None = None
    ledger: list[LedgerItem] = field(default_factory=list)
    quantities: dict[str, Quantity] = field(default_factory=dict)
    checks: list[dict] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)
    status: str = "pass"
    message: str = ""

    # --- building ------------------------------------------------------------

    def put(self, name: str, q: Quantity) -> Any:
        self.quantities[name] = q
        return q.value

    def expect(self, name: str, expected, actual) -> bool:
        ok = expected == actual
        self.checks.append({"name": name, "expected": expected, "actual": actual, "passed": ok})
        return ok

    def finalize(self) -> "ScenarioReport":
        if self.status == "pass" and any(not c["passed"] for c in self.checks):
            self.status = "fail"
            self.message = self.message or "an expected conclusion did not hold"
        if self.status == "hypothesis-not-met":
            # no conclusions without the hypotheses
            self.quantities.clear()
            self.checks.clear()
        return self

    # --- views ---------------------------------------------------------------

    @property
    def exit_code(self) -> int:
        return STATUS_EXIT[self.status]

    @property
    def conditional_on(self) -> list[str]:
        cites = {it.citation for it in self.ledger if it.status == ASSERTED and it.citation}
        cites |= {q.citation for q in self.quantities.values() if q.provenance == "asserted" and q.citation}
        return sorted(cites)

    @property
    def conditional(self) -> bool:
        return bool(self.conditional_on)

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "scenario": self.scenario,
            "inputs": self.inputs,
            "precision": self.precision,
            "seed": self.seed,
            "status": self.status,
            "exit_code": self.exit_code,
            "message": self.message,
            "ledger": [it.to_json() for it in self.ledger],
            "quantities": {k: q.to_json() for k, q in self.quantities.items()},
            "checks": self.checks,
            "conditional": self.conditional,
            "conditional_on": self.conditional_on,
            "details": self.details,
        }


def render_json(report: ScenarioReport) -> str:
    return json.dumps(report.to_json(), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _table(headers: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    line = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()  # noqa: E731
    return [line(headers), line(["-" * w for w in widths])] + [line(r) for r in rows]


def _fmt(v) -> str:
    return json.dumps(v, sort_keys=True) if not isinstance(v, str) else v


def render_text(report: ScenarioReport) -> str:
    out = [
        f"schema: {REPORT_SCHEMA}",
        f"scenario: {report.scenario}",
        f"status: {report.status} (exit {report.exit_code})",
        f"inputs: {_fmt(report.inputs)}",
        f"precision: {report.precision}",
        f"seed: {report.seed}",
    ]
    if report.message:
        out.append(f"message: {report.message}")
    out += ["", "hypothesis ledger"]
    out += _table(["status", "hypothesis", "detail", "citation"],
                  [[it.status, it.name, it.detail, it.citation or ""] for it in report.ledger])
    if report.quantities:
        out += ["", "quantities"]
        out += _table(["name", "value", "provenance", "citation"],
                      [[k, _fmt(q.value), q.provenance, q.citation or ""]
                       for k, q in sorted(report.quantities.items())])
    if report.checks:
        out += ["", "checks"]
        out += _table(["result", "check", "expected", "actual"],
                      [["PASS" if c["passed"] else "FAIL", c["name"], _fmt(c["expected"]), _fmt(c["actual"])]
                       for c in report.checks])
    if report.conditional_on:
        out += ["", "conditional on"] + [f"  {c}" for c in report.conditional_on]
    return "\n".join(out) + "\n"


def emit_report(report: ScenarioReport, path=None, format: str = "json") -> str:
    """Serialise ``report``; write it to ``path`` when given. I/O errors propagate unchanged."""
    if format == "json":
        text = render_json(report)
    elif format == "text":
        text = render_text(report)
    else:
        raise ValueError(f"unknown report format {format!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
