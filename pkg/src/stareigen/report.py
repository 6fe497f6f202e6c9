"""Machine-readable reports shared by the CLI and the verification suite.

JSON is canonical; CSV and text are projections of the ``checks`` table.
Reports contain no timestamps or timings unless asked for, so reruns with the
same flags produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from stareigen import __version__


@dataclass
class Report:
    command: str
    parameters: dict
    results: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    def check(self, name: str, passed: bool, *, n: int | None = None, expected=None,
              computed=None, gating: bool = True, detail: str | None = None) -> bool:
        entry = {"name": name, "n": n, "passed": bool(passed), "gating": gating,
                 "expected": expected, "computed": computed}
        if detail:
            entry["detail"] = detail
        self.checks.append(entry)
        return bool(passed)

    @property
    def ok(self) -> bool:
        return all(c["passed"] for c in self.checks if c["gating"])

    def to_dict(self, timing: float | None = None) -> dict:
        gating = [c for c in self.checks if c["gating"]]
        out = {
            "command": self.command,
            "version": __version__,
            "parameters": self.parameters,
            "results": self.results,
            "checks": self.checks,
            "summary": {
                "passed": sum(c["passed"] for c in gating),
                "failed": sum(not c["passed"] for c in gating),
                "informational": len(self.checks) - len(gating),
                "ok": self.ok,
            },
        }
        if timing is not None:
            out["timing_seconds"] = round(timing, 3)
        return out


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "n", "passed", "gating", "expected", "computed"])
        for c in report["checks"]:
            writer.writerow([c["name"], _cell(c["n"]), c["passed"], c["gating"],
                             _cell(c["expected"]), _cell(c["computed"])])
        return buf.getvalue()
    if fmt == "text":
        lines = [f"{report['command']} (stareigen {report['version']})"]
        for c in report["checks"]:
            tag = "PASS" if c["passed"] else ("FAIL" if c["gating"] else "INFO")
            where = f" n={c['n']}" if c["n"] is not None else ""
            lines.append(f"[{tag}] {c['name']}{where}: computed={_cell(c['computed'])} "
                         f"expected={_cell(c['expected'])}")
        s = report["summary"]
        lines.append(f"{s['passed']} passed, {s['failed']} failed, {s['informational']} informational")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
