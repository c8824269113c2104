"""Tagged pass/fail reports shared by the verification suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


def render_value(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return v


@dataclass(frozen=True)
class CheckLine:
    tag: str
    ok: bool
    detail: str

    def __str__(self):
        return f"{'PASS' if self.ok else 'FAIL'} {self.tag}: {self.detail}"


@dataclass
class Report:
    lines: list[CheckLine] = field(default_factory=list)

    def add(self, tag: str, ok: bool, detail: str) -> None:
        self.lines.append(CheckLine(tag, bool(ok), detail))

    def extend(self, other: "Report") -> None:
        self.lines.extend(other.lines)

    @property
    def ok(self) -> bool:
        return all(l.ok for l in self.lines)

    def failures(self) -> list[CheckLine]:
        return [l for l in self.lines if not l.ok]

    def render_text(self) -> str:
        body = "\n".join(str(l) for l in self.lines)
        tail = f"\n{len(self.lines)} checks, {len(self.failures())} failed"
        return body + tail + "\n"

    def to_obj(self) -> dict:
        return {"checks": [{"tag": l.tag, "ok": l.ok, "detail": l.detail}
                           for l in self.lines],
                "ok": self.ok}
