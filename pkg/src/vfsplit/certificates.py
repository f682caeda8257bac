"""Check reports shared by the verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CertificateReport:
    """Named checks with pass/fail and a short detail string each."""

    subject: str
    checks: list = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append((name, bool(ok), detail))
        return bool(ok)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def failures(self) -> list:
        return [(n, d) for n, ok, d in self.checks if not ok]

    def to_json(self) -> dict:
        return {"subject": self.subject, "ok": self.ok,
                "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in self.checks]}

    def summary(self) -> str:
        lines = [f"{self.subject}: {'PASS' if self.ok else 'FAIL'}"]
        for n, ok, d in self.checks:
            lines.append(f"  [{'ok' if ok else 'FAIL'}] {n}" + (f" ({d})" if d else ""))
        return "\n".join(lines)
