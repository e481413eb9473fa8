"""Result record shared by the exact identity checks."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}
