from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Check:
    """Outcome of an exhaustive checker.

    ``witness`` is the lexicographically smallest failing index tuple and
    ``tag`` names the failing axiom or diagram family.
    """

    ok: bool
    witness: Optional[tuple] = None
    tag: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "witness": list(self.witness) if self.witness is not None else None,
            "tag": self.tag,
        }


PASS = Check(True)


def fail(witness, tag: str | None = None) -> Check:
    return Check(False, tuple(int(i) for i in witness), tag)
