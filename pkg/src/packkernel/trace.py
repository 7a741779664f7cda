"""Audit log shared by all kernelizers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

OPEN, YES, NO = "open", "yes", "no"


@dataclass
class TraceEntry:
    rule: str
    reason: str
    before: tuple[int, int]
    after: tuple[int, int]
    payload: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {
            "rule": self.rule,
            "reason": self.reason,
            "before": {"vertices": self.before[0], "edges": self.before[1]},
            "after": {"vertices": self.after[0], "edges": self.after[1]},
            "payload": self.payload,
        }


@dataclass
class KernelTrace:
    """Every reduction step taken, plus the final verdict.

    ``verdict`` is ``"yes"`` when a solution was found on the way (the kernel
    is then a small certificate instance), ``"no"`` when the instance was
    decided negatively, and ``"open"`` otherwise.
    """

    entries: list[TraceEntry] = field(default_factory=list)
    verdict: str = OPEN
    flags: set[str] = field(default_factory=set)
    info: dict[str, Any] = field(default_factory=dict)

    def log(self, rule, reason, before, after, **payload) -> None:
        self.entries.append(TraceEntry(rule, reason, tuple(before), tuple(after), payload))

    def count(self, rule: str) -> int:
        return sum(1 for e in self.entries if e.rule == rule)

    @property
    def stalled(self) -> bool:
        return "degree-reduction-stalled" in self.flags

    def to_jsonl(self) -> str:
        lines = [json.dumps(e.as_dict(), sort_keys=True, default=_jsonable) for e in self.entries]
        lines.append(
            json.dumps(
                {"verdict": self.verdict, "flags": sorted(self.flags), "info": self.info},
                sort_keys=True,
                default=_jsonable,
            )
        )
        return "\n".join(lines) + "\n"


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"not JSON serialisable: {type(x).__name__}")
