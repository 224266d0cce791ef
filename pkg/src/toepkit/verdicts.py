"""Tri-state verdicts with machine-checkable certificates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

WITNESSED = "witnessed"
REFUTED = "refuted"
UNKNOWN = "unknown-at-depth"

_EXIT = {WITNESSED: 0, REFUTED: 1, UNKNOWN: 2}


@dataclass(frozen=True)
class Verdict:
    """Outcome of a one-sided or two-sided check.

    `witnessed` and `refuted` carry certificate data a reader can recheck;
    `unknown-at-depth` means the search bounds were exhausted without a
    decision and records the depth used.
    """

    status: str
    certificate: Any = None
    depth: int = 0
    detail: str = ""

    def __post_init__(self):
        if self.status not in _EXIT:
            raise ValueError("bad verdict status %r" % (self.status,))

    @property
    def is_witnessed(self) -> bool:
        return self.status == WITNESSED

    @property
    def is_refuted(self) -> bool:
        return self.status == REFUTED

    @property
    def is_unknown(self) -> bool:
        return self.status == UNKNOWN

    @property
    def exit_code(self) -> int:
        return _EXIT[self.status]


def witnessed(certificate=None, depth=0, detail="") -> Verdict:
    return Verdict(WITNESSED, certificate, depth, detail)


def refuted(certificate=None, depth=0, detail="") -> Verdict:
    return Verdict(REFUTED, certificate, depth, detail)


def unknown(depth=0, detail="") -> Verdict:
    return Verdict(UNKNOWN, None, depth, detail)
