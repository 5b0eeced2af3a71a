# app/models/reports.py
# ------------------------------------------------------------
# Scan reports: what a scan examined and every violation found,
# with enough witness data to replay it from the CLI.
# ------------------------------------------------------------

from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field

from app.models.brackets import Term

ScanKind = Literal[
    "conjecture", "counting", "center", "decomposition", "numerics", "agreement", "selfbracket", "goldenset"
]


class Violation(BaseModel):
    """
    A single failed check.

    Fields:
    - check:         short name of the failed property
    - x, y:          the pair (y empty for single-class checks)
    - bracket:       combinatorial bracket, when relevant
    - other:         second bracket (geometric engine, goldman lift, ...)
    - intersection:  intersection number, when relevant
    - detail:        human-readable explanation
    """
    check: str
    x: str
    y: str = ""
    bracket: Optional[List[Term]] = None
    other: Optional[List[Term]] = None
    intersection: Optional[int] = None
    detail: str = ""


class ScanRequest(BaseModel):
    surface: str
    kind: ScanKind
    max_len: Optional[int] = Field(None, ge=1)
    seed: int = 0


class ScanReport(BaseModel):
    """
    Fields:
    - kind:         scan kind
    - surface:      surface key
    - max_len:      largest class length examined
    - examined:     number of pairs (or classes) examined
    - skipped:      examined items a check did not apply to
    - violations:   every failed check, in canonical pair order
    - notes:        fixed remarks on how the scan reads its inputs
    - extra:        kind-specific results (central classes, residual maxima, ...)
    - fingerprint:  hash of the surface, holonomy and scan parameters
    - wall_time:    seconds; the only field that varies between identical runs
    """
    kind: ScanKind
    surface: str
    max_len: int
    examined: int = 0
    skipped: int = 0
    violations: List[Violation] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    extra: Dict[str, Any] = Field(default_factory=dict)
    fingerprint: str = ""
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations
