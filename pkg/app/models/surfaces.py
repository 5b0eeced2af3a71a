# app/models/surfaces.py
# ------------------------------------------------------------
# On-disk surface and holonomy configuration (app/surfaces/*.json).
# Validation here is structural only; the services check the
# topology (ribbon, boundary count) and the numerics (det, traces).
# ------------------------------------------------------------

from __future__ import annotations

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class SurfaceConfig(BaseModel):
    """
    Ribbon presentation of a surface with free fundamental group.

    Fields:
    - name:                 surface key used by the CLI and the API
    - generators:           number of free generators n
    - ribbon:               cyclic order of the 2n half-edges, e.g. 'aAbB'
    - expected_boundaries:  number of boundary cycles the ribbon must produce
    - description:          free text
    """
    name: str = Field(min_length=1)
    generators: int = Field(ge=1, le=26)
    ribbon: str
    expected_boundaries: Optional[int] = Field(None, ge=1)
    description: str = ""


class TraceCheck(BaseModel):
    """
    Fields:
    - word:   word in the generators
    - type:   'hyperbolic' or 'parabolic'
    - trace:  expected trace, or null for a type-only check
    """
    word: str
    type: Literal["hyperbolic", "parabolic"]
    trace: Optional[float] = None


class TraceCoordinates(BaseModel):
    """Traces of a, b and ab for the three-holed sphere construction."""
    x: float
    y: float
    z: float


class TwistConfig(BaseModel):
    """
    Fields:
    - curve:  simple closed curve twisted along (a word)
    - moves:  generator letter -> 'left' (M -> E M) or 'conjugate' (M -> E M E^-1)
    """
    curve: str
    moves: Dict[str, Literal["left", "conjugate"]]


class HolonomyConfig(BaseModel):
    """
    Fields:
    - surface:            surface key this holonomy realizes
    - matrices:           generator letter -> [[a, b], [c, d]]
    - trace_coordinates:  alternative to matrices, pair of pants only
    - peripheral_checks:  trace conditions verified at load
    - twist:              optional twist block
    """
    surface: str
    matrices: Optional[Dict[str, List[List[float]]]] = None
    trace_coordinates: Optional[TraceCoordinates] = None
    peripheral_checks: List[TraceCheck] = Field(default_factory=list)
    twist: Optional[TwistConfig] = None
    description: str = ""

    @model_validator(mode="after")
    def _one_source(self) -> "HolonomyConfig":
        if (self.matrices is None) == (self.trace_coordinates is None):
            raise ValueError("give exactly one of 'matrices' or 'trace_coordinates'")
        for letter, m in (self.matrices or {}).items():
            if len(m) != 2 or any(len(row) != 2 for row in m):
                raise ValueError(f"matrix for {letter!r} must be 2x2")
        return self
