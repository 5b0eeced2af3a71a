# app/models/brackets.py
# ------------------------------------------------------------
# Request / response models for the bracket endpoints and the
# JSON form of a linear combination of classes.
# ------------------------------------------------------------

from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel, Field


class Term(BaseModel):
    """
    One term of a linear combination.

    Fields:
    - word:   canonical representative of the class
    - coeff:  nonzero integer coefficient
    """
    word: str
    coeff: int


class BracketRequest(BaseModel):
    """
    Fields:
    - surface:   surface key ('pants', 'torus1', ...)
    - x, y:      words in the surface generators
    - directed:  Goldman bracket of directed classes when True, TWG otherwise
    - engine:    'comb', 'geom' or 'both'
    """
    surface: str
    x: str = Field(min_length=1)
    y: str = Field(min_length=1)
    directed: bool = False
    engine: Literal["comb", "geom", "both"] = "comb"


class BracketResponse(BaseModel):
    surface: str
    x: str
    y: str
    directed: bool
    terms: List[Term]
    text: str
    multiplicity: int
    geometric_terms: Optional[List[Term]] = None
    engines_agree: Optional[bool] = None


class PairRequest(BaseModel):
    surface: str
    x: str = Field(min_length=1)
    y: str = Field(min_length=1)
    engine: Literal["comb", "geom"] = "comb"


class IntersectResponse(BaseModel):
    """
    Fields:
    - intersection:  minimal number of crossings of x and y
    - engine:        which engine produced it
    """
    surface: str
    x: str
    y: str
    intersection: int
    engine: str


class SimpleResponse(BaseModel):
    """
    Fields:
    - simple:             has a representative without self crossings
    - peripheral:         trivial or a power of a boundary class
    - self_intersection:  minimal number of self crossings (null for proper powers)
    """
    surface: str
    x: str
    simple: bool
    peripheral: bool
    self_intersection: Optional[int] = None


class EnumerateResponse(BaseModel):
    surface: str
    max_len: int
    directed: bool
    count: int
    classes: List[str]


class SurfaceInfo(BaseModel):
    """
    Fields:
    - boundaries:  boundary classes read off the ribbon
    - holonomy:    name of the shipped holonomy, if any
    """
    name: str
    generators: int
    ribbon: str
    genus: int
    boundaries: List[str]
    description: str = ""
    holonomy: Optional[str] = None
