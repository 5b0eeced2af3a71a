# app/routes/brackets.py
# ------------------------------------------------------------
# Bracket, intersection, simplicity and enumeration endpoints.
# Thin layer: parse, call the services, map service errors to
# HTTP status codes.
# ------------------------------------------------------------

from __future__ import annotations

from typing import List

from fastapi import APIRouter, HTTPException

from app.errors import BracketError, RibbonError, UnsupportedError, WordParseError
from app.models.brackets import (
    BracketRequest,
    BracketResponse,
    EnumerateResponse,
    IntersectResponse,
    PairRequest,
    SimpleResponse,
    SurfaceInfo,
    Term,
)
from app.services import hyperbolic_engine as geo
from app.services.bracket_algebra import goldman_bracket, twg_bracket
from app.services.cyclic_order import intersection_number_comb, is_simple, self_intersection_comb
from app.services.surface_words import (
    DirectedClass,
    UndirectedClass,
    boundary_cycles,
    is_peripheral,
    surface_classes,
)
from app.utils.config_loader import has_holonomy, list_surfaces, load_holonomy, load_surface

router = APIRouter()

MAX_ENUMERATE_LEN = 8


def http_error(e: Exception) -> HTTPException:
    """Service error -> HTTPException with the agreed status code."""
    if isinstance(e, (WordParseError, RibbonError)):
        return HTTPException(status_code=400, detail=str(e))
    if isinstance(e, FileNotFoundError):
        return HTTPException(status_code=404, detail=str(e))
    if isinstance(e, UnsupportedError):
        return HTTPException(status_code=422, detail=str(e))
    return HTTPException(status_code=500, detail=str(e))


def _terms(lc) -> List[Term]:
    return [Term(**t) for t in lc.to_json()]


@router.get("/surfaces", response_model=List[SurfaceInfo])
async def surfaces() -> List[SurfaceInfo]:
    out = []
    for name in list_surfaces():
        try:
            s = load_surface(name)
        except (BracketError, FileNotFoundError) as e:
            raise http_error(e)
        out.append(
            SurfaceInfo(
                name=s.name,
                generators=s.n,
                ribbon=s.ribbon_str(),
                genus=s.genus,
                boundaries=[str(c) for c in boundary_cycles(s)],
                description=s.description,
                holonomy=s.name if has_holonomy(s) else None,
            )
        )
    return out


@router.post("/bracket", response_model=BracketResponse)
async def bracket(body: BracketRequest) -> BracketResponse:
    try:
        s = load_surface(body.surface)
        if body.directed:
            x, y = DirectedClass.parse(body.x, s.n), DirectedClass.parse(body.y, s.n)
            comb = goldman_bracket(x, y, s) if body.engine != "geom" else None
        else:
            x, y = UndirectedClass.parse(body.x, s.n), UndirectedClass.parse(body.y, s.n)
            comb = twg_bracket(x, y, s) if body.engine != "geom" else None
        geom = None
        if body.engine in ("geom", "both"):
            rho = load_holonomy(s)
            geom = geo.geometric_goldman(rho, x, y) if body.directed else geo.geometric_twg(rho, x, y)
    except (BracketError, FileNotFoundError) as e:
        raise http_error(e)

    main = comb if comb is not None else geom
    return BracketResponse(
        surface=s.name,
        x=str(x),
        y=str(y),
        directed=body.directed,
        terms=_terms(main),
        text=str(main),
        multiplicity=main.total_multiplicity(),
        geometric_terms=_terms(geom) if body.engine == "both" else None,
        engines_agree=(comb == geom) if body.engine == "both" else None,
    )


@router.post("/intersect", response_model=IntersectResponse)
async def intersect(body: PairRequest) -> IntersectResponse:
    try:
        s = load_surface(body.surface)
        x, y = UndirectedClass.parse(body.x, s.n), UndirectedClass.parse(body.y, s.n)
        if body.engine == "geom":
            i = geo.intersection_number_geom(load_holonomy(s), x, y)
        else:
            i = intersection_number_comb(x, y, s)
    except (BracketError, FileNotFoundError) as e:
        raise http_error(e)
    return IntersectResponse(surface=s.name, x=str(x), y=str(y), intersection=i, engine=body.engine)


@router.get("/simple", response_model=SimpleResponse)
async def simple(surface: str, x: str) -> SimpleResponse:
    try:
        s = load_surface(surface)
        c = UndirectedClass.parse(x, s.n)
        si = self_intersection_comb(c, s) if c.is_trivial() or c.root()[1] == 1 else None
        return SimpleResponse(
            surface=s.name, x=str(c), simple=is_simple(c, s), peripheral=is_peripheral(c, s), self_intersection=si
        )
    except (BracketError, FileNotFoundError) as e:
        raise http_error(e)


@router.get("/enumerate", response_model=EnumerateResponse)
async def enumerate_(surface: str, max_len: int = 3, directed: bool = False) -> EnumerateResponse:
    if not 0 <= max_len <= MAX_ENUMERATE_LEN:
        raise HTTPException(status_code=400, detail=f"max_len must be between 0 and {MAX_ENUMERATE_LEN}")
    try:
        s = load_surface(surface)
    except (BracketError, FileNotFoundError) as e:
        raise http_error(e)
    classes = surface_classes(s, max_len, undirected=not directed)
    return EnumerateResponse(
        surface=s.name,
        max_len=max_len,
        directed=directed,
        count=len(classes),
        classes=[str(c) or "1" for c in classes],
    )
