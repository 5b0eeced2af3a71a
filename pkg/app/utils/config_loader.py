# app/utils/config_loader.py
# ------------------------------------------------------------
# Surface + holonomy file loader
#
#   app/surfaces/<name>.json           -> SurfacePresentation
#   app/surfaces/<name>.holonomy.json  -> Holonomy (validated)
#
# A holonomy may also be loaded from an explicit path (--holonomy).
# Missing files raise FileNotFoundError; malformed content raises
# RibbonError / HolonomyError from the services.
# ------------------------------------------------------------

import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Union

from pydantic import ValidationError

from app.errors import HolonomyError, RibbonError
from app.models.surfaces import HolonomyConfig, SurfaceConfig
from app.services.hyperbolic_engine import Holonomy, PeripheralCheck
from app.services.surface_words import ALPHABET, SurfacePresentation, parse_word
from app.utils.settings import SURFACES_DIR

logger = logging.getLogger(__name__)

HOLONOMY_SUFFIX = ".holonomy.json"


def _read_json(path: Path) -> dict:
    if not path.exists():
        raise FileNotFoundError(f"{path.name} not found in {path.parent}")
    return json.loads(path.read_text(encoding="utf-8"))


def list_surfaces(directory: Path = SURFACES_DIR) -> List[str]:
    return sorted(
        p.name[: -len(".json")]
        for p in directory.glob("*.json")
        if not p.name.endswith(HOLONOMY_SUFFIX)
    )


def surface_from_config(cfg: SurfaceConfig) -> SurfacePresentation:
    ribbon = parse_word(cfg.ribbon, cfg.generators)
    return SurfacePresentation.build(
        name=cfg.name,
        n=cfg.generators,
        ribbon=ribbon,
        expected_boundaries=cfg.expected_boundaries,
        description=cfg.description,
    )


@lru_cache(maxsize=32)
def load_surface(name: str, directory: Path = SURFACES_DIR) -> SurfacePresentation:
    """Load app/surfaces/<name>.json."""
    try:
        cfg = SurfaceConfig(**_read_json(directory / f"{name}.json"))
    except ValidationError as e:
        raise RibbonError(f"surface file {name}.json is malformed: {e}") from e
    surface = surface_from_config(cfg)
    logger.info(
        f"surface {surface.name} loaded: n={surface.n}, genus={surface.genus}, "
        f"boundaries={[str(c) for c in surface.peripheral]}"
    )
    return surface


def holonomy_from_config(cfg: HolonomyConfig, surface: SurfacePresentation, name: str) -> Holonomy:
    n = surface.n
    checks = tuple(PeripheralCheck(parse_word(c.word, n), c.type, c.trace) for c in cfg.peripheral_checks)
    twist_curve, moves = (), ()
    if cfg.twist is not None:
        twist_curve = parse_word(cfg.twist.curve, n)
        moves = tuple(sorted((parse_word(k, n)[0], v) for k, v in cfg.twist.moves.items()))
    common = dict(checks=checks, twist_curve=twist_curve, twist_moves=moves, description=cfg.description)

    if cfg.trace_coordinates is not None:
        tc = cfg.trace_coordinates
        return Holonomy.from_trace_coordinates(name, surface, tc.x, tc.y, tc.z, **common)

    gens = []
    for k in range(1, n + 1):
        key = ALPHABET[k - 1]
        if key not in cfg.matrices:
            raise HolonomyError(f"holonomy {name}: no matrix for generator {key}")
        (a, b), (c, d) = cfg.matrices[key]
        gens.append((a, b, c, d))
    return Holonomy.build(name=name, surface=surface, generators=tuple(gens), **common)


def load_holonomy(
    surface: SurfacePresentation,
    path: Optional[Union[str, Path]] = None,
    directory: Path = SURFACES_DIR,
) -> Holonomy:
    """Load the shipped holonomy of a surface, or the file at `path`."""
    file = Path(path) if path else directory / f"{surface.name}{HOLONOMY_SUFFIX}"
    try:
        cfg = HolonomyConfig(**_read_json(file))
    except ValidationError as e:
        raise HolonomyError(f"holonomy file {file.name} is malformed: {e}") from e
    if cfg.surface != surface.name:
        raise HolonomyError(f"holonomy file {file.name} is for surface {cfg.surface}, not {surface.name}")
    rho = holonomy_from_config(cfg, surface, name=surface.name if not path else file.stem)
    logger.info(f"holonomy {rho.name} loaded for {surface.name} (orientation {rho.orientation:+d})")
    return rho


def has_holonomy(surface: SurfacePresentation, directory: Path = SURFACES_DIR) -> bool:
    return (directory / f"{surface.name}{HOLONOMY_SUFFIX}").exists()
