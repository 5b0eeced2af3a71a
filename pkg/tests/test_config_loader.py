import json

import pytest
from pydantic import ValidationError

from app.errors import HolonomyError, RibbonError
from app.models.surfaces import HolonomyConfig
from app.utils.config_loader import has_holonomy, list_surfaces, load_holonomy, load_surface
from app.utils.settings import SURFACES_DIR


def write(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_shipped_surfaces():
    assert list_surfaces() == ["genus2", "pants", "sphere4", "torus1"]
    assert [load_surface(n).genus for n in ("pants", "torus1", "sphere4", "genus2")] == [0, 1, 0, 2]


def test_missing_surface():
    with pytest.raises(FileNotFoundError):
        load_surface("klein")


@pytest.mark.parametrize(
    "ribbon, boundaries",
    [("aAbB", 1), ("aabB", None), ("aAb", None)],
)
def test_bad_ribbons(tmp_path, ribbon, boundaries):
    write(tmp_path / "odd.json", {"name": "odd", "generators": 2, "ribbon": ribbon, "expected_boundaries": boundaries})
    with pytest.raises(RibbonError):
        load_surface("odd", tmp_path)


def test_malformed_surface_file(tmp_path):
    write(tmp_path / "odd.json", {"name": "odd", "generators": 0, "ribbon": ""})
    with pytest.raises(RibbonError):
        load_surface("odd", tmp_path)


def test_holonomy_config_needs_one_source():
    with pytest.raises(ValidationError):
        HolonomyConfig(surface="pants")
    with pytest.raises(ValidationError):
        HolonomyConfig(surface="pants", matrices={"a": [[1, 0]]}, trace_coordinates={"x": 3, "y": 3, "z": 3})


def test_holonomy_for_the_wrong_surface(torus):
    with pytest.raises(HolonomyError):
        load_holonomy(torus, SURFACES_DIR / "pants.holonomy.json")


def test_holonomy_missing_a_generator(tmp_path, torus):
    path = write(tmp_path / "half.json", {"surface": "torus1", "matrices": {"a": [[1, 1], [1, 2]]}})
    with pytest.raises(HolonomyError):
        load_holonomy(torus, path)


def test_holonomy_with_wrong_trace(tmp_path, torus):
    payload = json.loads((SURFACES_DIR / "torus1.holonomy.json").read_text(encoding="utf-8"))
    payload["peripheral_checks"][0]["trace"] = 4
    with pytest.raises(HolonomyError):
        load_holonomy(torus, write(tmp_path / "off.json", payload))


def test_explicit_holonomy_file_is_named_after_it(tmp_path, torus, torus_rho):
    payload = json.loads((SURFACES_DIR / "torus1.holonomy.json").read_text(encoding="utf-8"))
    rho = load_holonomy(torus, write(tmp_path / "copy.json", payload))
    assert rho.name == "copy"
    assert rho.generators == torus_rho.generators
    assert rho.twist_moves == torus_rho.twist_moves


def test_has_holonomy(sphere4, pants):
    assert has_holonomy(pants)
    assert not has_holonomy(sphere4)
