import json

import pytest

from app.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bracket_prints_sorted_terms(capsys):
    code, out, _ = run(capsys, "bracket", "pants", "aab", "aB")
    assert code == 0
    assert out == "−⟨aabaB⟩ +⟨aaBab⟩\n"


def test_bracket_of_disjoint_classes_is_zero(capsys):
    assert run(capsys, "bracket", "pants", "a", "b", "--undirected")[1] == "0\n"


def test_directed_bracket(capsys):
    assert run(capsys, "bracket", "pants", "aaB", "aB", "--directed")[1] == "0\n"


def test_bracket_json(capsys):
    code, out, _ = run(capsys, "bracket", "pants", "aab", "aB", "--json")
    assert code == 0
    assert json.loads(out) == [{"word": "aabaB", "coeff": -1}, {"word": "aaBab", "coeff": 1}]


def test_both_engines_agree(capsys):
    code, out, _ = run(capsys, "bracket", "torus1", "abAb", "aB", "--engine", "both")
    assert code == 0
    assert out.splitlines()[-1] == "ENGINES AGREE"
    assert out.startswith("comb  ")


def test_dump_linked(capsys):
    code, out, _ = run(capsys, "bracket", "pants", "aab", "aB", "--dump-linked")
    lines = out.splitlines()
    assert lines[0] == "i\tj\tsign\tzero_smoothing\tinfinity_smoothing"
    assert len(lines) == 4


@pytest.mark.parametrize(
    "argv",
    [
        ("bracket", "pants", "a1", "b"),
        ("bracket", "pants", "ac", "b"),
        ("bracket", "nowhere", "a", "b"),
        ("bracket", "sphere4", "ab", "bc", "--engine", "geom"),
    ],
)
def test_bad_input_exits_with_two(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("[error]")
    assert out == ""


def test_intersect(capsys):
    assert run(capsys, "intersect", "pants", "aab", "aB")[1] == "2\n"
    assert run(capsys, "intersect", "pants", "1", "aab")[1] == "0\n"
    code, out, _ = run(capsys, "intersect", "torus1", "a", "b", "--engine", "geom", "--crossings")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "1"
    assert len(lines) == 2 and "eps=" in lines[1]


def test_simple(capsys):
    assert run(capsys, "simple", "pants", "aab")[1] == "not simple, self-intersection 1\n"
    assert run(capsys, "simple", "pants", "ab")[1] == "simple, peripheral, self-intersection 0\n"
    assert run(capsys, "simple", "torus1", "aa")[1] == "not simple\n"


def test_enumerate(capsys):
    assert run(capsys, "enumerate", "pants", "--max-len", "1")[1] == "1\na\nb\n"
    out = run(capsys, "enumerate", "pants", "--max-len", "2", "--directed")[1]
    assert len(out.splitlines()) == 13


def test_scan_writes_a_report(capsys, tmp_path):
    code, out, _ = run(capsys, "scan", "--kind", "counting", "--surface", "pants", "--max-len", "2",
                       "--out", str(tmp_path), "--jobs", "1")
    assert code == 0
    assert "OK" in out.splitlines()
    files = list(tmp_path.glob("counting-pants-L2-*.json"))
    assert len(files) == 1
    assert json.loads(files[0].read_text(encoding="utf-8"))["kind"] == "counting"


def test_verify_goldenset(capsys, tmp_path):
    code, out, _ = run(capsys, "verify-goldenset", "--seed", "11", "--out", str(tmp_path))
    assert code == 0
    assert out.endswith("OK\n")
    assert list(tmp_path.glob("goldenset-*.json"))
