from __future__ import annotations

import json

import pytest

from ppmod import pipeline as pl
from ppmod.cli import main
from ppmod.fps_calculus import MuLabel


def test_enumerate_n1_and_n2():
    one = pl.cmd_enumerate(1)["labels"]
    assert len(one) == 1 and one[0]["vertex_order"] == 2 and one[0]["mu"] == "(0,2)"
    two = pl.cmd_enumerate(2)["labels"]
    assert sorted(r["vertex_order"] for r in two) == [4, 8]


def test_enumerate_range():
    for bad in (0, 6):
        with pytest.raises(pl.UsageError):
            pl.cmd_enumerate(bad)


@pytest.mark.parametrize("n,expected", [(2, {1: "(0,4)", 2: "(4,0)"}),
                                        (3, {1: "(0,6)", 14: "(4,2)"}),
                                        (4, {1: "(0,8)", 28: "(8,0)", 76: "(4,4)"})])
def test_decompose_matches_labels(n, expected):
    data = pl.cmd_decompose(n)
    assert {c["dimension"]: c["mu"] for c in data["components"]} == expected
    assert all(c["vertex"] == c["mu"] for c in data["components"])


def test_decompose_needs_n_at_least_two():
    with pytest.raises(pl.UsageError):
        pl.cmd_decompose(1)


def test_character_rows():
    one = pl.cmd_character(mu=MuLabel.parse("(4,0)"))["rows"]
    assert one[0]["constituents"] == [[2, 2]] and one[0]["dimension"] == 2
    table = pl.cmd_character(n=4)
    assert len(table["rows"]) == 3 and table["sum_equals_permutation_character"]
    trivial = pl.cmd_character(mu=MuLabel(3, 0))["rows"][0]
    assert set(trivial["values"].values()) == {1}


def test_pair_coset_type():
    from ppmod.perm_core import Permutation
    a = Permutation.parse("(1 2)(3 4)", 4)
    b = Permutation.parse("(1 3)(2 4)", 4)
    assert pl.pair_coset_type(a, a) == (1, 1)
    assert pl.pair_coset_type(a, b) == (2,)


def test_verify_n2_passes_with_all_checks():
    report = pl.cmd_verify(2)
    assert report.passed
    assert tuple(report.checks) == pl.CHECK_NAMES
    assert all(c.status == "pass" for c in report.checks.values())
    payload = report.to_json()
    assert payload["schema"] == 1 and payload["status"] == "pass"
    assert "timings" not in payload


def test_verify_skip_decompose():
    report = pl.cmd_verify(5, skip_decompose=True)
    statuses = {k: v.status for k, v in report.checks.items()}
    assert statuses["component_count"] == "skipped"
    assert statuses["perm_character_identity"] == "pass"
    assert report.passed and report.components == []


def test_vertex_from_brauer_needs_strict_maximum():
    specs = {mu: pl.fps.vertex_spec(mu) for mu in pl.fps.enumerate_mu(4)}
    assert pl.vertex_from_brauer({"(0,8)": 0, "(4,4)": 1, "(8,0)": 1}, specs) is None
    assert str(pl.vertex_from_brauer({"(0,8)": 1, "(4,4)": 1, "(8,0)": 1}, specs)) == "(0,8)"
    assert pl.vertex_from_brauer({"(0,8)": 0, "(4,4)": 0, "(8,0)": 0}, specs) is None


def test_cli_verify_json_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--n", "2", "--json", str(a)]) == 0
    assert main(["verify", "--n", "2", "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["schema"] == 1 and set(data["checks"]) == set(pl.CHECK_NAMES)
    out = capsys.readouterr().out
    assert "overall" in out and "PASS" in out


def test_cli_exit_codes(capsys):
    assert main(["verify", "--n", "0"]) == 2
    assert main(["enumerate", "--n", "9"]) == 2
    assert main(["decompose", "--n", "3", "--max-elements", "5"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
    assert main(["characters", "--mu", "(2,2)"]) == 2


def test_cli_other_commands(tmp_path, capsys):
    path = tmp_path / "c.json"
    assert main(["enumerate", "--n", "3"]) == 0
    assert main(["decompose", "--n", "3"]) == 0
    assert main(["characters", "--n", "2", "--json", str(path)]) == 0
    data = json.loads(path.read_text())
    assert data["schema"] == 1 and data["sum_equals_permutation_character"] is True
    out = capsys.readouterr().out
    assert "(4,2)" in out


def test_cli_verify_failure_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(pl, "check_kappa", lambda: pl.CheckResult("fail", "forced"))
    assert main(["verify", "--n", "1"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_render_table():
    text = pl.render_table(["a", "bb"], [[1, 22], [333, 4]])
    assert text.splitlines()[0] == "  a  bb"
    assert len(text.splitlines()) == 4


@pytest.mark.parametrize("n", [2, 3, 4])
def test_product_cycles_pair_up(n):
    from ppmod.perm_core import cycle_type, fpf_involutions
    invs = fpf_involutions(2 * n)
    for a in invs[:6]:
        for b in invs:
            ct = cycle_type(a * b)
            assert ct[::2] == ct[1::2]
            assert sum(pl.pair_coset_type(a, b)) == n
