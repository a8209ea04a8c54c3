import json
import subprocess
import sys

import pytest

from sexticwaring.cli import dumps, main
from sexticwaring.pointsets import pointset_from_json, max_match_distance


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    data = json.loads(out)
    assert data["schema_version"] == 1
    return data


def test_classify_text_and_json(capsys, fixtures_dir):
    f = fixtures_dir / "x0x1x2_squared.json"
    code, out, _ = run(capsys, "classify", f)
    assert code == 0 and "Wprime" in out and "rank_C3=7" in out
    data = run_json(capsys, "classify", f, "--json")
    assert data["label"] == "Wprime" and data["expected_decompositions"] == "infinite"


def test_classify_many(capsys, fixtures_dir):
    f = fixtures_dir / "x0x1x2_squared.json"
    g = fixtures_dir / "identity_810_form.json"
    data = run_json(capsys, "classify", f, g, "--json")
    assert [r["label"] for r in data["reports"]] == ["Wprime", "Wprime"]


def test_verify_golden_identity(capsys, fixtures_dir):
    data = run_json(
        capsys, "verify", fixtures_dir / "identity_810_form.json", fixtures_dir / "identity_810_expression.json"
    )
    assert data["residual"] < 1e-10 and data["non_redundant"]


def test_hvector_fixtures(capsys, fixtures_dir):
    data = run_json(capsys, "hvector", fixtures_dir / "ci33_points.json")
    assert data == {"h_vector": [1, 2, 3, 2, 1], "cardinality": 9, "ci33": True, "schema_version": 1}
    data = run_json(capsys, "hvector", fixtures_dir / "ci36_points.json")
    assert data["h_vector"] == [1, 2, 3, 3, 3, 3, 2, 1]


def test_wprime_from_fermat_cubics(capsys, fixtures_dir):
    files = [fixtures_dir / f"fermat_cubic_{i}.json" for i in (1, 2, 3)]
    data = run_json(capsys, "wprime", *files)
    assert data["form"]["coefficients"] == [{"e": [2, 2, 2], "v": "1"}]
    assert data["report"]["label"] == "Wprime"


def test_intersect(capsys, fixtures_dir):
    data = run_json(capsys, "intersect", fixtures_dir / "fermat_cubic_1.json", fixtures_dir / "fermat_cubic_2.json")
    assert data["total"] == 9 and data["multiplicities"] == [1] * 9


def test_random_decompose_second_round_trip(capsys, tmp_path):
    prefix = tmp_path / "r9"
    data = run_json(capsys, "random", "--rank", 9, "--seed", 3, "--out", prefix)
    form, witness = data["files"]
    inv = run_json(capsys, "invariants", form)
    assert inv["rank_C3"] == 9 and not inv["H27_vanishes"]
    second = run_json(capsys, "second", form, witness)
    assert second["h_vector_union"] == [1, 2, 3, 3, 3, 3, 2, 1]
    assert second["residual"] < 1e-8

    run_json(capsys, "random", "--rank", 8, "--seed", 3, "--out", tmp_path / "r8")
    dec = run_json(capsys, "decompose", tmp_path / "r8_form.json")
    assert dec["verdict"] == "Rank8" and len(dec["points"]) == 8
    got = pointset_from_json(dec)
    want = pointset_from_json(json.loads((tmp_path / "r8_witness.json").read_text()))
    assert max_match_distance(got, want) < 1e-8


def test_terracini(capsys, fixtures_dir, tmp_path):
    data = run_json(capsys, "terracini", fixtures_dir / "ci33_points.json", "--aux", "1,2,3")
    assert data["rank_T"] == 25
    assert data["aux"] == ["1/3", "2/3", "1"]
    assert data["note"].startswith("DegenerateCubicSystem")
    run_json(capsys, "random", "--rank", 9, "--seed", 2, "--out", tmp_path / "g")
    data = run_json(capsys, "terracini", tmp_path / "g_witness.json")
    assert data["rank_T"] == 27
    assert data["lambda"] == "246865184190596510778200555429214581296852012892160000000000000000000000000000000"


def test_precondition_exit_code(capsys, fixtures_dir, tmp_path):
    code, out, err = run(capsys, "decompose", fixtures_dir / "x0x1x2_squared.json")
    assert code == 2 and out == ""
    assert err.startswith("KernelWrongSize:")
    code, _, err = run(capsys, "classify", tmp_path / "missing.json")
    assert code == 2 and "no such file" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "hvector", bad)[0] == 2


def test_float_formatting():
    text = dumps({"a": 0.1, "b": 1.0, "c": [1e-20, 2.5]})
    assert json.loads(text) == {"a": 0.1, "b": 1.0, "c": [1e-20, 2.5], "schema_version": 1}
    assert '"b": 1.0' in text or '"b":1.0' in text


def test_console_script(fixtures_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "sexticwaring.cli", "hvector", str(fixtures_dir / "ci33_points.json")],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(proc.stdout)["h_vector"] == [1, 2, 3, 2, 1]


def test_numerical_exit_code(capsys, fixtures_dir, monkeypatch):
    from sexticwaring import cli
    from sexticwaring.errors import IllConditioned

    def boom(*args, **kwargs):
        raise IllConditioned("synthetic failure")

    monkeypatch.setattr(cli, "intersect_curves", boom)
    code, _, err = run(capsys, "intersect", fixtures_dir / "fermat_cubic_1.json", fixtures_dir / "fermat_cubic_2.json")
    assert code == 3 and err.strip() == "IllConditioned: synthetic failure"
