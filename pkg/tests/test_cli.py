import json
import subprocess
import sys
from pathlib import Path

import pytest

from fanocurves import catalog
from fanocurves.cli import main, read_seeds
from fanocurves.errors import ParseError
from fanocurves.field import OMEGA
from fanocurves.poly import cubic_to_text

GOLDEN = Path(__file__).parent / "golden"


def data(fid):
    return str(catalog.data_file(fid))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cubic_file(tmp_path):
    def write(f, name="input.cubic"):
        path = tmp_path / name
        path.write_text(cubic_to_text(f))
        return str(path)

    return write


def test_verify_fermat(capsys):
    code, out, _ = run(capsys, "verify", data("G(3,3,5)"))
    rep = json.loads(out)
    assert code == 0
    assert rep["n_S"] == 30 and rep["group"]["order"] == 9720
    assert rep["class_label"] == "G(3,3,5)" and rep["complete"] is True
    assert rep["group"]["reflection_count"] == 30
    assert len(rep["curves"]) == 30 and len(rep["intersection_matrix"]) == 30
    assert len(rep["graphs"]["incidence"]) == 30 * 9 // 2
    assert rep["warnings"] == [] and rep["violations"] == []
    assert "timings" not in rep


def test_isogeny_verb(capsys):
    code, out, _ = run(capsys, "isogeny", data("G(3,3,3)xG(3,3,2)"), "E[1,2]^1", "E[2,3]^1", "E[1,2]^w", "E[4,5]^1", "E[4,5]^w")
    assert code == 0 and out == "degree_norm = 81\n"


def test_isogeny_json_and_unknown_label(capsys):
    labels = ["E[1,2]^1", "E[2,3]^1", "E[1,2]^w2", "E[4,5]^1", "E[4,5]^w2"]
    code, out, _ = run(capsys, "isogeny", data("G(3,3,3)xG(3,3,2)"), *labels, "--format", "json")
    assert code == 0 and json.loads(out)["degree_norm"] == "81"
    code, _, err = run(capsys, "isogeny", data("G(3,3,3)xG(3,3,2)"), "E[1,2]^1", "E[2,3]^1", "E[1,2]^w", "E[4,5]^1", "E[9,9]^1")
    assert code == 1 and "E[9,9]^1" in err


def test_verify_klein_copy_is_pinned(capsys, cubic_file):
    # a reformatted copy of the pinned Klein cubic still matches its pin
    path = cubic_file(catalog.pinned("trivial"))
    code, out, _ = run(capsys, "verify", path)
    rep = json.loads(out)
    assert code == 0 and rep["n_S"] == 0 and rep["class_label"] == "trivial" and rep["complete"] is True


def test_unpinned_cubic_is_lower_bound(capsys, cubic_file):
    path = cubic_file(catalog.instantiate("G(3,3,3)xG(3,3,2)", lam=3))
    code, out, _ = run(capsys, "classify", path)
    rep = json.loads(out)
    assert code == 0 and rep["class_label"] == "G(3,3,3)xG(3,3,2)"
    assert rep["complete"] is False
    assert any("lower bound" in w for w in rep["warnings"])


def test_scan_warning_and_disable(capsys):
    _, out, _ = run(capsys, "classify", data("G(3,3,3)xG(3,3,2)"))
    assert any("mod 7" in w for w in json.loads(out)["warnings"])
    _, out, _ = run(capsys, "classify", data("G(3,3,3)xG(3,3,2)"), "--scan-prime", "13")
    assert json.loads(out)["warnings"] == []
    _, out, _ = run(capsys, "classify", data("G(3,3,3)xG(3,3,2)"), "--scan-prime", "0")
    assert json.loads(out)["warnings"] == []


def test_scan_prime_must_be_prime(capsys):
    code, _, _ = run(capsys, "classify", data("S5"), "--scan-prime", "9")
    assert code == 1


def test_parse_errors_exit_3(capsys, tmp_path):
    text = cubic_to_text(catalog.pinned("G(3,3,5)"))
    bad = tmp_path / "bad.cubic"
    bad.write_text(text.replace('[0, 3, 0, 0, 0], "coeff": "1"', '[0, 2, 0, 0, 0], "coeff": "1"'))
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 3 and "non-homogeneous (degree 2)" in err and "line" in err
    bad.write_text(text.replace('"coeff": "1"}', '"coeff": "1/0"}', 1))
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 3


def test_missing_file_exit_1(capsys, tmp_path):
    code, _, err = run(capsys, "verify", str(tmp_path / "nope.cubic"))
    assert code == 1 and "cannot read" in err


def test_cap_exceeded_exit_4(capsys):
    code, _, err = run(capsys, "classify", data("G(3,3,5)"), "--max-order", "100")
    assert code == 4 and "exceeded" in err


def test_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("FANOCURVES_MAX_ORDER", "100")
    code, _, _ = run(capsys, "classify", data("S5"))
    assert code == 4


def test_too_many_vertices_exit_2(capsys, tmp_path):
    # x1^3 + x2^3 + x3^3 is a cone with a line of vertices
    x = catalog.X
    path = tmp_path / "cone.cubic"
    path.write_text(cubic_to_text(x[0] ** 3 + x[1] ** 3 + x[2] ** 3))
    code, _, err = run(capsys, "classify", str(path), "--scan-prime", "0")
    assert code == 2


def test_usage_error_exit_1(capsys):
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "verify")[0] == 1


def test_intersections_and_planemodels(capsys):
    code, out, _ = run(capsys, "intersections", data("S5"))
    rep = json.loads(out)
    assert code == 0 and len(rep["graphs"]["incidence"]) == 15
    code, out, _ = run(capsys, "planemodels", data("G(3,3,5)"))
    rep = json.loads(out)
    assert code == 0 and rep["curves"][0]["plane_model"] == "s^3 + t^3 + r^3"
    assert len(rep["curves"][0]["plane_basis"]) == 3


def test_seeds_file(capsys, tmp_path):
    seeds = tmp_path / "seeds.txt"
    seeds.write_text("# two disjoint vertices of F_2\n1, -1, 0, 0, 0\n(0 0 0 1 -w)  # E[4,5]^w\n\n")
    assert [p.to_strings() for p in read_seeds(seeds)] == [["1", "-1", "0", "0", "0"], ["0", "0", "0", "1", "-w"]]
    code, out, _ = run(capsys, "classify", data("G(3,3,3)xG(3,3,2)"), "--seeds", str(seeds), "--scan-prime", "0")
    rep = json.loads(out)
    assert code == 0 and rep["n_S"] == 2 and rep["class_label"] == "[]2x[]2" and rep["complete"] is False
    # vertices of generating reflections recover the whole configuration
    seeds.write_text("1,-1,0,0,0\n1,-w,0,0,0\n0,1,-1,0,0\n0,0,0,1,-1\n0,0,0,1,-w\n")
    code, out, _ = run(capsys, "classify", data("G(3,3,3)xG(3,3,2)"), "--seeds", str(seeds), "--scan-prime", "0")
    assert json.loads(out)["n_S"] == 12


def test_seeds_file_errors(tmp_path):
    seeds = tmp_path / "seeds.txt"
    seeds.write_text("1, -1, 0, 0\n")
    with pytest.raises(ParseError, match="line 1"):
        read_seeds(seeds)
    seeds.write_text("1, -1, 0, 0, 0\n1, 1/0, 0, 0, 0\n")
    with pytest.raises(ParseError, match="line 2, column 4"):
        read_seeds(seeds)
    seeds.write_text("0, 0, 0, 0, 0\n")
    with pytest.raises(ParseError):
        read_seeds(seeds)


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0 and len(out.splitlines()) == 10 and "G(3,3,5)" in out
    code, out, _ = run(capsys, "catalog", "list", "--format", "json")
    assert len(json.loads(out)["families"]) == 10


def test_catalog_instantiate(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "instantiate", "G(3,3,3)xG(3,3,2)", "--param", "lam=2")
    assert code == 0 and out == cubic_to_text(catalog.pinned("G(3,3,3)xG(3,3,2)"))
    target = tmp_path / "g332.cubic"
    code, _, _ = run(capsys, "catalog", "instantiate", "g332", "--param", "l=1,0,-w", "--param", "lam=1/2", "-o", str(target))
    assert code == 0
    assert target.read_text() == cubic_to_text(catalog.instantiate("G(3,3,2)", l=(1, 0, -OMEGA), lam="1/2"))


def test_catalog_instantiate_cubic_parameter(capsys, tmp_path):
    x = catalog.X
    g = tmp_path / "g.cubic"
    g.write_text(cubic_to_text(x[1] ** 3 + x[2] ** 3 + x[3] ** 3 + x[4] ** 3))
    code, out, _ = run(capsys, "catalog", "instantiate", "[]2", "--param", f"G=@{g}")
    assert code == 0 and '"exponents": [2, 1, 0, 0, 0]' in out


def test_catalog_instantiate_errors(capsys):
    assert run(capsys, "catalog", "instantiate", "G(3,3,3)xG(3,3,2)", "--param", "lam=1")[0] == 1
    assert run(capsys, "catalog", "instantiate", "nope")[0] == 1
    assert run(capsys, "catalog", "instantiate", "S5", "--param", "zeta=1")[0] == 1
    assert run(capsys, "catalog", "instantiate", "S5", "--param", "lam")[0] == 1
    assert run(capsys, "catalog", "instantiate", "S5", "--param", "lam=1/0")[0] == 3


def test_timings_flag(capsys):
    _, out, _ = run(capsys, "verify", data("S4"), "--timings")
    assert set(json.loads(out)["timings"]) == {"singular_scan", "pipeline", "invariants"}


@pytest.mark.parametrize("name, argv", [
    ("g332_verify.json", ["verify", "G(3,3,2)"]),
    ("g333xg332_verify.txt", ["verify", "G(3,3,3)xG(3,3,2)", "--format", "text"]),
])
def test_golden_reports(capsys, name, argv):
    argv = [argv[0], data(argv[1]), *argv[2:]]
    _, out, _ = run(capsys, *argv)
    assert out == (GOLDEN / name).read_text()


def test_reports_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "fanocurves", "verify", data("G(3,3,2)xG(3,3,2)")]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first


def test_selftest_subprocess():
    res = subprocess.run([sys.executable, "-m", "fanocurves", "selftest"], capture_output=True, text=True)
    assert res.returncode == 0, res.stdout
    lines = res.stdout.splitlines()
    assert sum(line.startswith("[PASS]") for line in lines) == 8
