import json
import xml.etree.ElementTree as ET


from fuchsian.shell import main
from fuchsian.tessellation import FundamentalDomain

NS = "{http://www.w3.org/2000/svg}"


def test_validate(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# fuchsian 0.1.0 command=validate tol=1e-09")
    assert "pass;printed_z_fails" in out


def test_validate_failure_exit_code(monkeypatch, capsys):
    import fuchsian.shell as sh
    monkeypatch.setattr(sh, "validate", lambda tol: ([], False))
    assert main(["validate"]) == 1


def test_usage_errors(capsys):
    assert main(["build", "--group", "T9"]) == 2
    assert main(["rates", "9"]) == 2
    assert main(["census", "--budget", "3"]) == 2
    assert main([]) == 2
    assert main(["--version"]) == 0


def test_build_outputs(tmp_path, capsys):
    assert main(["build", "--group", "t2", "--out-dir", str(tmp_path)]) == 0
    assert "T2: 12 walls" in capsys.readouterr().out
    dom = FundamentalDomain.from_json((tmp_path / "domain_T2.json").read_text())
    assert len(dom.walls) == 12
    meta = json.loads((tmp_path / "codebook_T2_four_nuf.json").read_text())["meta"]
    assert meta["preset"] == "four_nuf" and meta["min_distance"] > 0
    disk = ET.parse(tmp_path / "T2_four_nuf_disk.svg").getroot()
    assert len([c for c in disk.iter(NS + "circle") if c.get("class") == "codeword"]) == 2
    assert len([c for c in disk.iter(NS + "circle") if c.get("class") == "wall"]) == 12
    cons = ET.parse(tmp_path / "T2_four_nuf_constellation.svg").getroot()
    marks = [c for c in cons.iter(NS + "circle") if c.get("class") == "codeword"]
    assert len(marks) == 4
    assert sorted(float(c.get("data-im")) > 0 for c in marks) == [False, False, True, True]


def test_simulate_is_reproducible(tmp_path):
    args = ["simulate", "--group", "T1", "--sigma", "0.01", "--sigma", "0.1", "--trials", "200", "--seed", "7"]
    assert main(args + ["--out-dir", str(tmp_path / "a")]) == 0
    assert main(args + ["--out-dir", str(tmp_path / "b"), "--workers", "2"]) == 0
    a = (tmp_path / "a" / "simulate_T1_four_nuf.csv").read_bytes()
    assert a == (tmp_path / "b" / "simulate_T1_four_nuf.csv").read_bytes()
    assert a.count(b"\n") == 4


def test_census(capsys):
    assert main(["census", "--group", "T1", "--budget", "42", "--positive-products", "--radius", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "mode=positive_products" in lines[0] and "rates=T1:3" in lines[0]
    assert lines[2].startswith("T1,42,positive_products,42,1,")


def test_rates(capsys):
    assert main(["rates", "5", "7", "13"]) == 0
    lines = capsys.readouterr().out.splitlines()[1:]
    assert lines == ["p,degree,rate_bound,admissible_prime", "5,2,6,11", "7,3,9,n/a", "13,6,18,79"]
