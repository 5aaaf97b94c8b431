import io
import json
import subprocess
import sys
from importlib import resources

import numpy as np
import pytest

from occ import moduli
from occ.cli import main, report_summary
from occ.formal_series import CoordSeq

from .conftest import pad


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    records = [json.loads(line) for line in out.splitlines() if line.strip()]
    return code, records, err


def _fib():
    return json.loads(resources.files("occ.data").joinpath("fib.json").read_text())


def test_props_operad_passes(capsys):
    code, records, err = _run(capsys, "props", "--suite", "operad", "--seed", "42", "--trials", "20", "--order", "8")
    assert code == 0
    assert len(records) >= 5
    assert set(records[0]) == {"check", "paper_ref", "residual", "threshold", "pass"}
    assert all(r["pass"] and r["check"].startswith("operad:") for r in records)
    assert "checks, 0 failed" in err


def test_props_is_deterministic(capsys):
    argv = ["props", "--suite", "series", "--seed", "7", "--trials", "5"]
    _, a, _ = _run(capsys, *argv)
    _, b, _ = _run(capsys, *argv)
    assert a == b


@pytest.mark.parametrize("data", ["fib", "ising", "z2_qi"])
def test_verify_category_shipped(capsys, data):
    code, records, _ = _run(capsys, "verify-category", "--data", data)
    assert code == 0 and records
    assert max(r["residual"] for r in records) < 1e-9


def test_verify_category_flags_flipped_braiding(capsys, tmp_path):
    d = _fib()
    re, im = d["R"][0]["v"]
    d["R"][0]["v"] = [re, -im]
    p = tmp_path / "fib_bad.json"
    p.write_text(json.dumps(d))
    code, records, _ = _run(capsys, "verify-category", "--data", str(p), "--index-only")
    assert code == 1
    failing = [r["check"] for r in records if not r["pass"]]
    assert any("hexagon" in c for c in failing)


def test_verify_category_bad_input(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert _run(capsys, "verify-category", "--data", str(p))[0] == 2
    assert _run(capsys, "verify-category", "--data", str(tmp_path / "missing.json"))[0] == 2


def test_usage_errors(capsys):
    assert main(["no-such-command"]) == 2
    assert main([]) == 2
    assert main(["props", "--suite", "operad", "--order", "1"]) == 2
    capsys.readouterr()


def test_occ_tol_environment(capsys, monkeypatch):
    monkeypatch.setenv("OCC_TOL", "1e-30")
    code, records, _ = _run(capsys, "verify-algebra", "--algebra", "alg_ising_diag")
    assert code == 1
    assert all(r["threshold"] == 1e-30 for r in records)
    monkeypatch.setenv("OCC_TOL", "nope")
    assert _run(capsys, "verify-algebra", "--algebra", "alg_ising_diag")[0] == 2


def test_verify_algebra_and_left_center(capsys, tmp_path):
    code, records, _ = _run(capsys, "verify-algebra", "--algebra", "alg_fib_diag")
    assert code == 0
    assert any(r["check"] == "T-algebra:T(A):comm-T-cl" for r in records)
    out = tmp_path / "lc.json"
    code, records, err = _run(capsys, "left-center", "--algebra", "alg_ising_noncomm", "--out", str(out))
    assert code == 0
    assert json.loads(out.read_text()) == {"summands": [["1", "1", 1]]}


def test_twisted_algebra_exits_one(capsys):
    code, records, _ = _run(capsys, "verify-algebra", "--algebra", "alg_fib_twist")
    assert code == 1
    failing = [r["check"] for r in records if not r["pass"]]
    assert "algebra:trivial-twist" in failing
    assert all(r["pass"] for r in records if r["check"].endswith("associativity"))


def test_build_oc(capsys):
    code, records, _ = _run(capsys, "build-oc", "--algebra", "alg_ising_diag", "--sub", "1,1", "p,p")
    assert code == 0
    names = [r["check"] for r in records]
    assert "open-closed:(d) sigma1-commutativity" in names
    assert "open-closed:round-trip iota" in names


def test_double_example(capsys, tmp_path):
    a = CoordSeq(1.5 + 0.5j, pad(0.1j, 0.2))
    b = CoordSeq(2.0, pad(0.3, -0.1))
    P = moduli.DiskElement((), pad(0.05, 0.01), (b,), (1j,), (a,))
    src = tmp_path / "p.json"
    src.write_text(moduli.dumps(P))
    out = tmp_path / "d.json"
    assert main(["double", "--in", str(src), "--out", str(out)]) == 0
    S = moduli.from_json(json.loads(out.read_text()))
    assert S.punctures == (1j, -1j)
    assert S.coords[1] == CoordSeq(1.5 - 0.5j, pad(-0.1j, 0.2))
    # a sphere is not a disk
    src.write_text(moduli.dumps(S))
    assert main(["double", "--in", str(src)]) == 2
    capsys.readouterr()


def test_sew_boundary_scaling(capsys, tmp_path):
    P = moduli.DiskElement((1.0,), pad(0.1), (CoordSeq(30.0, pad()), CoordSeq(25.0, pad())), (0.5 + 1j,), (CoordSeq(20j, pad()),))
    Q = moduli.DiskElement((-0.7,), pad(), (CoordSeq(22.0, pad()), CoordSeq(35.0, pad())), (0.3 + 0.6j,), (CoordSeq(28.0, pad()),))
    lhs, rhs = tmp_path / "p.json", tmp_path / "q.json"
    lhs.write_text(moduli.dumps(P))
    rhs.write_text(moduli.dumps(Q))
    argv = ["sew", "--kind", "boundary", "--lhs", str(lhs), "--rhs", str(rhs), "--index", "1"]
    assert main(argv) == 0
    R = moduli.from_json(json.loads(capsys.readouterr().out))
    np.testing.assert_allclose(R.boundary_punctures, [1.0 - 0.7 / 30, 1.0], atol=1e-12)
    np.testing.assert_allclose(R.boundary_coords[0].a0, 22 * 30, rtol=1e-12)
    # kind/type mismatch and bad index
    assert main(["sew", "--kind", "sphere"] + argv[3:]) == 2
    assert main(argv[:-1] + ["9"]) == 2
    capsys.readouterr()


def test_gamma(capsys):
    assert main(["gamma", "--A", "0,0.1", "--B", "0,0.1", "--a0", "1", "--depth", "8"]) == 0
    res = json.loads(capsys.readouterr().out)
    np.testing.assert_allclose(res["gamma"][0], -0.005102747289548157, rtol=1e-12)
    assert res["linearity_residual"] < 1e-8
    assert main(["gamma", "--A", "x", "--B", "0", "--a0", "1"]) == 2
    capsys.readouterr()


def test_empty_report_is_an_input_error():
    err = io.StringIO()
    assert report_summary([], err) == 2
    assert "no checks" in err.getvalue()


def test_console_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "occ.cli", "props", "--suite", "series", "--trials", "0"],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 2
    assert "trials" in r.stderr
