import json
import os

import numpy as np
import pytest

from opmodel import serialize
from opmodel.cli import main
from opmodel.generators import random_herglotz, random_instance, rng_for
from opmodel.herglotz import herglotz_eval, make_herglotz
from opmodel.opmeasure import BorelSet, atomic_measure
from opmodel.model_space import StepFunction


# ---------------------------------------------------------------- serialize

def test_matrix_round_trip():
    rng = rng_for(700, 0)
    m = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    assert np.array_equal(serialize.matrix_from_json(serialize.matrix_to_json(m)), m)


def test_borel_round_trip_with_infinities():
    b = BorelSet.from_intervals([(-np.inf, 0.0), (1.0, np.inf)])
    text = serialize.dumps(serialize.borel_to_json(b))
    assert "Infinity" not in text
    assert serialize.borel_from_json(json.loads(text)) == b


def test_measure_round_trip():
    sigma = atomic_measure(2, [(0.0, np.diag([1.0, 0.0])),
                               (1.0, np.ones((2, 2)))])
    back = serialize.measure_from_json(serialize.measure_to_json(sigma))
    assert back.dim == 2
    for (l1, w1), (l2, w2) in zip(sigma.atoms, back.atoms):
        assert l1 == l2 and np.array_equal(w1.mat, w2.mat)


def test_step_round_trip():
    u = StepFunction(((BorelSet.from_intervals([(0.0, 1.0)]),
                       np.array([1.0 + 2.0j, 0.0])),))
    back = serialize.step_from_json(serialize.step_to_json(u))
    assert back.terms[0][0] == u.terms[0][0]
    assert np.array_equal(back.terms[0][1], u.terms[0][1])


def test_herglotz_round_trip():
    h = random_herglotz(rng_for(701, 0))
    back = serialize.herglotz_from_json(serialize.herglotz_to_json(h))
    for z in (1j, 2.0 + 0.5j):
        assert np.allclose(herglotz_eval(back, z), herglotz_eval(h, z))


def test_instance_round_trip():
    inst = random_instance(rng_for(702, 0))
    back = serialize.instance_from_json(serialize.instance_to_json(inst))
    assert np.array_equal(back.h0, inst.h0)
    assert np.array_equal(back.kmap, inst.kmap)
    assert np.array_equal(back.ell, inst.ell)


def test_dumps_deterministic():
    obj = {"b": 1.0, "a": [0.1, 2.5e-17]}
    assert serialize.dumps(obj) == serialize.dumps(json.loads(serialize.dumps(obj)))
    assert serialize.fingerprint(obj) == serialize.fingerprint(dict(reversed(obj.items())))


# ---------------------------------------------------------------------- gen

def test_gen_deterministic(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    for d in (d1, d2):
        assert main(["--seed", "7", "--count", "3", "--out", str(d),
                     "gen", "measures"]) == 0
    for i in range(3):
        f = f"measures_{i:04d}.json"
        assert (d1 / f).read_text() == (d2 / f).read_text()


def test_gen_all_kinds(tmp_path):
    for kind in ("measures", "perturbation", "herglotz", "semimetric"):
        out = tmp_path / kind
        assert main(["--seed", "1", "--out", str(out), "gen", kind]) == 0
        files = os.listdir(out)
        assert files == [f"{kind}_0000.json"]
        json.loads((out / files[0]).read_text())


# ------------------------------------------------------------------- ingest

def _write_samples(path, dim, samples):
    obj = {"dim": dim,
           "samples": [{"lambda": lam,
                        "matrix": serialize.matrix_to_json(m)}
                       for lam, m in samples]}
    path.write_text(json.dumps(obj))


def test_ingest_trapezoid(tmp_path):
    inp, out = tmp_path / "in.json", tmp_path / "out.json"
    _write_samples(inp, 1, [(0.0, [[1.0]]), (1.0, [[1.0]]), (2.0, [[1.0]])])
    assert main(["--out", str(out), "ingest", str(inp)]) == 0
    sigma = serialize.measure_from_json(json.loads(out.read_text()))
    # constant density 1 on [0,2]: weights 1/2, 1, 1/2 at the sample points
    assert [lam for lam, _ in sigma.atoms] == [0.0, 1.0, 2.0]
    assert np.allclose([w.mat[0, 0].real for _, w in sigma.atoms],
                       [0.5, 1.0, 0.5])


def test_ingest_midpoint(tmp_path):
    inp, out = tmp_path / "in.json", tmp_path / "out.json"
    _write_samples(inp, 1, [(0.0, [[1.0]]), (2.0, [[3.0]])])
    assert main(["--out", str(out), "ingest", str(inp),
                 "--rule", "midpoint"]) == 0
    sigma = serialize.measure_from_json(json.loads(out.read_text()))
    # one interval [0,2], midpoint 1, weight 2 * (1+3)/2 = 4
    assert [lam for lam, _ in sigma.atoms] == [1.0]
    assert sigma.atoms[0][1].mat[0, 0].real == pytest.approx(4.0)


def test_ingest_rejects_unsorted(tmp_path, capsys):
    inp = tmp_path / "in.json"
    _write_samples(inp, 1, [(1.0, [[1.0]]), (0.0, [[1.0]])])
    assert main(["ingest", str(inp)]) == 2
    assert "error:" in capsys.readouterr().err


def test_ingest_missing_file():
    assert main(["ingest", "/nonexistent/file.json"]) == 2


# ------------------------------------------------------------------- verify

def test_verify_measures_passes(tmp_path):
    out = tmp_path / "rep.jsonl"
    assert main(["--count", "2", "--out", str(out),
                 "verify", "measures"]) == 0
    lines = [json.loads(l) for l in out.read_text().splitlines()]
    assert lines and all(l["pass"] for l in lines)
    assert all(l["suite"] == "measures" for l in lines)


def test_verify_group_expands(tmp_path):
    out = tmp_path / "rep.jsonl"
    main(["--count", "1", "--out", str(out), "verify", "perturbation"])
    suites = {json.loads(l)["suite"] for l in out.read_text().splitlines()}
    assert suites == {"perturbation", "weyl"}


def test_verify_unknown_suite():
    with pytest.raises(SystemExit):
        main(["verify", "nope"])


def test_verify_model_reports_covariance_failure(tmp_path):
    # the vector-level covariance identity fails for generic measures;
    # verify must report it honestly and exit nonzero
    out = tmp_path / "rep.jsonl"
    code = main(["--count", "2", "--out", str(out), "verify", "model"])
    lines = [json.loads(l) for l in out.read_text().splitlines()]
    failed = [l for l in lines if not l["pass"]]
    assert code == 1
    assert failed and all(
        l["identity"] == "multiplication_covariance" for l in failed)


# -------------------------------------------------- diagonalize / herglotz

def test_diagonalize_cli(tmp_path):
    inst = random_instance(rng_for(703, 0), require_generating=True)
    inp, out = tmp_path / "inst.json", tmp_path / "diag.json"
    inp.write_text(serialize.dumps(serialize.instance_to_json(inst)))
    assert main(["--out", str(out), "diagonalize", str(inp)]) == 0
    obj = json.loads(out.read_text())
    assert obj["pass"] and obj["generating"]
    assert obj["generated_dim"] == obj["n"]
    u = serialize.matrix_from_json(obj["unitary"])
    assert np.allclose(u.conj().T @ u, np.eye(u.shape[1]), atol=1e-9)


def test_herglotz_cli_eval(tmp_path):
    h = random_herglotz(rng_for(704, 0), k_max=1, atoms_max=2)
    inp, out = tmp_path / "h.json", tmp_path / "h.csv"
    inp.write_text(serialize.dumps(serialize.herglotz_to_json(h)))
    assert main(["--out", str(out), "herglotz", "eval", str(inp)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("re_z,im_z")
    assert len(lines) == 1 + 63  # 21 real points x 3 heights


def test_herglotz_cli_invert(tmp_path):
    h = random_herglotz(rng_for(705, 0))
    inp, out = tmp_path / "h.json", tmp_path / "inv.json"
    inp.write_text(serialize.dumps(serialize.herglotz_to_json(h)))
    assert main(["--out", str(out), "herglotz", "invert", str(inp)]) == 0
    obj = json.loads(out.read_text())
    assert np.allclose(serialize.matrix_from_json(obj["c"]), h.c, atol=1e-5)
    for rec, (lam, w) in zip(obj["atoms"], h.omega.atoms):
        assert rec["lambda"] == pytest.approx(lam)
        assert np.allclose(serialize.matrix_from_json(rec["matrix"]),
                           w.mat, atol=1e-5)


def test_herglotz_cli_scan(tmp_path):
    h = random_herglotz(rng_for(706, 0))
    inp = tmp_path / "h.json"
    inp.write_text(serialize.dumps(serialize.herglotz_to_json(h)))
    assert main(["herglotz", "scan", str(inp)]) == 0


def test_herglotz_cli_bad_json(tmp_path):
    inp = tmp_path / "bad.json"
    inp.write_text("{not json")
    assert main(["herglotz", "eval", str(inp)]) == 2


# ----------------------------------------------------------------- complete

def test_complete_cli(tmp_path):
    rho = [[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [1.0, 1.0, 0.0]]
    inp, out = tmp_path / "s.json", tmp_path / "c.json"
    inp.write_text(json.dumps({"rho": rho}))
    assert main(["--out", str(out), "complete", str(inp)]) == 0
    obj = json.loads(out.read_text())
    assert obj["pass"]
    assert obj["route2_classes"] == [[0, 1], [2]]
    assert sorted(obj["isometry"]) == [0, 1]


def test_complete_rejects_bad_semimetric(tmp_path, capsys):
    inp = tmp_path / "s.json"
    inp.write_text(json.dumps({"rho": [[0.0, -1.0], [-1.0, 0.0]]}))
    assert main(["complete", str(inp)]) == 2
    assert "negativity" in capsys.readouterr().err


# --------------------------------------------------------------------- env

def test_tol_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("OPMODEL_TOL", "1e-8")
    out = tmp_path / "rep.jsonl"
    assert main(["--count", "1", "--out", str(out), "verify", "measures"]) == 0
