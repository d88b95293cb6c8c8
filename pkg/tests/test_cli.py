import json

import numpy as np
import pytest

from ewt import catalog
from ewt.cli import main
from ewt.io import MalformedFile, MatrixFile, parse, save


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def make(capsys, tmp_path, family, params, name):
    path = str(tmp_path / name)
    code, _, _ = run(capsys, "make", "--family", family, "--params", params, "--out", path)
    assert code == 0
    return path


def test_io_round_trip():
    M = np.array([[1, 1j], [-1j, 2]]) / 3
    text = save(None, MatrixFile(1, 2, "state", M, {"x": np.float64(1.5), "z": 1 + 2j}))
    mf = parse(text)
    assert np.array_equal(mf.data, M) and mf.dims == (1, 2)
    assert mf.meta["x"] == 1.5 and mf.meta["z"] == {"re": 1.0, "im": 2.0}


@pytest.mark.parametrize("text", [
    "not json",
    json.dumps({"d_a": 1, "d_b": 2, "kind": "state"}),
    json.dumps({"d_a": 1, "d_b": 2, "kind": "blob", "re": [[1, 0], [0, 0]], "im": [[0, 0], [0, 0]]}),
    json.dumps({"d_a": 2, "d_b": 2, "kind": "witness", "re": [[1, 0], [0, 0]], "im": [[0, 0], [0, 0]]}),
    json.dumps({"d_a": 1, "d_b": 2, "kind": "state", "re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]}),
])
def test_malformed_files(text):
    with pytest.raises(MalformedFile):
        parse(text)


def test_catalog_builds_every_family():
    for name, fam in catalog.FAMILIES.items():
        raw = {k: str(v[1] if v[1] is not None else 3) for k, v in fam.params.items()}
        if name in ("w_abc",):
            raw = {"a": "1", "b": "1", "c": "0"}
        if name == "w_ab":
            raw = {"a": "0.5", "b": "0.5"}
        if name in ("isotropic", "werner", "phi_p"):
            raw["p"] = "0.5"
        if name == "w_dk":
            raw["k"] = "2"
        if name == "kossakowski":
            raw = {"alpha": "1.0"}
        if name == "upb_edge":
            continue  # exercised in the acceptance suite
        M, dims, kind, _, _ = catalog.build(name, raw)
        assert M.shape == (dims[0] * dims[1],) * 2 and kind in ("state", "witness")
        assert np.abs(M - M.conj().T).max() < 1e-12


def test_catalog_errors():
    with pytest.raises(KeyError):
        catalog.build("nope", {})
    with pytest.raises(ValueError):
        catalog.build("flip", {})
    with pytest.raises(ValueError):
        catalog.build("flip", {"d": "x"})
    with pytest.raises(ValueError):
        catalog.build("flip", {"d": "2", "q": "1"})
    with pytest.raises(ValueError):
        catalog.parse_params("a=1,b")


def test_make_to_stdout(capsys):
    code, out, _ = run(capsys, "make", "--family", "flip", "--params", "d=2")
    assert code == 0
    mf = parse(out)
    assert mf.kind == "witness" and mf.meta["family"] == "flip"


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "make", "--family", "nope")[0] == 2
    assert run(capsys, "make", "--family", "phi_p", "--params", "d=3,p=-1")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "classify", str(bad))[0] == 3
    w = make(capsys, tmp_path, "flip", "d=2", "w.json")
    s = make(capsys, tmp_path, "werner", "d=3,p=0.2", "s.json")
    assert run(capsys, "detect", w, s)[0] == 4


def test_detect_and_spa(capsys, tmp_path):
    w = make(capsys, tmp_path, "flip", "d=2", "w.json")
    s = make(capsys, tmp_path, "werner", "d=2,p=0.1", "s.json")
    code, out, _ = run(capsys, "--json", "detect", w, s)
    res = json.loads(out)
    assert code == 0 and res["verdict"] == "detected" and abs(res["trace"] + 0.8) < 1e-12
    code, out, _ = run(capsys, "spa", w, "--json")
    assert abs(json.loads(out)["p_star"] - 1 / 3) < 1e-15


def test_classify_deterministic(capsys, tmp_path):
    w = make(capsys, tmp_path, "w_abc", "a=1,b=1,c=0", "w.json")
    t = make(capsys, tmp_path, "tiles", "", "t.json")
    args = ["classify", w, "--state", f"tiles={t}", "--seed", "1", "--restarts", "40", "--json"]
    c1, o1, _ = run(capsys, *args)
    c2, o2, _ = run(capsys, *args)
    assert c1 == c2 == 0 and o1 == o2
    rep = json.loads(o1)
    assert rep["is_witness"] and rep["decomposable"] == "no_analytic"


def test_sweep_zero_crossing(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "werner", "--param", "p", "--range", "0:1:11",
                       "--params", "d=3", "--witness-family", "flip", "--witness-params", "d=3",
                       "--json")
    res = json.loads(out)
    assert code == 0 and len(res["rows"]) == 11
    assert abs(res["zero_crossings"][0] - 0.5) < 1e-9


def test_schmidt_command(capsys, tmp_path):
    path = make(capsys, tmp_path, "max_entangled", "d=3", "p.json")
    code, out, _ = run(capsys, "schmidt", path, "--json")
    res = json.loads(out)
    assert code == 0 and res["rank"] == 3
    assert np.abs(np.array(res["coefficients"]) - 3**-0.5).max() < 1e-12
    mixed = make(capsys, tmp_path, "isotropic", "d=2,p=0.5", "m.json")
    assert run(capsys, "schmidt", mixed)[0] == 3
