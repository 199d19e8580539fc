import json
import pathlib
import os

import pytest

import ztower

CORPUS = pathlib.Path(os.environ.get("ZTOWER_CORPUS", pathlib.Path(__file__).resolve().parents[2] / "corpus"))


def spec(name):
    return json.loads((CORPUS / f"{name}.json").read_text())["spec"]


def test_layers_of_the_triangle():
    tri = spec("unramified_triangle")
    assert len(ztower.layer(tri, 1)["vertices"]) == 6
    assert ztower.layer(tri, 2)["edges"] == 12
    assert ztower.layer(json.dumps(tri), 0)["connected"]


def test_kappa_and_jacobian():
    flower = spec("flower_p3")
    assert ztower.kappa(flower, 1) == 8
    jac = ztower.jacobian(spec("unramified_triangle"), 1)
    assert jac == {"invariant_factors": [6], "free_rank": 0}


def test_big_integers_survive():
    k5 = spec("bouquet_k5")
    assert ztower.kappa(k5, 1) == 125
    assert ztower.smith_normal_form([[4, 0], [0, 6]]) == [2, 12]


def test_char_elements():
    c = ztower.char_element(spec("ramified_triangle"))
    assert (c["mu"], c["lambda"]) == (1, 2)
    assert ztower.equal_up_to_unit(c["poly"], "2*T^2", 2)
    assert ztower.equal_up_to_unit(ztower.char_jacobian(spec("cycle_c9"))["poly"], "9", 3)
    assert ztower.mu_lambda("T1*T2 + 3", 3, 2) == (0, 2)


def test_series():
    assert ztower.ord_series(spec("cycle_c9"), 3) == [2, 6, 18, 54]


def test_errors_are_python_exceptions():
    bad = spec("cycle_c5")
    bad["p"] = 4
    with pytest.raises(ztower.SpecError):
        ztower.layer(bad, 1)
    flat = spec("unramified_triangle")
    del flat["edges"][0]["voltage"]
    with pytest.raises(ztower.NonTorsionError):
        ztower.char_element(flat)
    with pytest.raises(ztower.DisconnectedError):
        ztower.kappa(flat, 1)


def test_cli_in_process(tmp_path):
    path = tmp_path / "tri.json"
    path.write_text(json.dumps(spec("square_diagonal")))
    code, out, _ = ztower.run("dual", path, "--n", "1")
    assert code == 0
    assert json.loads(out)["report"]["pass"] is True
    code, _, _ = ztower.run("layer", tmp_path / "missing.json")
    assert code == 2
