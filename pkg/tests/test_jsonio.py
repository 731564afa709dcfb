import json
import math

import numpy as np
import pytest

from kbiframe import jsonio
from kbiframe.certify import certify_k_biframe
from kbiframe.errors import ParseError, SchemaError
from kbiframe.frames import FrameSequence
from kbiframe.instances import gallery, random_biframe, random_operator


def roundtrip(inst, tmp_path):
    path = tmp_path / "inst.json"
    jsonio.save_instance(inst, path)
    return jsonio.load_instance(path)


def test_gallery_roundtrip_is_bit_exact(tmp_path):
    for name in ("ex_s_singular", "ex_c4", "shift", "perturbation_counterexample"):
        inst = gallery(name)
        back = roundtrip(inst, tmp_path)
        assert back.pair.equals(inst.pair)
        np.testing.assert_array_equal(back.k, inst.k)
        if inst.t is not None:
            np.testing.assert_array_equal(back.t, inst.t)
        assert back.claimed_bounds == inst.claimed_bounds
        assert back.extras.get("power") == inst.extras.get("power")


def test_random_roundtrip_with_all_optional_fields(tmp_path):
    inst = random_biframe(5, 7, "skew", [1, 2])
    rng = np.random.default_rng(0)
    inst.extras.update({
        "t": random_operator(5, 3, 1),
        "factors": [random_operator(5, 5, 2), random_operator(5, 2, 3)],
        "alphas": [1 + 2j, -0.5],
        "z": FrameSequence(rng.standard_normal((7, 5)) / 3),
        "power": 3,
    })
    back = roundtrip(inst, tmp_path)
    assert back.pair.equals(inst.pair)
    assert back.seed == [1, 2]
    np.testing.assert_array_equal(back.t, inst.t)
    for a, b in zip(back.extras["factors"], inst.extras["factors"]):
        np.testing.assert_array_equal(a, b)
    assert back.extras["alphas"] == [1 + 2j, -0.5 + 0j]
    assert back.extras["z"].equals(inst.extras["z"])
    assert back.extras["power"] == 3


def _doc():
    return jsonio.instance_to_dict(gallery("ex_c4"))


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d.pop("k"), "k"),
    (lambda d: d.update(dim="four"), "dim"),
    (lambda d: d.update(schema_version="2"), "schema_version"),
    (lambda d: d["x_vectors"][1].pop(), "x_vectors[1]"),
    (lambda d: d["y_vectors"].pop(), "y_vectors"),
    (lambda d: d["k"][0].__setitem__(0, [1.0]), "k[0][0]"),
    (lambda d: d["k"][2].__setitem__(1, ["a", 0]), "k[2][1]"),
    (lambda d: d.update(power=0), "power"),
    (lambda d: d.update(claimed_bounds=[1]), "claimed_bounds"),
    (lambda d: d.update(t=[[[0, 0]]]), "t"),
])
def test_schema_errors_name_the_field(mutate, field):
    doc = _doc()
    mutate(doc)
    with pytest.raises(SchemaError) as err:
        jsonio.instance_from_dict(doc)
    assert err.value.field == field


def test_parse_error_has_line_and_column(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "dim": 2,\n  "x_vectors": [,]\n}')
    with pytest.raises(ParseError, match=r"line 3 column"):
        jsonio.load_instance(path)


def test_non_finite_numbers_rejected():
    doc = _doc()
    doc["k"][0][0] = ["Unbounded", 0]
    with pytest.raises(SchemaError):
        jsonio.instance_from_dict(doc)


def test_unbounded_encoding():
    assert jsonio.encode_float(math.inf) == "Unbounded"
    assert jsonio.encode_float(-math.inf) == "-Unbounded"
    assert jsonio.encode_float(math.nan) is None
    assert jsonio.decode_float("Unbounded") == math.inf


def test_certificate_file(tmp_path):
    inst = gallery("parseval", 4)
    cert = certify_k_biframe(inst.pair, inst.k)
    path = tmp_path / "cert.json"
    doc = jsonio.instance_to_dict(inst)
    jsonio.save_certificate(cert, path, instance_doc=doc)
    out = json.loads(path.read_text())
    assert out["schema_version"] == "1"
    assert out["input_digest"] == jsonio.digest(doc)
    assert out["input_digest"].startswith("sha256:")
    assert out["certificate"]["is_parseval"] is True
    assert out["tolerances"]["herm_tol"] == 1e-8
    # identical input, identical bytes
    path2 = tmp_path / "cert2.json"
    jsonio.save_certificate(certify_k_biframe(inst.pair, inst.k), path2, instance_doc=doc)
    assert path.read_bytes() == path2.read_bytes()


def test_digest_is_key_order_independent():
    doc = _doc()
    shuffled = dict(reversed(list(doc.items())))
    assert jsonio.digest(doc) == jsonio.digest(shuffled)
    doc["dim"] = 5
    assert jsonio.digest(doc) != jsonio.digest(shuffled)


def test_load_matrix_forms(tmp_path):
    m = np.array([[1, 2j], [0, 1]])
    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps(jsonio.encode_complex_array(m)))
    np.testing.assert_array_equal(jsonio.load_matrix(bare), m)
    wrapped = tmp_path / "wrapped.json"
    wrapped.write_text(json.dumps({"matrix": jsonio.encode_complex_array(m)}))
    np.testing.assert_array_equal(jsonio.load_matrix(wrapped), m)
    inst_path = tmp_path / "shift.json"
    sh = gallery("shift", 4)
    jsonio.save_instance(sh, inst_path)
    np.testing.assert_array_equal(jsonio.load_matrix(inst_path, "t"), sh.t)
    np.testing.assert_array_equal(jsonio.load_matrix(inst_path, "k"), sh.k)
    with pytest.raises(SchemaError):
        jsonio.load_matrix(tmp_path / "shift.json", "factors")
