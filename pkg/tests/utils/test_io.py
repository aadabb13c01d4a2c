import json
import math

import numpy as np

from dtc_toolkit.utils.io import (
    MANIFEST_NAME,
    inputs_hash,
    read_csv,
    to_jsonable,
    write_csv,
    write_json,
    write_manifest,
)


def test_write_and_read_csv(tmp_path):
    path = write_csv(
        tmp_path / "sub" / "data.csv",
        ("m", "p", "flag", "label"),
        [(1, 0.5, True, (1, 0, 0, 0)), (np.int64(2), np.float64(1 / 3), False, "x")],
    )
    assert path.exists()
    lines = path.read_text().splitlines()
    assert lines[0] == "m,p,flag,label"
    assert lines[1] == "1,0.5,true,1000"
    assert lines[2] == "2,0.333333333333,false,x"
    columns = read_csv(path)
    assert columns["m"] == ["1", "2"]
    assert columns["label"] == ["1000", "x"]


def test_to_jsonable():
    data = {"a": np.arange(3), "b": np.float64(math.inf), "c": (np.bool_(True), 1j), "d": math.nan}
    assert to_jsonable(data) == {"a": [0, 1, 2], "b": "inf", "c": [True, [0.0, 1.0]], "d": "nan"}


def test_write_json_sorts_keys(tmp_path):
    path = write_json(tmp_path / "out.json", {"b": 1, "a": np.float32(0.5)})
    text = path.read_text()
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": 0.5, "b": 1}


def test_inputs_hash_is_order_independent():
    assert inputs_hash({"a": 1, "b": [1, 2]}) == inputs_hash({"b": [1, 2], "a": 1})
    assert inputs_hash({"a": 1}) != inputs_hash({"a": 2})


def test_write_manifest(tmp_path):
    outputs = [tmp_path / "b.csv", tmp_path / "a.json"]
    path = write_manifest(tmp_path, "zz-scan", {"seed": 3}, 3, outputs)
    assert path.name == MANIFEST_NAME
    manifest = json.loads(path.read_text())
    assert manifest["command"] == "zz-scan"
    assert manifest["seed"] == 3
    assert manifest["outputs"] == ["a.json", "b.csv"]
    assert manifest["inputs_sha256"] == inputs_hash({"seed": 3})
    assert "numpy" in manifest["versions"]
    assert "timestamp" not in manifest
