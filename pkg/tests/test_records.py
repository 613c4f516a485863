import json

import numpy as np
import pytest

from geoinscribe.engine import find_inscriptions
from geoinscribe.errors import SchemaError
from geoinscribe.quad import AngleTriple
from geoinscribe.records import ResultRecord, clean_diagnostics


@pytest.fixture(scope="module")
def record(trefoil):
    found, stats = find_inscriptions(trefoil, AngleTriple(np.pi / 2, np.pi, np.pi), n=128)
    return ResultRecord.from_results(trefoil, found, clean_diagnostics(stats),
                                     {"argv": ["x"], "version": "0"})


def test_bit_exact_roundtrip(record):
    again = ResultRecord.from_json(record.to_json())
    assert again == record
    assert again.to_json() == record.to_json()


def test_file_roundtrip(record, tmp_path):
    path = tmp_path / "r.json"
    record.save(path)
    assert ResultRecord.load(path) == record


def test_inscriptions_recovered(record):
    ins = record.to_inscriptions()
    assert len(ins) == len(record.inscriptions) > 0
    for i, r in zip(ins, record.inscriptions):
        assert list(i.s) == r.s
        assert np.array_equal(i.circle.center, r.center)


def test_center_chart_coordinates(record):
    for r in record.inscriptions:
        assert len(r.center_chart) == 2
        assert np.hypot(*r.center_chart) < 1


def test_version_checked(record):
    doc = record.to_dict()
    doc["schema_version"] = 99
    with pytest.raises(SchemaError):
        ResultRecord.from_dict(doc)


def test_malformed_records():
    with pytest.raises(SchemaError):
        ResultRecord.from_json("{")
    with pytest.raises(SchemaError):
        ResultRecord.from_json(json.dumps({"schema_version": 1}))


def test_clean_diagnostics():
    out = clean_diagnostics({"a": np.int64(3), "b": np.float64(np.inf), "c": "x"})
    assert out == {"a": 3, "b": None, "c": "x"}
    assert type(out["a"]) is int
