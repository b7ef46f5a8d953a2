import json

import numpy as np
import pytest

from corrscreen.ingest import (
    DataMatrix,
    DroppedColumnsWarning,
    TreatmentSet,
    load_matrix,
    load_treatments,
    write_matrix_csv,
)


def _write_csv(path, text):
    path.write_text(text)
    return path


def test_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(1)
    original = DataMatrix(
        values=rng.standard_normal((5, 4)) * 1e3,
        variable_ids=("a", "b", "c", "d"),
        treatment_id="trt",
    )
    path = tmp_path / "m.csv"
    write_matrix_csv(original, path)
    loaded = load_matrix(path, treatment_id="trt")
    assert loaded.variable_ids == original.variable_ids
    assert loaded.treatment_id == "trt"
    assert np.array_equal(loaded.values, original.values)


def test_treatment_label_defaults_to_stem(tmp_path):
    path = _write_csv(tmp_path / "liver_panel.csv", "x,y\n1,4\n2,5\n3,7\n")
    assert load_matrix(path).treatment_id == "liver_panel"


def test_headerless_and_custom_delimiter(tmp_path):
    path = _write_csv(tmp_path / "m.csv", "1;4\n2;5\n3;7\n")
    loaded = load_matrix(path, delimiter=";", header=False)
    assert loaded.variable_ids == ("v1", "v2")
    assert loaded.values[2, 1] == 7.0


def test_ragged_row_reports_position(tmp_path):
    path = _write_csv(tmp_path / "m.csv", "x,y\n1,2\n3\n4,5\n")
    with pytest.raises(ValueError, match="row 3"):
        load_matrix(path)


def test_non_numeric_cell_reports_position(tmp_path):
    path = _write_csv(tmp_path / "m.csv", "x,y\n1,2\n3,oops\n4,5\n")
    with pytest.raises(ValueError, match="oops"):
        load_matrix(path)


def test_duplicate_header_rejected(tmp_path):
    path = _write_csv(tmp_path / "m.csv", "x,x\n1,2\n3,4\n5,6\n")
    with pytest.raises(ValueError, match="duplicate"):
        load_matrix(path)


def test_too_few_samples_rejected(tmp_path):
    path = _write_csv(tmp_path / "m.csv", "x,y\n1,2\n3,4\n")
    with pytest.raises(ValueError, match="3 samples"):
        load_matrix(path)


def test_constant_column_policies(tmp_path):
    path = _write_csv(tmp_path / "m.csv", "x,y,z\n1,9,2\n2,9,4\n3,9,8\n")
    with pytest.raises(ValueError, match="y"):
        load_matrix(path)
    with pytest.warns(DroppedColumnsWarning, match="y"):
        loaded = load_matrix(path, constant_columns="drop")
    assert loaded.variable_ids == ("x", "z")
    assert loaded.values.shape == (3, 2)


def test_values_are_read_only():
    matrix = DataMatrix(
        values=np.arange(12.0).reshape(4, 3) ** 1.5,
        variable_ids=("a", "b", "c"),
        treatment_id="t",
    )
    with pytest.raises(ValueError):
        matrix.values[0, 0] = 99.0


def test_non_finite_rejected():
    values = np.ones((4, 2))
    values[:, 0] = np.arange(4)
    values[2, 1] = np.nan
    with pytest.raises(ValueError, match="non-finite"):
        DataMatrix(values=values, variable_ids=("a", "b"), treatment_id="t")


def _manifest(tmp_path, entries, options=None):
    payload = {"treatments": entries}
    if options is not None:
        payload["options"] = options
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(payload))
    return path


def test_manifest_aligns_permuted_columns(tmp_path):
    _write_csv(tmp_path / "a.csv", "x,y,z\n1,2,3\n4,5,6\n7,8,10\n")
    _write_csv(tmp_path / "b.csv", "z,x,y\n30,10,20\n60,40,50\n90,70,81\n")
    manifest = _manifest(
        tmp_path,
        [{"label": "ctrl", "path": "a.csv"}, {"label": "dose", "path": "b.csv"}],
    )
    ts = load_treatments(manifest)
    assert ts.m == 2
    assert ts.variable_ids == ("x", "y", "z")
    assert [m.treatment_id for m in ts.matrices] == ["ctrl", "dose"]
    # b.csv's columns were reordered into a.csv's id order.
    assert np.array_equal(ts.matrices[1].values[:, 0], [10.0, 40.0, 70.0])
    assert np.array_equal(ts.matrices[1].values[:, 2], [30.0, 60.0, 90.0])


def test_manifest_alignment_is_deterministic(tmp_path):
    _write_csv(tmp_path / "a.csv", "x,y\n1,2\n3,4\n5,7\n")
    _write_csv(tmp_path / "b.csv", "y,x\n2,1\n4,3\n7,6\n")
    manifest = _manifest(
        tmp_path,
        [{"label": "c", "path": "a.csv"}, {"label": "d", "path": "b.csv"}],
    )
    first = load_treatments(manifest)
    second = load_treatments(manifest)
    for m1, m2 in zip(first.matrices, second.matrices):
        assert np.array_equal(m1.values, m2.values)
        assert m1.variable_ids == m2.variable_ids


def test_manifest_id_set_mismatch(tmp_path):
    _write_csv(tmp_path / "a.csv", "x,y\n1,2\n3,4\n5,7\n")
    _write_csv(tmp_path / "b.csv", "x,w\n1,2\n3,4\n5,7\n")
    manifest = _manifest(
        tmp_path,
        [{"label": "c", "path": "a.csv"}, {"label": "d", "path": "b.csv"}],
    )
    with pytest.raises(ValueError, match="same variables"):
        load_treatments(manifest)


def test_manifest_per_entry_option_override(tmp_path):
    _write_csv(tmp_path / "a.csv", "1,2\n3,4\n5,7\n")
    _write_csv(tmp_path / "b.csv", "1;2\n3;4\n5;7\n")
    manifest = _manifest(
        tmp_path,
        [
            {"label": "c", "path": "a.csv"},
            {"label": "d", "path": "b.csv", "delimiter": ";"},
        ],
        options={"header": False},
    )
    ts = load_treatments(manifest)
    assert ts.variable_ids == ("v1", "v2")
    assert np.array_equal(ts.matrices[0].values, ts.matrices[1].values)


def test_duplicate_treatment_labels_rejected(tmp_path):
    _write_csv(tmp_path / "a.csv", "x,y\n1,2\n3,4\n5,7\n")
    manifest = _manifest(
        tmp_path,
        [{"label": "c", "path": "a.csv"}, {"label": "c", "path": "a.csv"}],
    )
    with pytest.raises(ValueError, match="duplicate treatment"):
        load_treatments(manifest)


def test_empty_manifest_rejected(tmp_path):
    manifest = _manifest(tmp_path, [])
    with pytest.raises(ValueError, match="no treatments"):
        load_treatments(manifest)


def test_treatment_set_requires_identical_ids():
    a = DataMatrix(np.arange(9.0).reshape(3, 3) ** 2, ("x", "y", "z"), "a")
    b = DataMatrix(np.arange(9.0).reshape(3, 3) ** 2, ("x", "y", "w"), "b")
    with pytest.raises(ValueError, match="identical variable ids"):
        TreatmentSet(matrices=(a, b))
