"""Loading and validation of sample matrices and treatment manifests.

Rows are exchangeable samples, columns are named variables.  A
`DataMatrix` is one treatment's worth of data; a `TreatmentSet` aligns
several of them on a shared variable universe so the cross- and
persistent screens can compare like with like.  Missing values are not
supported: every cell must parse as a finite real.
"""

import csv
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "DataMatrix",
    "TreatmentSet",
    "DroppedColumnsWarning",
    "load_matrix",
    "load_treatments",
    "write_matrix_csv",
]


class DroppedColumnsWarning(UserWarning):
    """Emitted when constant columns are dropped under policy 'drop'."""


@dataclass(frozen=True, eq=False)
class DataMatrix:
    """n x p sample matrix with variable identifiers and a treatment label.

    Invariants validated at construction: ``n >= 3`` (scores need more
    than two samples), all cells finite, unique variable ids matching
    the column count, and no constant column (zero sample variance would
    make the U-score undefined).
    """

    values: np.ndarray
    variable_ids: tuple
    treatment_id: str = ""

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError("values must be a 2-d array")
        if v.shape[0] < 3:
            raise ValueError(f"need at least 3 samples, got n={v.shape[0]}")
        if not np.isfinite(v).all():
            raise ValueError("values contain non-finite cells")
        ids = tuple(str(x) for x in self.variable_ids)
        if len(ids) != v.shape[1]:
            raise ValueError(f"expected {v.shape[1]} variable ids, got {len(ids)}")
        if len(set(ids)) != len(ids):
            dupes = sorted({x for x in ids if ids.count(x) > 1})
            raise ValueError(f"duplicate variable ids: {dupes}")
        constant = np.nonzero(v.max(axis=0) == v.min(axis=0))[0]
        if constant.size:
            raise ValueError(
                f"constant column(s) have zero sample variance: {[ids[i] for i in constant]}"
            )
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "variable_ids", ids)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def p(self):
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class TreatmentSet:
    """Data matrices for m >= 1 treatments over identical variables."""

    matrices: tuple = field(default=())

    def __post_init__(self):
        mats = tuple(self.matrices)
        if not mats:
            raise ValueError("a TreatmentSet needs at least one matrix")
        ids = mats[0].variable_ids
        for m in mats[1:]:
            if m.variable_ids != ids:
                raise ValueError(
                    "treatments do not share identical variable ids in identical order"
                )
        labels = [m.treatment_id for m in mats]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate treatment labels: {sorted(labels)}")
        object.__setattr__(self, "matrices", mats)

    @property
    def m(self):
        return len(self.matrices)

    @property
    def variable_ids(self):
        return self.matrices[0].variable_ids


def _parse_cell(text, row, col):
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"non-numeric cell at row {row}, column {col}: {text!r}") from None
    if not np.isfinite(value):
        raise ValueError(f"non-finite cell at row {row}, column {col}: {text!r}")
    return value


def load_matrix(path, *, delimiter=",", header=True, constant_columns="reject", treatment_id=None):
    """Load a delimited text file of samples into a DataMatrix.

    Parameters
    ----------
    path : path-like
        File with one sample per row; optional first row of variable ids.
    delimiter : str
        Field separator ("," for CSV, "\\t" for TSV).
    header : bool
        When true the first row provides variable ids; otherwise ids are
        generated as v1..vp.
    constant_columns : {"reject", "drop"}
        "reject" fails loudly on any zero-variance column; "drop"
        removes such columns and emits a DroppedColumnsWarning naming
        them.  Dropping changes p and therefore every downstream
        threshold, so it is never silent.
    treatment_id : str, optional
        Treatment label; defaults to the file stem.
    """
    if constant_columns not in ("reject", "drop"):
        raise ValueError(f"constant_columns must be 'reject' or 'drop', got {constant_columns!r}")
    path = Path(path)
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh, delimiter=delimiter) if r]
    if not rows:
        raise ValueError(f"{path}: empty file")
    if header:
        ids = [c.strip() for c in rows[0]]
        body = rows[1:]
        first_data_row = 2
    else:
        ids = [f"v{i + 1}" for i in range(len(rows[0]))]
        body = rows
        first_data_row = 1
    if not body:
        raise ValueError(f"{path}: no data rows")
    width = len(ids)
    values = np.empty((len(body), width))
    for r, row in enumerate(body):
        if len(row) != width:
            raise ValueError(
                f"{path}: ragged input, row {r + first_data_row} has {len(row)} fields, expected {width}"
            )
        for c, cell in enumerate(row):
            values[r, c] = _parse_cell(cell, r + first_data_row, c + 1)
    if len(set(ids)) != len(ids):
        dupes = sorted({x for x in ids if ids.count(x) > 1})
        raise ValueError(f"{path}: duplicate variable ids: {dupes}")

    constant = np.nonzero(values.max(axis=0) == values.min(axis=0))[0]
    if constant.size and constant_columns == "drop":
        dropped = [ids[i] for i in constant]
        warnings.warn(
            f"{path}: dropped {len(dropped)} constant column(s): {dropped}",
            DroppedColumnsWarning,
            stacklevel=2,
        )
        keep = np.setdiff1d(np.arange(width), constant)
        values = values[:, keep]
        ids = [ids[i] for i in keep]

    label = treatment_id if treatment_id is not None else path.stem
    return DataMatrix(values=values, variable_ids=tuple(ids), treatment_id=label)


def load_treatments(manifest_path):
    """Load a multi-treatment manifest into an id-aligned TreatmentSet.

    The manifest is a JSON file::

        {"treatments": [{"label": "alcohol", "path": "alcohol.csv"}, ...],
         "options": {"delimiter": ",", "header": true,
                     "constant_columns": "reject"}}

    Paths are resolved relative to the manifest.  Per-entry keys override
    the shared options.  Matrices whose columns appear in a different
    order are reordered to the first treatment's order; a differing id
    *set* is an error.
    """
    manifest_path = Path(manifest_path)
    with open(manifest_path) as fh:
        manifest = json.load(fh)
    entries = manifest.get("treatments", [])
    if not entries:
        raise ValueError(f"{manifest_path}: manifest lists no treatments")
    shared = manifest.get("options", {})
    matrices = []
    for entry in entries:
        options = {**shared, **{k: v for k, v in entry.items() if k not in ("label", "path")}}
        mat_path = Path(entry["path"])
        if not mat_path.is_absolute():
            mat_path = manifest_path.parent / mat_path
        matrices.append(
            load_matrix(
                mat_path,
                delimiter=options.get("delimiter", ","),
                header=options.get("header", True),
                constant_columns=options.get("constant_columns", "reject"),
                treatment_id=entry.get("label"),
            )
        )

    reference = matrices[0].variable_ids
    aligned = [matrices[0]]
    for m in matrices[1:]:
        if m.variable_ids == reference:
            aligned.append(m)
            continue
        if set(m.variable_ids) != set(reference):
            missing = sorted(set(reference) ^ set(m.variable_ids))[:10]
            raise ValueError(
                f"treatment {m.treatment_id!r} does not cover the same variables "
                f"(first differences: {missing})"
            )
        order = [m.variable_ids.index(v) for v in reference]
        aligned.append(
            DataMatrix(
                values=m.values[:, order],
                variable_ids=reference,
                treatment_id=m.treatment_id,
            )
        )
    return TreatmentSet(matrices=tuple(aligned))


def write_matrix_csv(data: DataMatrix, path):
    """Serialize a DataMatrix to CSV with a header row of variable ids.

    Values are written with 17 significant digits, so load -> write ->
    load round-trips float64 content exactly.
    """
    np.savetxt(
        path,
        data.values,
        delimiter=",",
        comments="",
        header=",".join(data.variable_ids),
        fmt="%.17g",
    )
