"""U-scores: data columns mapped to unit vectors on the sphere S_{n-2}.

Each column of an n x p data matrix is centered, scaled to unit norm,
and rotated into the (n-1)-dimensional orthogonal complement of the
all-ones vector by a fixed orthonormal basis (the classical Helmert
completion).  The resulting "U-scores" carry all the correlation
information: the sample correlation of variables i and j is exactly the
inner product of their U-score columns, and under a diagonal null the
columns are independent uniform points on the sphere.  Every screening
procedure in this package operates on U-scores rather than raw data.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .ingest import DataMatrix

__all__ = [
    "HelmertBasis",
    "UScoreMatrix",
    "helmert_basis",
    "compute_uscores",
    "correlation",
    "write_uscores_csv",
]


@dataclass(frozen=True, eq=False)
class HelmertBasis:
    """Orthonormal n x (n-1) basis of the complement of the ones vector.

    Invariants (validated at construction): each column is orthogonal to
    the all-ones vector within 1e-12, and ``basis.T @ basis`` is the
    identity within 1e-12.
    """

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.float64)
        if b.ndim != 2 or b.shape[1] != b.shape[0] - 1:
            raise ValueError(f"basis must have shape (n, n-1), got {b.shape}")
        if np.max(np.abs(b.sum(axis=0))) > 1e-12:
            raise ValueError("basis columns are not orthogonal to the ones vector")
        gram = b.T @ b
        if np.max(np.abs(gram - np.eye(b.shape[1]))) > 1e-12:
            raise ValueError("basis columns are not orthonormal")
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)

    @property
    def n(self):
        return self.basis.shape[0]


@dataclass(frozen=True, eq=False)
class UScoreMatrix:
    """(n-1) x p matrix of unit-norm score columns.

    ``scores[:, i]`` is the U-score of variable i; every column has unit
    Euclidean norm within 1e-10, which bounds all pairwise inner
    products in [-1 - 1e-10, 1 + 1e-10] by Cauchy-Schwarz.
    """

    scores: np.ndarray
    n: int
    p: int
    variable_ids: tuple = field(default=None)
    treatment_id: str = ""

    def __post_init__(self):
        s = np.asarray(self.scores, dtype=np.float64)
        if s.ndim != 2:
            raise ValueError("scores must be a 2-d array")
        if s.shape != (self.n - 1, self.p):
            raise ValueError(
                f"scores shape {s.shape} does not match (n-1, p) = ({self.n - 1}, {self.p})"
            )
        norms = np.linalg.norm(s, axis=0)
        bad = np.abs(norms - 1.0) > 1e-10
        if bad.any():
            raise ValueError(
                f"{int(bad.sum())} score column(s) are not unit norm "
                f"(worst deviation {np.abs(norms - 1.0).max():.3e})"
            )
        s.flags.writeable = False
        object.__setattr__(self, "scores", s)
        if self.variable_ids is not None:
            ids = tuple(str(v) for v in self.variable_ids)
            if len(ids) != self.p:
                raise ValueError(f"expected {self.p} variable ids, got {len(ids)}")
            object.__setattr__(self, "variable_ids", ids)


def helmert_basis(n):
    """Deterministic orthonormal completion of the ones direction.

    Parameters
    ----------
    n : int
        Sample count, ``n >= 2``.

    Returns
    -------
    HelmertBasis
        The classical Helmert columns: column k (1-based) has its first
        k entries equal to ``1/sqrt(k(k+1))``, entry k+1 equal to
        ``-k/sqrt(k(k+1))`` and zeros below.  The same ``n`` always
        yields the same matrix, so score computations are reproducible
        bit for bit.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"n must be an integer, got {n!r}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    basis = np.zeros((n, n - 1))
    for k in range(1, n):
        scale = 1.0 / math.sqrt(k * (k + 1))
        basis[:k, k - 1] = scale
        basis[k, k - 1] = -k * scale
    return HelmertBasis(basis)


def compute_uscores(data: DataMatrix) -> UScoreMatrix:
    """Project a data matrix to unit-norm U-scores.

    Parameters
    ----------
    data : DataMatrix
        Validated input with ``n >= 3`` and no constant columns.

    Returns
    -------
    UScoreMatrix
        Column i equals ``H.T @ (x_i - mean(x_i))`` scaled to unit norm,
        where H is the Helmert completion for ``data.n``.  Because H is
        an isometry on centered vectors the projection preserves norms;
        a final renormalization only removes last-bit rounding.

    Notes
    -----
    The centered column is divided by its Euclidean norm, which equals
    the ``sqrt((n-1) * sample variance)`` scaling of the usual Z-score;
    any consistent per-column scale cancels on the sphere.
    """
    values = data.values
    centered = values - values.mean(axis=0)
    norms = np.linalg.norm(centered, axis=0)
    if not np.all(norms > 0.0):
        bad = [data.variable_ids[i] for i in np.nonzero(norms == 0.0)[0]]
        raise ValueError(f"zero-variance column(s) cannot be scored: {bad}")
    scores = helmert_basis(data.n).basis.T @ (centered / norms)
    scores /= np.linalg.norm(scores, axis=0)
    return UScoreMatrix(
        scores=scores,
        n=data.n,
        p=data.p,
        variable_ids=data.variable_ids,
        treatment_id=data.treatment_id,
    )


def correlation(U: UScoreMatrix, i, j):
    """Sample correlation of variables i and j from their U-scores.

    Returns ``U_i . U_j`` clamped to ``[-1, 1]`` so that downstream
    arccos/threshold logic never sees ``1 + epsilon``.
    """
    for idx in (i, j):
        if not 0 <= idx < U.p:
            raise IndexError(f"column index {idx} out of range for p={U.p}")
    r = float(U.scores[:, i] @ U.scores[:, j])
    return min(max(r, -1.0), 1.0)


def write_uscores_csv(U: UScoreMatrix, path):
    """Dump scores to CSV: n-1 rows by p columns, header = variable ids."""
    ids = U.variable_ids if U.variable_ids is not None else tuple(f"v{i + 1}" for i in range(U.p))
    np.savetxt(path, U.scores, delimiter=",", comments="", header=",".join(ids), fmt="%.17g")
