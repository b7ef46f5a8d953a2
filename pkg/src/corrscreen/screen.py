"""Correlation screens over U-scores and the graphs they induce.

Three procedures share one blocked evaluation engine:

* auto screen - within one treatment, flag variable i when some other
  variable j has ``|r_ij| > rho``;
* cross screen - between two equal-n treatments, flag a-side variable i
  when some b-side variable j != i has ``|r_ij^ab| > rho``;
* persistent screen - intersect per-treatment auto results: a variable
  must be discovered in every treatment, an edge must be present in
  every treatment.

The correlation matrix R = U_a^T U_b is never materialized whole; it is
tiled into chunk x chunk blocks (`gram_chunks`), so memory stays flat in
p while the work remains dense matrix products.  Results are identical
for every chunk size.  Edge lists are materialized up to a configurable
cap and spilled to a CSV on disk beyond it, since below the phase
transition the edge count explodes toward p^2.
"""

import csv
import json
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .uscore import UScoreMatrix

__all__ = [
    "ScreenResult",
    "auto_screen",
    "cross_screen",
    "persistent_screen",
    "gram_chunks",
    "write_edges_csv",
    "write_discoveries_csv",
    "summary_dict",
    "write_summary_json",
]

DEFAULT_CHUNK = 2048
DEFAULT_EDGE_CAP = 10_000_000


@dataclass(frozen=True, eq=False)
class ScreenResult:
    """Discoveries, edges, and degrees of a thresholded correlation graph.

    ``discoveries`` are sorted variable indices with at least one
    qualifying partner.  ``edges`` holds (i, j, r) tuples - unordered
    pairs i < j for auto/persistent, ordered (a-side, b-side) pairs for
    cross - or None when the list was spilled to ``edges_path``.  For
    persistent results the degrees and per-variable ``max_abs_r`` are
    derived from the persistent edge set while N remains the size of the
    discovery-set intersection, so N > 0 with N_e = 0 is possible there
    (and only there).
    """

    mode: str
    rho: object
    discoveries: tuple
    edges: object
    degrees: np.ndarray
    N: int
    N_e: int
    p: int
    n: object
    treatment: str = ""
    variable_ids: tuple = None
    max_abs_r: np.ndarray = None
    b_discoveries: tuple = None
    edges_path: str = None

    def __post_init__(self):
        if self.mode not in ("auto", "cross", "persistent"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.N != len(self.discoveries):
            raise ValueError("N does not match the discovery list")
        if self.edges is not None and self.N_e != len(self.edges):
            raise ValueError("N_e does not match the edge list")
        if self.mode == "auto" and (self.N == 0) != (self.N_e == 0):
            raise ValueError("auto screen invariant violated: N = 0 iff N_e = 0")
        degrees = np.asarray(self.degrees, dtype=np.int64)
        degrees.flags.writeable = False
        object.__setattr__(self, "degrees", degrees)
        if self.max_abs_r is not None:
            m = np.asarray(self.max_abs_r, dtype=np.float64)
            m.flags.writeable = False
            object.__setattr__(self, "max_abs_r", m)


def _check_scores(U):
    if not isinstance(U, UScoreMatrix):
        raise TypeError("expected a UScoreMatrix")
    norms = np.linalg.norm(U.scores, axis=0)
    if np.abs(norms - 1.0).max() > 1e-8:
        raise ValueError("degenerate scores: columns are not unit norm")


def _check_rho(rho):
    rho = float(rho)
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    return rho


def _block_product(left, right):
    """Correlation block with a chunk-shape-independent evaluation order.

    Accumulates rank-1 outer products in fixed k order, so each entry's
    floating-point result depends only on the two score columns - not on
    the block shape.  (A single matrix product would let the BLAS pick
    shape-dependent accumulation orders, and results would then differ
    in the last bit between chunk sizes.)
    """
    block = left[0][:, None] * right[0][None, :]
    scratch = np.empty_like(block)
    for k in range(1, left.shape[0]):
        np.multiply(left[k][:, None], right[k][None, :], out=scratch)
        block += scratch
    return block


def gram_chunks(U: UScoreMatrix, Ub: UScoreMatrix = None, chunk_size=DEFAULT_CHUNK):
    """Yield correlation blocks ((i0, i1), (j0, j1), R[i0:i1, j0:j1]).

    With one input, blocks tile the upper triangle of the symmetric Gram
    matrix (only block pairs with i0 <= j0 are emitted), covering every
    unordered column pair exactly once.  With two inputs, all blocks of
    the rectangular cross-product are emitted.  Block order is row-major
    and deterministic, and every block value is bit-identical across
    chunk sizes.
    """
    chunk_size = int(chunk_size)
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")
    Sa = U.scores
    Sb = Sa if Ub is None else Ub.scores
    pa, pb = Sa.shape[1], Sb.shape[1]
    for i0 in range(0, pa, chunk_size):
        i1 = min(i0 + chunk_size, pa)
        j_start = i0 if Ub is None else 0
        for j0 in range(j_start, pb, chunk_size):
            j1 = min(j0 + chunk_size, pb)
            yield (i0, i1), (j0, j1), _block_product(Sa[:, i0:i1], Sb[:, j0:j1])


class _EdgeSink:
    """Collects (i, j, r) edges, spilling to a CSV once a cap is crossed."""

    def __init__(self, cap, spill_path, variable_ids, treatment):
        self.cap = cap
        self.spill_path = spill_path
        self.variable_ids = variable_ids
        self.treatment = treatment
        self.count = 0
        self._edges = []
        self._writer = None
        self._file = None

    def _open_spill(self):
        if self.spill_path is None:
            handle = tempfile.NamedTemporaryFile(
                mode="w", suffix=".csv", prefix="edges-", delete=False, newline=""
            )
            self.spill_path = handle.name
            self._file = handle
        else:
            self._file = open(self.spill_path, "w", newline="")
        self._writer = csv.writer(self._file)
        self._writer.writerow(["var_i", "var_j", "r", "treatment"])
        for i, j, r in self._edges:
            self._write_row(i, j, r)
        self._edges = None

    def _write_row(self, i, j, r):
        vi = self.variable_ids[i] if self.variable_ids else str(i)
        vj = self.variable_ids[j] if self.variable_ids else str(j)
        self._writer.writerow([vi, vj, f"{r:.17g}", self.treatment])

    def add(self, rows, cols, values):
        self.count += len(rows)
        if self._writer is None and self.count > self.cap:
            self._open_spill()
        if self._writer is None:
            self._edges.extend(zip(rows.tolist(), cols.tolist(), values.tolist()))
        else:
            for i, j, r in zip(rows.tolist(), cols.tolist(), values.tolist()):
                self._write_row(i, j, r)

    def finalize(self):
        if self._writer is not None:
            self._file.close()
            return None, self.spill_path
        return tuple(sorted(self._edges)), None


def auto_screen(
    U: UScoreMatrix,
    rho,
    *,
    chunk_size=DEFAULT_CHUNK,
    edge_cap=DEFAULT_EDGE_CAP,
    spill_path=None,
) -> ScreenResult:
    """Flag variables whose largest off-diagonal |correlation| exceeds rho.

    Parameters
    ----------
    U : UScoreMatrix
        Scores for one treatment.
    rho : float
        Strict threshold in (0, 1); ties at exactly rho are excluded.
    chunk_size : int
        Block width for the tiled Gram evaluation; has no effect on the
        result, only on peak memory (~ 8 * chunk_size**2 bytes a block).
    edge_cap : int
        Edges are kept in memory up to this many; beyond, the list is
        streamed to ``spill_path`` (a temp file when not given) and the
        result carries ``edges=None`` with ``edges_path`` set.

    Returns
    -------
    ScreenResult
        Sorted discoveries and (i, j, r) edges with i < j, per-variable
        degrees and largest off-diagonal |r|.
    """
    _check_scores(U)
    rho = _check_rho(rho)
    p = U.p
    degrees = np.zeros(p, dtype=np.int64)
    max_abs = np.zeros(p)
    sink = _EdgeSink(edge_cap, spill_path, U.variable_ids, U.treatment_id)
    for (i0, i1), (j0, j1), block in gram_chunks(U, chunk_size=chunk_size):
        absblock = np.abs(block)
        if i0 == j0:
            np.fill_diagonal(absblock, 0.0)
            np.maximum(max_abs[i0:i1], absblock.max(axis=1), out=max_abs[i0:i1])
            rows, cols = np.nonzero(np.triu(absblock, k=1) > rho)
        else:
            np.maximum(max_abs[i0:i1], absblock.max(axis=1), out=max_abs[i0:i1])
            np.maximum(max_abs[j0:j1], absblock.max(axis=0), out=max_abs[j0:j1])
            rows, cols = np.nonzero(absblock > rho)
        if rows.size:
            np.add.at(degrees, rows + i0, 1)
            np.add.at(degrees, cols + j0, 1)
            sink.add(rows + i0, cols + j0, block[rows, cols])
    edges, spilled = sink.finalize()
    discoveries = tuple(np.nonzero(degrees > 0)[0].tolist())
    return ScreenResult(
        mode="auto",
        rho=rho,
        discoveries=discoveries,
        edges=edges,
        degrees=degrees,
        N=len(discoveries),
        N_e=sink.count,
        p=p,
        n=U.n,
        treatment=U.treatment_id,
        variable_ids=U.variable_ids,
        max_abs_r=max_abs,
        edges_path=spilled,
    )


def cross_screen(
    Ua: UScoreMatrix,
    Ub: UScoreMatrix,
    rho,
    *,
    chunk_size=DEFAULT_CHUNK,
    edge_cap=DEFAULT_EDGE_CAP,
    spill_path=None,
) -> ScreenResult:
    """Flag a-side variables correlated with a *different* b-side variable.

    Requires equal sample counts (the cross-correlation of two score
    matrices is only defined for n_a = n_b) and an identical variable
    universe.  The self-pair i = j is excluded.  Edges are ordered
    (a-side i, b-side j) pairs, so (i, j) and (j, i) are distinct and
    generally carry different r values.  N counts a-side discoveries;
    the b-side discovery list is reported as ``b_discoveries``.
    """
    from .errors import InfeasibleError

    _check_scores(Ua)
    _check_scores(Ub)
    rho = _check_rho(rho)
    if Ua.n != Ub.n:
        raise InfeasibleError(
            f"cross screening requires equal sample counts (n_a = n_b); got n_a={Ua.n}, n_b={Ub.n}"
        )
    if Ua.p != Ub.p:
        raise ValueError(f"variable counts differ: {Ua.p} vs {Ub.p}")
    if (
        Ua.variable_ids is not None
        and Ub.variable_ids is not None
        and Ua.variable_ids != Ub.variable_ids
    ):
        raise ValueError("variable ids differ between the two treatments")
    p = Ua.p
    degrees = np.zeros(p, dtype=np.int64)
    max_abs = np.zeros(p)
    b_hit = np.zeros(p, dtype=bool)
    treatment = f"{Ua.treatment_id}->{Ub.treatment_id}"
    sink = _EdgeSink(edge_cap, spill_path, Ua.variable_ids, treatment)
    for (i0, i1), (j0, j1), block in gram_chunks(Ua, Ub, chunk_size=chunk_size):
        absblock = np.abs(block)
        lo = max(i0, j0)
        hi = min(i1, j1)
        if lo < hi:  # zero out self-pairs i == j crossing this block
            idx = np.arange(lo, hi)
            absblock[idx - i0, idx - j0] = 0.0
        np.maximum(max_abs[i0:i1], absblock.max(axis=1), out=max_abs[i0:i1])
        rows, cols = np.nonzero(absblock > rho)
        if rows.size:
            np.add.at(degrees, rows + i0, 1)
            b_hit[cols + j0] = True
            sink.add(rows + i0, cols + j0, block[rows, cols])
    edges, spilled = sink.finalize()
    discoveries = tuple(np.nonzero(degrees > 0)[0].tolist())
    return ScreenResult(
        mode="cross",
        rho=rho,
        discoveries=discoveries,
        edges=edges,
        degrees=degrees,
        N=len(discoveries),
        N_e=sink.count,
        p=p,
        n=(Ua.n, Ub.n),
        treatment=treatment,
        variable_ids=Ua.variable_ids,
        max_abs_r=max_abs,
        b_discoveries=tuple(np.nonzero(b_hit)[0].tolist()),
        edges_path=spilled,
    )


def persistent_screen(results) -> ScreenResult:
    """Intersect per-treatment auto screens.

    Parameters
    ----------
    results : sequence of ScreenResult
        At least two auto results over the same variables, each with a
        materialized edge list.

    Returns
    -------
    ScreenResult
        ``discoveries`` is the intersection of the per-treatment
        discovery sets (a variable must fire in every treatment);
        ``edges`` are the pairs present in every treatment's edge list,
        annotated with the smallest per-treatment |r| - the magnitude
        all treatments exceed.
    """
    results = list(results)
    if len(results) < 2:
        raise ValueError("persistent screening needs at least two treatments")
    p = results[0].p
    ids = results[0].variable_ids
    for res in results:
        if res.mode != "auto":
            raise ValueError("persistent screening expects auto-screen results")
        if res.p != p:
            raise ValueError(f"variable counts differ: {res.p} vs {p}")
        if ids is not None and res.variable_ids is not None and res.variable_ids != ids:
            raise ValueError("variable ids differ across treatments")
        if res.edges is None:
            raise ValueError(
                f"persistent screening needs materialized edges; spilled to {res.edges_path}"
            )

    discovered = set(results[0].discoveries)
    for res in results[1:]:
        discovered &= set(res.discoveries)

    common = {(i, j): abs(r) for i, j, r in results[0].edges}
    for res in results[1:]:
        here = {(i, j): abs(r) for i, j, r in res.edges}
        common = {
            pair: min(rmin, here[pair]) for pair, rmin in common.items() if pair in here
        }
    edges = tuple(sorted((i, j, r) for (i, j), r in common.items()))

    degrees = np.zeros(p, dtype=np.int64)
    max_abs = np.zeros(p)
    for i, j, r in edges:
        degrees[i] += 1
        degrees[j] += 1
        max_abs[i] = max(max_abs[i], r)
        max_abs[j] = max(max_abs[j], r)

    return ScreenResult(
        mode="persistent",
        rho=tuple(res.rho for res in results),
        discoveries=tuple(sorted(discovered)),
        edges=edges,
        degrees=degrees,
        N=len(discovered),
        N_e=len(edges),
        p=p,
        n=tuple(res.n for res in results),
        treatment="&".join(res.treatment for res in results),
        variable_ids=ids,
        max_abs_r=max_abs,
    )


def _var_name(result, index):
    if result.variable_ids is not None:
        return result.variable_ids[index]
    return str(index)


def write_edges_csv(result: ScreenResult, path):
    """Write the edge list as CSV with columns var_i, var_j, r, treatment."""
    if result.edges is None:
        raise ValueError(
            f"edges were spilled during screening; the CSV already exists at {result.edges_path}"
        )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["var_i", "var_j", "r", "treatment"])
        for i, j, r in result.edges:
            writer.writerow([_var_name(result, i), _var_name(result, j), f"{r:.17g}", result.treatment])


def write_discoveries_csv(result: ScreenResult, path):
    """Write discovered variables as CSV with columns var, degree, max_abs_r."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["var", "degree", "max_abs_r"])
        for i in result.discoveries:
            writer.writerow([_var_name(result, i), int(result.degrees[i]), f"{result.max_abs_r[i]:.17g}"])


def summary_dict(result: ScreenResult, provenance=None):
    """JSON-ready summary: mode, rho, N, N_e, p, n plus id-level lists."""
    rho = list(result.rho) if isinstance(result.rho, tuple) else result.rho
    n = list(result.n) if isinstance(result.n, tuple) else result.n
    summary = {
        "mode": result.mode,
        "rho": rho,
        "N": result.N,
        "N_e": result.N_e,
        "p": result.p,
        "n": n,
        "treatment": result.treatment,
        "discoveries": [_var_name(result, i) for i in result.discoveries],
    }
    if result.b_discoveries is not None:
        summary["b_discoveries"] = [_var_name(result, i) for i in result.b_discoveries]
        summary["discovery_side"] = "a"
    if result.edges_path is not None:
        summary["edges_path"] = str(result.edges_path)
    if provenance is not None:
        summary["provenance"] = provenance
    return summary


def write_summary_json(result: ScreenResult, path, provenance=None):
    summary = summary_dict(result, provenance)
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary
