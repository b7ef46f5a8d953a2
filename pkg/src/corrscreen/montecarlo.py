"""Monte Carlo harness validating the screening theory.

Samples elliptical data with structured covariance, runs the real
screening pipeline on every replicate, and compares empirical discovery
statistics with their asymptotic predictions: mean counts, familywise
error rates, Poisson dispersion of the edge count, phase-transition
curves, and operating points of the persistent screen with a planted
correlated pair.

Determinism: every replicate draws from a generator seeded by
``SeedSequence(master_seed, spawn_key=(replicate_index,
treatment_index))``, so replicates are reproducible individually and
independent of execution order.  Per-replicate statistics are integers
and reductions are exact integer sums, so reports are bit-identical for
any worker count.
"""

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict

import numpy as np

from .errors import InfeasibleError
from .ingest import DataMatrix
from .phase import (
    expected_auto_exact,
    fwer_threshold_auto,
    fwer_threshold_cross,
    fwer_thresholds_persistent,
)
from .screen import auto_screen, cross_screen, persistent_screen
from .spherecap import cap_probability
from .uscore import compute_uscores

__all__ = [
    "CovarianceSpec",
    "SimSpec",
    "SimReport",
    "CurvePoint",
    "OperatingPoint",
    "sample_data",
    "empirical_fwer",
    "poisson_check",
    "phase_curve",
    "empirical_knee",
    "operating_points",
    "write_sim_report_json",
    "write_curve_csv",
    "write_operating_points_csv",
]

SEED_SCHEME = "default_rng(SeedSequence(master_seed, spawn_key=(replicate_index, treatment_index)))"

_COV_KINDS = ("diagonal", "planted_block", "q_sparse")
_DISTRIBUTIONS = ("gaussian", "student_t")
_MODES = ("auto", "cross", "persistent")


@dataclass(frozen=True)
class CovarianceSpec:
    """Structured p x p dispersion: diagonal, or one correlated block.

    ``planted_block`` places an equicorrelated q x q block (correlation
    rho1) at the first q variables; ``q_sparse`` additionally scatters
    the block through a seeded column permutation, which leaves every
    screen permutation-equivariant.  The matrix must be positive
    definite, i.e. ``rho1 > -1/(q-1)`` and ``|rho1| < 1``.
    """

    kind: str = "diagonal"
    p: int = 2
    q: int = 0
    rho1: float = 0.0
    permutation_seed: int = None

    def __post_init__(self):
        if self.kind not in _COV_KINDS:
            raise ValueError(f"kind must be one of {_COV_KINDS}, got {self.kind!r}")
        if self.p < 2:
            raise ValueError(f"p must be >= 2, got {self.p}")
        if self.kind != "diagonal":
            if not 2 <= self.q <= self.p:
                raise ValueError(f"block size q must lie in [2, p], got {self.q}")
            if not abs(self.rho1) < 1.0:
                raise ValueError(f"|rho1| must be < 1, got {self.rho1}")
            if self.rho1 <= -1.0 / (self.q - 1):
                raise ValueError(
                    f"covariance is not positive definite: rho1={self.rho1} <= -1/(q-1)"
                )

    def _block_cholesky(self):
        block = np.full((self.q, self.q), self.rho1)
        np.fill_diagonal(block, 1.0)
        try:
            return np.linalg.cholesky(block)
        except np.linalg.LinAlgError as exc:  # defensive; the rho1 bound should prevent this
            raise InfeasibleError("covariance block is not positive definite") from exc

    def _permutation(self):
        if self.kind != "q_sparse":
            return None
        return np.random.default_rng(self.permutation_seed).permutation(self.p)

    def transform(self, gaussian):
        """Map i.i.d. standard normal columns to covariance-shaped columns."""
        if self.kind == "diagonal":
            return gaussian
        x = gaussian.copy()
        x[:, : self.q] = gaussian[:, : self.q] @ self._block_cholesky().T
        perm = self._permutation()
        if perm is not None:
            out = np.empty_like(x)
            out[:, perm] = x
            x = out
        return x

    def planted_indices(self):
        """Column indices of the correlated block (after any permutation)."""
        if self.kind == "diagonal":
            return ()
        base = np.arange(self.q)
        perm = self._permutation()
        if perm is not None:
            return tuple(int(perm[i]) for i in base)
        return tuple(int(i) for i in base)

    def matrix(self):
        """Dense covariance matrix, for inspection and small-p oracles."""
        sigma = np.eye(self.p)
        if self.kind != "diagonal":
            idx = np.asarray(self.planted_indices())
            sigma[np.ix_(idx, idx)] = self.rho1
            sigma[idx, idx] = 1.0
        return sigma


@dataclass(frozen=True)
class SimSpec:
    """One simulation study: sampling law, screen, threshold, replication.

    ``n`` is an int (shared by all treatments) or a per-treatment tuple;
    the treatment count comes from the mode (1 for auto, 2 for cross,
    len(n) or 2 for persistent).  Exactly one of ``rho`` (explicit
    threshold(s)) or ``alpha`` (familywise target, solved through the
    Poisson limits) must be set.  ``master_seed`` makes the whole study
    deterministic.
    """

    p: int
    n: object
    mode: str = "auto"
    distribution: str = "gaussian"
    dof: float = None
    covariance: CovarianceSpec = None
    rho: object = None
    alpha: float = None
    J: float = 1.0
    replicates: int = 1000
    master_seed: int = 0
    chunk_size: int = 4096
    workers: int = 1

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"p must be >= 2, got {self.p}")
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")
        if self.distribution not in _DISTRIBUTIONS:
            raise ValueError(
                f"distribution must be one of {_DISTRIBUTIONS}, got {self.distribution!r}"
            )
        if self.distribution == "student_t":
            if self.dof is None or not self.dof > 2:
                raise ValueError(f"student_t needs dof > 2, got {self.dof}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.covariance is None:
            object.__setattr__(self, "covariance", CovarianceSpec(kind="diagonal", p=self.p))
        if self.covariance.p != self.p:
            raise ValueError(f"covariance is for p={self.covariance.p}, spec has p={self.p}")
        if (self.rho is None) == (self.alpha is None):
            raise ValueError("exactly one of rho or alpha must be given")
        for n in self.n_list():
            if n < 3:
                raise ValueError(f"need at least 3 samples per treatment, got {n}")

    def treatments(self):
        if self.mode == "auto":
            return 1
        if self.mode == "cross":
            return 2
        return len(self.n) if isinstance(self.n, (tuple, list)) else 2

    def n_list(self):
        m = self.treatments()
        if isinstance(self.n, (tuple, list)):
            if len(self.n) != m:
                raise ValueError(f"mode {self.mode} expects {m} sample counts, got {len(self.n)}")
            return [int(n) for n in self.n]
        return [int(self.n)] * m

    def resolve_rhos(self):
        """Per-treatment thresholds, solving the alpha target if needed."""
        m = self.treatments()
        if self.rho is not None:
            rhos = list(self.rho) if isinstance(self.rho, (tuple, list)) else [float(self.rho)] * m
            if len(rhos) != m:
                raise ValueError(f"mode {self.mode} expects {m} thresholds, got {len(rhos)}")
            return tuple(float(r) for r in rhos)
        ns = self.n_list()
        if self.mode == "auto":
            return (fwer_threshold_auto(self.p, ns[0], self.alpha, self.J).rho,)
        if self.mode == "cross":
            if ns[0] != ns[1]:
                raise InfeasibleError("cross mode requires equal sample counts")
            return (fwer_threshold_cross(self.p, ns[0], self.alpha, self.J).rho,)
        reports = fwer_thresholds_persistent(self.p, ns, self.alpha, [self.J] * m)
        return tuple(r.rho for r in reports)

    def to_dict(self):
        d = asdict(self)
        return d


def simspec_from_dict(payload):
    """Build a SimSpec from a JSON-shaped dict (e.g. a spec file)."""
    data = dict(payload)
    cov = data.get("covariance")
    if isinstance(cov, dict):
        cov = dict(cov)
        cov.setdefault("p", data.get("p"))
        data["covariance"] = CovarianceSpec(**cov)
    for key in ("n", "rho"):
        if isinstance(data.get(key), list):
            data[key] = tuple(data[key])
    return SimSpec(**data)


def sample_data(spec: SimSpec, replicate_index, treatment=0) -> DataMatrix:
    """Draw one treatment's data matrix for one replicate.

    Gaussian rows come from i.i.d. standard normals pushed through the
    covariance factor.  student_t scales the whole Gaussian matrix by a
    single independent radial factor ``1/sqrt(chi2(dof)/dof)`` - an
    elliptical law with the same dispersion whose rows are each
    multivariate-t - which leaves the U-score distribution (and hence
    every null screening statistic) identical to the Gaussian case.
    """
    n = spec.n_list()[treatment]
    rng = np.random.default_rng(
        np.random.SeedSequence(spec.master_seed, spawn_key=(int(replicate_index), int(treatment)))
    )
    values = spec.covariance.transform(rng.standard_normal((n, spec.p)))
    if spec.distribution == "student_t":
        radial = math.sqrt(rng.chisquare(spec.dof) / spec.dof)
        values = values / radial
    return DataMatrix(
        values=values,
        variable_ids=tuple(f"v{i + 1}" for i in range(spec.p)),
        treatment_id=f"t{treatment}",
    )


def _screen_once(spec, rhos, replicate):
    """Run the requested screen on one replicate; returns the result(s)."""
    if spec.mode == "auto":
        U = compute_uscores(sample_data(spec, replicate, 0))
        return auto_screen(U, rhos[0], chunk_size=spec.chunk_size)
    if spec.mode == "cross":
        Ua = compute_uscores(sample_data(spec, replicate, 0))
        Ub = compute_uscores(sample_data(spec, replicate, 1))
        return cross_screen(Ua, Ub, rhos[0], chunk_size=spec.chunk_size)
    per_treatment = [
        auto_screen(compute_uscores(sample_data(spec, replicate, t)), rhos[t], chunk_size=spec.chunk_size)
        for t in range(spec.treatments())
    ]
    return persistent_screen(per_treatment), per_treatment


def _record_columns(spec, planted_pair=None):
    cols = ["N", "N_e"]
    if spec.mode == "persistent":
        cols += [f"N_t{t}" for t in range(spec.treatments())]
    if planted_pair is not None:
        cols.append("pair_persists")
    return cols


def _replicate_record(spec, rhos, replicate, planted_pair=None):
    out = _screen_once(spec, rhos, replicate)
    if spec.mode != "persistent":
        return [out.N, out.N_e]
    joint, per_treatment = out
    record = [joint.N, joint.N_e] + [res.N for res in per_treatment]
    if planted_pair is not None:
        pair = tuple(sorted(planted_pair))
        record.append(int(any((i, j) == pair for i, j, _ in joint.edges)))
    return record


def _records_chunk(args):
    spec, rhos, start, stop, planted_pair = args
    rows = [_replicate_record(spec, rhos, rep, planted_pair) for rep in range(start, stop)]
    return np.asarray(rows, dtype=np.int64)


def _collect_records(spec, rhos, planted_pair=None):
    """Per-replicate integer statistics, in replicate order."""
    reps = spec.replicates
    if spec.workers == 1:
        return _records_chunk((spec, rhos, 0, reps, planted_pair))
    bounds = np.linspace(0, reps, spec.workers * 4 + 1, dtype=int)
    tasks = [
        (spec, rhos, int(lo), int(hi), planted_pair)
        for lo, hi in zip(bounds[:-1], bounds[1:])
        if lo < hi
    ]
    with ProcessPoolExecutor(max_workers=spec.workers) as pool:
        chunks = list(pool.map(_records_chunk, tasks))
    return np.concatenate(chunks, axis=0)


def _mean_se(values):
    reps = len(values)
    mean = float(values.sum()) / reps
    if reps < 2:
        return mean, 0.0, 0.0
    var = (float((values**2).sum()) - reps * mean * mean) / (reps - 1)
    var = max(var, 0.0)
    return mean, math.sqrt(var / reps), var


@dataclass(frozen=True)
class SimReport:
    """Empirical discovery statistics with their theoretical targets."""

    mode: str
    p: int
    n: object
    rho: object
    distribution: str
    replicates: int
    mean_N: float
    se_N: float
    mean_N_e: float
    se_N_e: float
    var_N_e: float
    dispersion: float
    empirical_fwer: float
    se_fwer: float
    predicted_lambda: float
    predicted_mean_N: float
    predicted_fwer: float
    per_treatment_mean_N: tuple = None
    master_seed: int = 0
    seed_scheme: str = SEED_SCHEME

    def to_dict(self):
        d = asdict(self)
        if isinstance(d["n"], tuple):
            d["n"] = list(d["n"])
        if isinstance(d["rho"], tuple):
            d["rho"] = list(d["rho"])
        if isinstance(d["per_treatment_mean_N"], tuple):
            d["per_treatment_mean_N"] = list(d["per_treatment_mean_N"])
        return d


def _predictions(spec, rhos):
    p = spec.p
    ns = spec.n_list()
    if spec.mode == "auto":
        p0 = cap_probability(rhos[0], ns[0]).p0
        lam = p * (p - 1) * p0 * spec.J
        return lam, expected_auto_exact(p, ns[0], rhos[0]), -math.expm1(-lam / 2.0)
    if spec.mode == "cross":
        p0 = cap_probability(rhos[0], ns[0]).p0
        lam = p * p * p0 * spec.J
        return lam, expected_auto_exact(p, ns[0], rhos[0]), -math.expm1(-lam)
    rates = []
    exact_means = []
    for rho_t, n_t in zip(rhos, ns):
        p0 = cap_probability(rho_t, n_t).p0
        rates.append(p * (p - 1) * p0 * spec.J)
        exact_means.append(expected_auto_exact(p, n_t, rho_t))
    m = len(rhos)
    lam = math.prod(rates) / p ** (m - 1)
    mean = math.prod(exact_means) / p ** (m - 1)
    return lam, mean, -math.expm1(-lam)


def empirical_fwer(spec: SimSpec) -> SimReport:
    """Replicate the requested screen; report discovery and error rates.

    The familywise error estimate is the fraction of replicates with at
    least one discovery (exact under a null covariance), with a binomial
    standard error, reported next to the Poisson-limit prediction.
    """
    rhos = spec.resolve_rhos()
    records = _collect_records(spec, rhos)
    mean_N, se_N, _ = _mean_se(records[:, 0])
    mean_Ne, se_Ne, var_Ne = _mean_se(records[:, 1])
    positives = int((records[:, 0] > 0).sum())
    fwer = positives / spec.replicates
    se_fwer = math.sqrt(fwer * (1.0 - fwer) / spec.replicates)
    lam, mean_pred, fwer_pred = _predictions(spec, rhos)
    per_treatment = None
    if spec.mode == "persistent":
        per_treatment = tuple(
            float(records[:, 2 + t].sum()) / spec.replicates for t in range(spec.treatments())
        )
    return SimReport(
        mode=spec.mode,
        p=spec.p,
        n=spec.n_list()[0] if spec.mode == "auto" else tuple(spec.n_list()),
        rho=rhos[0] if len(rhos) == 1 else rhos,
        distribution=spec.distribution,
        replicates=spec.replicates,
        mean_N=mean_N,
        se_N=se_N,
        mean_N_e=mean_Ne,
        se_N_e=se_Ne,
        var_N_e=var_Ne,
        dispersion=(var_Ne / mean_Ne) if mean_Ne > 0 else float("nan"),
        empirical_fwer=fwer,
        se_fwer=se_fwer,
        predicted_lambda=lam,
        predicted_mean_N=mean_pred,
        predicted_fwer=fwer_pred,
        per_treatment_mean_N=per_treatment,
        master_seed=spec.master_seed,
    )


def poisson_check(spec: SimSpec) -> SimReport:
    """Mean/variance of the edge count against the Poisson prediction.

    Under a null or q-sparse covariance with a small block the edge
    count is asymptotically Poisson, so ``dispersion = var/mean`` should
    sit near 1 (rate Lambda/2 for the auto screen).  With a dense
    planted covariance the dispersion is still reported but carries no
    Poisson guarantee.
    """
    return empirical_fwer(spec)


@dataclass(frozen=True)
class CurvePoint:
    """One (n, rho) point of an empirical phase-transition curve."""

    n: int
    rho: float
    mean_N_over_p: float
    se: float
    theory: float
    replicates: int

    def to_dict(self):
        return asdict(self)


def _max_offdiag_chunk(args):
    spec, start, stop, grid = args
    counts = np.zeros((len(grid),), dtype=np.int64)
    sq = np.zeros((len(grid),), dtype=np.int64)
    for rep in range(start, stop):
        U = compute_uscores(sample_data(spec, rep, 0))
        scores = U.scores
        max_abs = np.zeros(spec.p)
        step = int(spec.chunk_size)
        for i0 in range(0, spec.p, step):
            i1 = min(i0 + step, spec.p)
            left = scores[:, i0:i1].T
            for j0 in range(i0, spec.p, step):
                j1 = min(j0 + step, spec.p)
                block = np.abs(left @ scores[:, j0:j1])
                if i0 == j0:
                    np.fill_diagonal(block, 0.0)
                np.maximum(max_abs[i0:i1], block.max(axis=1), out=max_abs[i0:i1])
                if i0 != j0:
                    np.maximum(max_abs[j0:j1], block.max(axis=0), out=max_abs[j0:j1])
        per_rho = (max_abs[None, :] > grid[:, None]).sum(axis=1)
        counts += per_rho
        sq += per_rho**2
    return counts, sq


def phase_curve(
    p,
    n_list,
    rho_grid,
    replicates,
    *,
    distribution="gaussian",
    dof=None,
    master_seed=0,
    chunk_size=4096,
    workers=1,
):
    """Empirical normalized mean discoveries over a threshold grid.

    For each sample count and each rho in the grid: the mean of N/p over
    replicates (with standard error) next to the exact theoretical mean.
    Each replicate is sampled once per n and swept across the whole
    grid, so the curve is internally consistent.
    """
    grid = np.asarray(sorted(float(r) for r in rho_grid))
    if grid.size == 0:
        raise ValueError("rho_grid is empty")
    if grid.min() <= 0.0 or grid.max() >= 1.0:
        raise ValueError("rho grid values must lie in (0, 1)")
    points = []
    for n in n_list:
        proto = SimSpec(
            p=p,
            n=int(n),
            mode="auto",
            distribution=distribution,
            dof=dof,
            covariance=CovarianceSpec(kind="diagonal", p=p),
            rho=0.5,  # placeholder; the curve sweeps the whole grid itself
            replicates=replicates,
            master_seed=master_seed,
            chunk_size=chunk_size,
            workers=workers,
        )
        if workers == 1:
            counts, sq = _max_offdiag_chunk((proto, 0, replicates, grid))
        else:
            bounds = np.linspace(0, replicates, workers * 4 + 1, dtype=int)
            tasks = [
                (proto, int(lo), int(hi), grid)
                for lo, hi in zip(bounds[:-1], bounds[1:])
                if lo < hi
            ]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_max_offdiag_chunk, tasks))
            counts = np.sum([c for c, _ in parts], axis=0)
            sq = np.sum([s for _, s in parts], axis=0)
        for g, rho in enumerate(grid):
            mean = counts[g] / replicates
            if replicates > 1:
                var = (float(sq[g]) - replicates * mean * mean) / (replicates - 1)
                se = math.sqrt(max(var, 0.0) / replicates)
            else:
                se = 0.0
            points.append(
                CurvePoint(
                    n=int(n),
                    rho=float(rho),
                    mean_N_over_p=mean / p,
                    se=se / p,
                    theory=expected_auto_exact(p, int(n), float(rho)) / p,
                    replicates=replicates,
                )
            )
    return points


def empirical_knee(points):
    """Largest grid rho where the curve's centered slope crosses -1.

    ``points`` must share one sample count; the slope of mean-N/p is
    estimated by centered finite differences on the rho grid.
    """
    pts = sorted(points, key=lambda c: c.rho)
    if len({c.n for c in pts}) != 1:
        raise ValueError("knee estimation expects points for a single n")
    if len(pts) < 3:
        raise ValueError("need at least 3 grid points")
    best = None
    for k in range(1, len(pts) - 1):
        slope = (pts[k + 1].mean_N_over_p - pts[k - 1].mean_N_over_p) / (
            pts[k + 1].rho - pts[k - 1].rho
        )
        if slope <= -1.0:
            best = pts[k].rho
    return best


@dataclass(frozen=True)
class OperatingPoint:
    """Planned vs. achieved (alpha, beta) for one persistent-screen cell."""

    n: int
    beta: float
    alpha: float
    rho: float
    rho1: float
    alpha_hat: float
    se_alpha: float
    beta_hat: float
    se_beta: float
    replicates: int

    def to_dict(self):
        return asdict(self)


def _derived_seed(master_seed, *key):
    state = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key)).generate_state(2)
    return int(state[0]) << 32 | int(state[1])


def operating_points(
    p,
    n_list,
    alpha,
    beta_list,
    replicates,
    *,
    master_seed=0,
    treatments=2,
    J=1.0,
    chunk_size=4096,
    workers=1,
):
    """Empirical error and detection rates of the planned persistent screen.

    For each (n, beta) cell: solve the balanced per-treatment thresholds
    at level alpha, solve the minimum detectable correlation rho1 at
    level beta, then simulate twice - null replicates for the achieved
    false-positive rate alpha_hat = P(N > 0), and replicates with a
    2 x 2 block planted at rho1 for the achieved detection rate
    beta_hat, the fraction in which the planted pair survives as a
    persistent edge.
    """
    from .power import min_detectable_correlation

    rows = []
    for cell, (n, beta) in enumerate((n, b) for n in n_list for b in beta_list):
        reports = fwer_thresholds_persistent(p, [int(n)] * treatments, alpha, [J] * treatments)
        rhos = tuple(r.rho for r in reports)
        rho1 = min_detectable_correlation(list(rhos), [int(n)] * treatments, beta)

        null_spec = SimSpec(
            p=p,
            n=tuple([int(n)] * treatments),
            mode="persistent",
            covariance=CovarianceSpec(kind="diagonal", p=p),
            rho=rhos,
            replicates=replicates,
            master_seed=_derived_seed(master_seed, cell, 0),
            chunk_size=chunk_size,
            workers=workers,
        )
        null_records = _collect_records(null_spec, rhos)
        alpha_hat = float((null_records[:, 0] > 0).sum()) / replicates
        se_alpha = math.sqrt(alpha_hat * (1.0 - alpha_hat) / replicates)

        planted_cov = CovarianceSpec(kind="planted_block", p=p, q=2, rho1=rho1)
        planted_spec = SimSpec(
            p=p,
            n=tuple([int(n)] * treatments),
            mode="persistent",
            covariance=planted_cov,
            rho=rhos,
            replicates=replicates,
            master_seed=_derived_seed(master_seed, cell, 1),
            chunk_size=chunk_size,
            workers=workers,
        )
        pair = planted_cov.planted_indices()[:2]
        planted_records = _collect_records(planted_spec, rhos, planted_pair=pair)
        beta_hat = float(planted_records[:, -1].sum()) / replicates
        se_beta = math.sqrt(beta_hat * (1.0 - beta_hat) / replicates)

        rows.append(
            OperatingPoint(
                n=int(n),
                beta=float(beta),
                alpha=float(alpha),
                rho=rhos[0],
                rho1=rho1,
                alpha_hat=alpha_hat,
                se_alpha=se_alpha,
                beta_hat=beta_hat,
                se_beta=se_beta,
                replicates=replicates,
            )
        )
    return rows


def write_sim_report_json(report: SimReport, path, provenance=None):
    payload = report.to_dict()
    if provenance is not None:
        payload["provenance"] = provenance
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return payload


def write_curve_csv(points, path):
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "rho", "mean_N_over_p", "se", "theory", "replicates"])
        for c in points:
            writer.writerow(
                [c.n, f"{c.rho:.17g}", f"{c.mean_N_over_p:.17g}", f"{c.se:.17g}", f"{c.theory:.17g}", c.replicates]
            )


def write_operating_points_csv(rows, path):
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["n", "beta", "alpha", "rho", "rho1", "alpha_hat", "se_alpha", "beta_hat", "se_beta", "replicates"]
        )
        for r in rows:
            writer.writerow(
                [
                    r.n,
                    f"{r.beta:.17g}",
                    f"{r.alpha:.17g}",
                    f"{r.rho:.17g}",
                    f"{r.rho1:.17g}",
                    f"{r.alpha_hat:.17g}",
                    f"{r.se_alpha:.17g}",
                    f"{r.beta_hat:.17g}",
                    f"{r.se_beta:.17g}",
                    r.replicates,
                ]
            )
