import csv
import json
import math

import numpy as np
import pytest

from corrscreen import montecarlo as mc
from corrscreen import phase
from corrscreen.uscore import compute_uscores


def test_sample_data_is_deterministic_per_replicate():
    spec = mc.SimSpec(p=12, n=9, rho=0.5, master_seed=100)
    a = mc.sample_data(spec, 4)
    b = mc.sample_data(spec, 4)
    assert np.array_equal(a.values, b.values)
    assert a.variable_ids == tuple(f"v{i}" for i in range(1, 13))
    assert a.treatment_id == "t0"
    assert not np.array_equal(a.values, mc.sample_data(spec, 5).values)
    spec2 = mc.SimSpec(p=12, n=(9, 9), mode="cross", rho=0.5, master_seed=100)
    other_arm = mc.sample_data(spec2, 4, treatment=1)
    assert other_arm.treatment_id == "t1"
    assert not np.array_equal(a.values, other_arm.values)


def test_covariance_spec_validation():
    with pytest.raises(ValueError, match="kind"):
        mc.CovarianceSpec(kind="banded", p=10)
    with pytest.raises(ValueError, match="block size"):
        mc.CovarianceSpec(kind="planted_block", p=10, q=1, rho1=0.5)
    with pytest.raises(ValueError, match="block size"):
        mc.CovarianceSpec(kind="planted_block", p=10, q=11, rho1=0.5)
    with pytest.raises(ValueError, match="rho1"):
        mc.CovarianceSpec(kind="planted_block", p=10, q=3, rho1=1.0)
    with pytest.raises(ValueError, match="positive definite"):
        mc.CovarianceSpec(kind="planted_block", p=10, q=3, rho1=-0.6)
    # -1/(q-1) < rho1 < 0 is a valid (negatively) equicorrelated block.
    mc.CovarianceSpec(kind="planted_block", p=10, q=3, rho1=-0.4)


def test_covariance_transform_shapes_correlations():
    spec = mc.CovarianceSpec(kind="planted_block", p=5, q=3, rho1=0.6)
    rng = np.random.default_rng(1)
    x = spec.transform(rng.standard_normal((50_000, 5)))
    corr = np.corrcoef(x.T)
    for i in range(3):
        for j in range(i + 1, 3):
            assert corr[i, j] == pytest.approx(0.6, abs=0.02)
    assert abs(corr[0, 4]) < 0.02
    assert abs(corr[3, 4]) < 0.02
    # Diagonal dispersion passes data through untouched.
    y = rng.standard_normal((8, 5))
    assert mc.CovarianceSpec(kind="diagonal", p=5).transform(y) is y


def test_covariance_scatter_and_matrix():
    spec = mc.CovarianceSpec(kind="q_sparse", p=30, q=4, rho1=0.5, permutation_seed=7)
    idx = spec.planted_indices()
    assert len(idx) == 4 and len(set(idx)) == 4
    assert spec.planted_indices() == idx  # seeded, hence stable
    assert mc.CovarianceSpec(kind="planted_block", p=30, q=4, rho1=0.5).planted_indices() == (0, 1, 2, 3)
    sigma = spec.matrix()
    assert np.array_equal(np.diag(sigma), np.ones(30))
    for i in idx:
        for j in idx:
            if i != j:
                assert sigma[i, j] == 0.5
    assert sigma.sum() == pytest.approx(30 + 12 * 0.5)
    np.linalg.cholesky(sigma)  # positive definite


def test_simspec_validation():
    with pytest.raises(ValueError, match="exactly one of rho or alpha"):
        mc.SimSpec(p=10, n=8)
    with pytest.raises(ValueError, match="exactly one of rho or alpha"):
        mc.SimSpec(p=10, n=8, rho=0.5, alpha=0.05)
    with pytest.raises(ValueError, match="dof"):
        mc.SimSpec(p=10, n=8, rho=0.5, distribution="student_t")
    with pytest.raises(ValueError, match="mode"):
        mc.SimSpec(p=10, n=8, rho=0.5, mode="both")
    with pytest.raises(ValueError, match="covariance is for p="):
        mc.SimSpec(p=10, n=8, rho=0.5, covariance=mc.CovarianceSpec(kind="diagonal", p=11))
    with pytest.raises(ValueError, match="at least 3 samples"):
        mc.SimSpec(p=10, n=2, rho=0.5)
    assert mc.SimSpec(p=10, n=8, rho=0.5).treatments() == 1
    assert mc.SimSpec(p=10, n=8, rho=0.5, mode="cross").treatments() == 2
    assert mc.SimSpec(p=10, n=(8, 9, 10), rho=0.5, mode="persistent").treatments() == 3
    with pytest.raises(ValueError, match="sample counts"):
        mc.SimSpec(p=10, n=(8, 9, 10), rho=0.5, mode="cross").n_list()


def test_simspec_resolves_alpha_to_thresholds():
    spec = mc.SimSpec(p=50, n=8, alpha=0.1)
    (rho,) = spec.resolve_rhos()
    assert rho == phase.fwer_threshold_auto(50, 8, 0.1).rho
    spec = mc.SimSpec(p=50, n=(8, 12), mode="persistent", alpha=0.1)
    rhos = spec.resolve_rhos()
    assert rhos == tuple(r.rho for r in phase.fwer_thresholds_persistent(50, [8, 12], 0.1))
    explicit = mc.SimSpec(p=50, n=(8, 12), mode="persistent", rho=0.7)
    assert explicit.resolve_rhos() == (0.7, 0.7)


def test_simspec_json_round_trip():
    spec = mc.SimSpec(
        p=40,
        n=(8, 10),
        mode="persistent",
        rho=(0.7, 0.65),
        replicates=5,
        covariance=mc.CovarianceSpec(kind="planted_block", p=40, q=2, rho1=0.5),
    )
    back = mc.simspec_from_dict(json.loads(json.dumps(spec.to_dict())))
    assert back == spec
    # The covariance block may omit p; it inherits the spec's.
    partial = mc.simspec_from_dict(
        {"p": 20, "n": 8, "rho": 0.5, "covariance": {"kind": "planted_block", "q": 2, "rho1": 0.4}}
    )
    assert partial.covariance.p == 20


def test_worker_count_does_not_change_the_report():
    base = dict(p=30, n=8, rho=0.65, replicates=40, master_seed=21)
    serial = mc.empirical_fwer(mc.SimSpec(**base, workers=1))
    parallel = mc.empirical_fwer(mc.SimSpec(**base, workers=2))
    assert serial.to_dict() == parallel.to_dict()


def test_student_t_null_equals_gaussian_at_same_seed():
    # The elliptical sampler uses one radial factor for the whole
    # matrix, so normalization cancels it: U-scores (and hence every
    # screening statistic) match the Gaussian draw seed for seed.
    gauss = mc.SimSpec(p=30, n=8, rho=0.65, master_seed=5, replicates=100)
    heavy = mc.SimSpec(
        p=30, n=8, rho=0.65, master_seed=5, replicates=100, distribution="student_t", dof=3.0
    )
    Ug = compute_uscores(mc.sample_data(gauss, 3)).scores
    Ut = compute_uscores(mc.sample_data(heavy, 3)).scores
    assert np.allclose(Ug, Ut, atol=1e-12)
    rg = mc.empirical_fwer(gauss)
    rt = mc.empirical_fwer(heavy)
    assert rt.mean_N == rg.mean_N
    assert rt.mean_N_e == rg.mean_N_e
    assert rt.distribution == "student_t"


def test_empirical_fwer_calibration():
    report = mc.empirical_fwer(mc.SimSpec(p=50, n=8, alpha=0.1, replicates=800, master_seed=42))
    assert report.predicted_fwer == pytest.approx(0.1, abs=1e-3)
    assert abs(report.empirical_fwer - report.predicted_fwer) < 3 * report.se_fwer + 0.01
    assert abs(report.mean_N - report.predicted_mean_N) < 3 * report.se_N + 0.01
    assert report.n == 8 and isinstance(report.rho, float)
    assert report.predicted_lambda == pytest.approx(-2.0 * math.log1p(-0.1), rel=1e-9)
    assert report.seed_scheme == mc.SEED_SCHEME
    assert report.per_treatment_mean_N is None


def test_poisson_dispersion_near_one():
    report = mc.poisson_check(mc.SimSpec(p=50, n=8, alpha=0.3, replicates=800, master_seed=7))
    assert report.dispersion == pytest.approx(1.0, abs=0.2)
    assert report.var_N_e > 0
    assert report.mean_N_e > 0


def test_persistent_report_carries_per_treatment_means():
    spec = mc.SimSpec(p=30, n=(8, 8), mode="persistent", rho=0.8, replicates=50, master_seed=2)
    report = mc.empirical_fwer(spec)
    assert report.mode == "persistent"
    assert len(report.per_treatment_mean_N) == 2
    # Persistent discoveries are an intersection, never beating one arm.
    assert report.mean_N <= min(report.per_treatment_mean_N)
    assert report.n == (8, 8) and report.rho == (0.8, 0.8)


def test_phase_curve_matches_screening_and_theory():
    points = mc.phase_curve(40, [8], [0.5, 0.6, 0.7, 0.8], 30, master_seed=9)
    assert [c.rho for c in points] == [0.5, 0.6, 0.7, 0.8]
    # The sweep counts exactly what the auto screen counts.
    report = mc.empirical_fwer(mc.SimSpec(p=40, n=8, rho=0.7, replicates=30, master_seed=9))
    (point,) = [c for c in points if c.rho == 0.7]
    assert point.mean_N_over_p * 40 == report.mean_N
    assert point.theory == pytest.approx(phase.expected_auto_exact(40, 8, 0.7) / 40, rel=1e-12)
    means = [c.mean_N_over_p for c in points]
    assert all(a >= b for a, b in zip(means, means[1:]))
    for c in points:
        assert abs(c.mean_N_over_p - c.theory) < 4 * c.se + 0.02


def test_phase_curve_validation():
    with pytest.raises(ValueError, match="empty"):
        mc.phase_curve(10, [8], [], 5)
    with pytest.raises(ValueError, match="rho grid"):
        mc.phase_curve(10, [8], [0.5, 1.0], 5)


def test_empirical_knee_recovers_unit_slope_point():
    grid = [round(0.90 + 0.005 * k, 3) for k in range(20)]
    points = [
        mc.CurvePoint(
            n=10,
            rho=r,
            mean_N_over_p=phase.expected_auto_exact(500, 10, r) / 500,
            se=0.0,
            theory=0.0,
            replicates=1,
        )
        for r in grid
    ]
    knee = mc.empirical_knee(points)
    target = phase.critical_threshold_auto(500, 10, variant="unit_slope").rho
    assert abs(knee - target) <= 0.0075  # grid resolution
    flat = [p for p in points if p.rho >= 0.995]
    assert mc.empirical_knee(points[:3] + flat) is not None
    high = [
        mc.CurvePoint(n=10, rho=r, mean_N_over_p=phase.expected_auto_exact(500, 10, r) / 500,
                      se=0.0, theory=0.0, replicates=1)
        for r in (0.995, 0.997, 0.999)
    ]
    assert mc.empirical_knee(high) is None
    with pytest.raises(ValueError, match="single n"):
        mc.empirical_knee(points[:2] + [mc.CurvePoint(n=11, rho=0.99, mean_N_over_p=0.0, se=0.0, theory=0.0, replicates=1)])
    with pytest.raises(ValueError, match="3 grid points"):
        mc.empirical_knee(points[:2])


def test_operating_points_hit_planned_rates():
    (row,) = mc.operating_points(60, [15], 0.1, [0.7], 250, master_seed=3)
    reports = phase.fwer_thresholds_persistent(60, [15, 15], 0.1)
    assert row.rho == reports[0].rho
    assert abs(row.alpha_hat - 0.1) < 3.5 * row.se_alpha + 0.01
    assert abs(row.beta_hat - 0.7) < 3.5 * row.se_beta + 0.02
    assert row.n == 15 and row.beta == 0.7 and row.alpha == 0.1
    assert row.rho1 > row.rho


def test_report_and_point_writers(tmp_path):
    report = mc.empirical_fwer(mc.SimSpec(p=20, n=8, rho=0.7, replicates=20, master_seed=1))
    path = tmp_path / "report.json"
    payload = mc.write_sim_report_json(report, path, provenance={"tool": "corrscreen"})
    on_disk = json.loads(path.read_text())
    assert on_disk == payload
    assert on_disk["provenance"] == {"tool": "corrscreen"}
    assert on_disk["mean_N"] == report.mean_N

    points = mc.phase_curve(20, [8], [0.6, 0.7], 10, master_seed=1)
    curve_path = tmp_path / "curve.csv"
    mc.write_curve_csv(points, curve_path)
    with open(curve_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [float(r["rho"]) for r in rows] == [0.6, 0.7]
    assert float(rows[0]["mean_N_over_p"]) == points[0].mean_N_over_p

    ops = mc.operating_points(30, [10], 0.2, [0.6], 20, master_seed=1)
    op_path = tmp_path / "ops.csv"
    mc.write_operating_points_csv(ops, op_path)
    with open(op_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    assert float(rows[0]["beta_hat"]) == ops[0].beta_hat
    assert int(rows[0]["n"]) == 10
