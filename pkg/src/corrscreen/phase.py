"""Expected discovery counts, critical thresholds, and error-rate solvers.

Under the null (diagonal dispersion, i.i.d. uniform U-scores) the mean
number of auto-screen discoveries has the exact form
``E[N] = p*(1 - (1 - P0)^(p-1))`` and the asymptotic form
``E[N] ~ p*(p-1)*P0*J``, where P0 is the spherical cap probability and J
is a user-supplied pairwise-dependency functional (1 for i.i.d. uniform
scores).  As rho falls through a narrow critical region this mean turns
abruptly from ~0 toward p; the critical threshold marks that knee.  In
the sparse regime the number of false discoveries is asymptotically
Poisson, so the familywise error rate P(N > 0) tends to
``1 - exp(-Lambda/2)`` for the auto screen (each unordered pair is
counted twice in Lambda = p*(p-1)*P0*J) and ``1 - exp(-Lambda)`` for the
cross and persistent screens.  The solvers here invert those limits.
"""

import math
from dataclasses import dataclass

from .errors import InfeasibleError
from .spherecap import a_n, cap_probability, inverse_cap_probability

__all__ = [
    "TheoryParams",
    "ThresholdReport",
    "VARIANTS",
    "TABLE_N_DEFAULT",
    "expected_auto_exact",
    "expected_auto_approx",
    "critical_threshold_auto",
    "critical_threshold_cross",
    "critical_threshold_persistent",
    "critical_threshold_table",
    "fwer_threshold_auto",
    "fwer_threshold_cross",
    "fwer_thresholds_persistent",
    "implied_alpha",
]

#: The two shipped critical-threshold conventions.  "unit_slope" solves
#: the literal knee condition (normalized mean-discovery slope = -1);
#: "table_matching" doubles the constant inside c_n (equivalently places
#: the knee at slope -1/2), which reproduces the standard published
#: reference values for the critical threshold.  Default table_matching.
VARIANTS = ("unit_slope", "table_matching")

#: Sample counts of the published nine-entry critical-threshold table.
TABLE_N_DEFAULT = (550, 500, 450, 150, 100, 50, 10, 8, 6)


@dataclass(frozen=True)
class TheoryParams:
    """Scalar inputs of the asymptotic theory.

    J is the pairwise-dependency functional (>= 0, equal to 1 for
    i.i.d. uniform scores); H2 is the Renyi-entropy functional of a
    score density (>= 1, minimized by the uniform density).  Both enter
    only as user-supplied scalars.
    """

    p: int
    n: object
    J: object = 1.0
    H2: object = 1.0

    def __post_init__(self):
        _check_p(self.p)
        for n in self.n if isinstance(self.n, (tuple, list)) else (self.n,):
            _check_sample_count(n)
        for J in self.J if isinstance(self.J, (tuple, list)) else (self.J,):
            if J < 0:
                raise ValueError(f"J must be >= 0, got {J}")
        for H2 in self.H2 if isinstance(self.H2, (tuple, list)) else (self.H2,):
            if H2 < 1:
                raise ValueError(f"H2 must be >= 1, got {H2}")


@dataclass(frozen=True)
class ThresholdReport:
    """A threshold with its provenance and Poisson rate.

    ``kind`` records how rho was produced (critical_point, fwer_solved,
    or user); ``lam`` is the Poisson rate Lambda at rho and ``alpha``
    the implied familywise error rate - ``1 - exp(-lam/2)`` in auto
    mode, ``1 - exp(-lam)`` otherwise.  Thresholds solved per treatment
    (persistent mode) share lam and alpha across their reports.
    """

    mode: str
    rho: float
    lam: float
    alpha: float
    kind: str
    variant: str = None

    def __post_init__(self):
        if self.mode not in ("auto", "cross", "persistent"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.kind not in ("critical_point", "fwer_solved", "user"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if self.lam < 0.0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        scale = 0.5 if self.mode == "auto" else 1.0
        if not math.isclose(self.alpha, -math.expm1(-scale * self.lam), rel_tol=1e-9, abs_tol=1e-12):
            raise ValueError("alpha is inconsistent with lambda for this mode")

    def to_dict(self):
        return {
            "mode": self.mode,
            "rho": self.rho,
            "lambda": self.lam,
            "alpha": self.alpha,
            "kind": self.kind,
            "variant": self.variant,
        }


def _check_p(p):
    if not isinstance(p, int) or isinstance(p, bool):
        raise TypeError(f"p must be an integer, got {p!r}")
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")


def _check_sample_count(n, minimum=3):
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"n must be an integer, got {n!r}")
    if n < minimum:
        raise ValueError(f"n must be >= {minimum}, got {n}")


def _check_alpha(alpha):
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def _check_rho_open(rho):
    rho = float(rho)
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    return rho


def _check_J(J, *, positive=False):
    J = float(J)
    if J < 0 or (positive and J == 0):
        raise ValueError(f"J must be {'> 0' if positive else '>= 0'}, got {J}")
    return J


def _p0(rho, n):
    return cap_probability(rho, n).p0


def expected_auto_exact(p, n, rho):
    """Exact null mean number of auto-screen discoveries.

    ``E[N] = p*(1 - (1 - P0)^(p-1))`` with exact P0, evaluated through
    log1p/expm1 so that tiny P0 (deep in the no-discovery regime) keeps
    full relative precision.
    """
    _check_p(p)
    _check_sample_count(n)
    rho = _check_rho_open(rho)
    p0 = _p0(rho, n)
    if p0 >= 1.0:
        return float(p)
    return p * -math.expm1((p - 1) * math.log1p(-p0))


def expected_auto_approx(p, n, rho, J=1.0):
    """Asymptotic null mean of discoveries, ``p*(p-1)*P0*J``."""
    _check_p(p)
    _check_sample_count(n)
    rho = _check_rho_open(rho)
    J = _check_J(J)
    return p * (p - 1) * _p0(rho, n) * J


def _critical_rho(p_term, n, constant):
    # rho_c = sqrt(1 - c_n * p_term^(-2/(n-4))) with c_n = constant^(-2/(n-4))
    exponent = -2.0 / (n - 4)
    arg = constant**exponent * p_term**exponent
    if arg >= 1.0:
        raise InfeasibleError(
            "no critical threshold in (0, 1) for these parameters (c_n * p^(-2/(n-4)) >= 1)"
        )
    return math.sqrt(1.0 - arg)


def _require_supercritical_n(n):
    _check_sample_count(n)
    if n <= 4:
        raise ValueError(f"critical thresholds require n > 4, got {n}")


def _check_variant(variant):
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return variant


def critical_threshold_auto(p, n, J=1.0, variant="table_matching"):
    """Knee of the auto-screen mean-discovery curve.

    ``rho_c = sqrt(1 - c_n*(p-1)^(-2/(n-4)))`` where the unit_slope
    variant takes ``c_n = (a_n*J)^(-2/(n-4))`` and table_matching doubles
    the constant, ``c_n = (2*a_n*J)^(-2/(n-4))``.  Requires n > 4.
    """
    _check_p(p)
    _require_supercritical_n(n)
    J = _check_J(J, positive=True)
    _check_variant(variant)
    factor = 2.0 if variant == "table_matching" else 1.0
    rho = _critical_rho(p - 1, n, factor * a_n(n) * J)
    lam = p * (p - 1) * _p0(rho, n) * J
    return ThresholdReport(
        mode="auto", rho=rho, lam=lam, alpha=-math.expm1(-lam / 2.0), kind="critical_point", variant=variant
    )


def critical_threshold_cross(p, n, J=1.0, variant="unit_slope"):
    """Critical threshold of the cross screen; uses p rather than p - 1."""
    _check_p(p)
    _require_supercritical_n(n)
    J = _check_J(J, positive=True)
    _check_variant(variant)
    factor = 2.0 if variant == "table_matching" else 1.0
    rho = _critical_rho(p, n, factor * a_n(n) * J)
    lam = p * p * _p0(rho, n) * J
    return ThresholdReport(
        mode="cross", rho=rho, lam=lam, alpha=-math.expm1(-lam), kind="critical_point", variant=variant
    )


def critical_threshold_persistent(p, n, H2a=1.0, H2b=1.0):
    """Critical threshold of the two-treatment persistent screen.

    ``c_n = (a_n*sqrt(H2a*H2b))^(-2/(n-4))`` with the (p-1) scaling;
    with H2a = H2b = 1 (uniform scores) this coincides with the
    unit_slope auto threshold at J = 1.  Both treatments must share n.
    """
    _check_p(p)
    _require_supercritical_n(n)
    for H2 in (H2a, H2b):
        if H2 < 1:
            raise ValueError(f"H2 must be >= 1, got {H2}")
    rho = _critical_rho(p - 1, n, a_n(n) * math.sqrt(H2a * H2b))
    per_treatment = p * (p - 1) * _p0(rho, n)
    lam = per_treatment * per_treatment / p
    return ThresholdReport(
        mode="persistent", rho=rho, lam=lam, alpha=-math.expm1(-lam), kind="critical_point", variant="unit_slope"
    )


def critical_threshold_table(p, n_values=TABLE_N_DEFAULT, J=1.0, variant="table_matching"):
    """Critical auto thresholds over a family of sample counts.

    Returns a list of (n, rho_c) pairs, one per entry of ``n_values``.
    """
    return [(n, critical_threshold_auto(p, n, J, variant).rho) for n in n_values]


def fwer_threshold_auto(p, n, alpha, J=1.0, *, exact_mean=False):
    """Threshold controlling the auto-screen familywise error at alpha.

    Solves ``Lambda(rho) = p*(p-1)*P0(rho, n)*J = -2*ln(1 - alpha)``
    through the cap-probability inverse.  With ``exact_mean=True`` the
    exact mean formula replaces the asymptotic rate when converting the
    target Lambda into a P0 target (the difference is below solver
    tolerance whenever ``(p-1)*P0`` is small); the report then carries
    the exact-mean rate.
    """
    _check_p(p)
    _check_sample_count(n)
    alpha = _check_alpha(alpha)
    J = _check_J(J, positive=True)
    lam = -2.0 * math.log1p(-alpha)
    if exact_mean:
        if lam >= p:
            raise InfeasibleError(f"target mean {lam:.3g} is not attainable with p={p}")
        target_p0 = -math.expm1(math.log1p(-lam / p) / (p - 1)) / J
    else:
        target_p0 = lam / (p * (p - 1) * J)
    if target_p0 > 1.0:
        raise InfeasibleError(
            f"alpha={alpha} would require cap probability {target_p0:.3g} > 1"
        )
    rho = inverse_cap_probability(target_p0, n)
    if exact_mean:
        lam_at = expected_auto_exact(p, n, rho)
    else:
        lam_at = p * (p - 1) * _p0(rho, n) * J
    return ThresholdReport(
        mode="auto", rho=rho, lam=lam_at, alpha=-math.expm1(-lam_at / 2.0), kind="fwer_solved"
    )


def fwer_threshold_cross(p, n, alpha, J=1.0):
    """Threshold controlling the cross-screen familywise error at alpha.

    Solves ``p^2 * P0(rho, n) * J = -ln(1 - alpha)``.
    """
    _check_p(p)
    _check_sample_count(n)
    alpha = _check_alpha(alpha)
    J = _check_J(J, positive=True)
    lam = -math.log1p(-alpha)
    target_p0 = lam / (p * p * J)
    if target_p0 > 1.0:
        raise InfeasibleError(
            f"alpha={alpha} would require cap probability {target_p0:.3g} > 1"
        )
    rho = inverse_cap_probability(target_p0, n)
    lam_at = p * p * _p0(rho, n) * J
    return ThresholdReport(
        mode="cross", rho=rho, lam=lam_at, alpha=-math.expm1(-lam_at), kind="fwer_solved"
    )


def fwer_thresholds_persistent(p, n_list, alpha, J_list=None):
    """Per-treatment thresholds controlling the persistent-screen error.

    The joint rate is ``Lambda = prod_j E_j / p^(m-1)`` with
    per-treatment rates ``E_j = p*(p-1)*P0(rho_j, n_j)*J_j``.  The
    solver balances the treatments - it equalizes the E_j, which
    maximizes the detection rate at a fixed joint error level - and
    solves ``Lambda = -ln(1 - alpha)``, so each treatment gets
    ``E_j = (p^(m-1)*Lambda)^(1/m)``.  Unequal sample counts are
    handled: treatments with fewer samples receive higher thresholds.

    Returns a list of ThresholdReport, one per treatment, sharing the
    joint lam and alpha.
    """
    _check_p(p)
    n_list = [n for n in n_list]
    if len(n_list) < 2:
        raise ValueError("persistent screening needs at least two treatments")
    for n in n_list:
        _check_sample_count(n)
    alpha = _check_alpha(alpha)
    m = len(n_list)
    if J_list is None:
        J_list = [1.0] * m
    J_list = [_check_J(J, positive=True) for J in J_list]
    if len(J_list) != m:
        raise ValueError(f"expected {m} J values, got {len(J_list)}")
    lam = -math.log1p(-alpha)
    per_treatment = (p ** (m - 1) * lam) ** (1.0 / m)
    rhos = []
    for n, J in zip(n_list, J_list):
        target_p0 = per_treatment / (p * (p - 1) * J)
        if target_p0 > 1.0:
            raise InfeasibleError(
                f"alpha={alpha} would require cap probability {target_p0:.3g} > 1 at n={n}"
            )
        rhos.append(inverse_cap_probability(target_p0, n))
    rates = [p * (p - 1) * _p0(r, n) * J for r, n, J in zip(rhos, n_list, J_list)]
    lam_at = math.prod(rates) / p ** (m - 1)
    alpha_at = -math.expm1(-lam_at)
    return [
        ThresholdReport(mode="persistent", rho=r, lam=lam_at, alpha=alpha_at, kind="fwer_solved")
        for r in rhos
    ]


def _as_list(value, m, name):
    if isinstance(value, (tuple, list)):
        if len(value) != m:
            raise ValueError(f"expected {m} {name} values, got {len(value)}")
        return list(value)
    return [value] * m


def user_threshold(mode, p, n, rho, J=1.0):
    """Report for a threshold chosen by hand, with its rate and error level.

    Returns a ThresholdReport of kind ``user``; for persistent mode
    ``n``, ``rho`` (and optionally ``J``) are per-treatment sequences
    and the result is a list of reports sharing lam and alpha.
    """
    _check_p(p)
    if mode == "auto":
        lam = p * (p - 1) * _p0(_check_rho_open(rho), n) * _check_J(J)
        return ThresholdReport("auto", rho, lam, -math.expm1(-lam / 2.0), "user")
    if mode == "cross":
        lam = p * p * _p0(_check_rho_open(rho), n) * _check_J(J)
        return ThresholdReport("cross", rho, lam, -math.expm1(-lam), "user")
    if mode == "persistent":
        if not isinstance(n, (tuple, list)) or len(n) < 2:
            raise ValueError("persistent mode needs per-treatment sample counts")
        m = len(n)
        rhos = _as_list(rho, m, "rho")
        Js = _as_list(J, m, "J")
        rates = [
            p * (p - 1) * _p0(_check_rho_open(r), nj) * _check_J(Jj)
            for r, nj, Jj in zip(rhos, n, Js)
        ]
        lam = math.prod(rates) / p ** (m - 1)
        alpha = -math.expm1(-lam)
        return [ThresholdReport("persistent", r, lam, alpha, "user") for r in rhos]
    raise ValueError(f"unknown mode {mode!r}")


def implied_alpha(mode, p, n, rho, J=1.0):
    """Familywise error rate implied by a threshold - the solvers' inverse.

    For persistent mode ``n``, ``rho`` (and optionally ``J``) are
    per-treatment sequences.
    """
    reports = user_threshold(mode, p, n, rho, J)
    return reports[0].alpha if isinstance(reports, list) else reports.alpha
