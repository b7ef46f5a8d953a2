"""Detection power via the bias-corrected Fisher-Z approximation.

The Fisher-Z transform ``z = atanh(r)`` of a sample correlation is
approximately normal with mean ``atanh(rho) + rho/(2*(n-1))`` and
variance ``1/(n-3)``.  That yields the probability of a true
correlation rho exceeding a screening threshold, the smallest
correlation detectable with a target probability across several
treatments, and the threshold/detectability table over an (n, alpha)
grid for the persistent screen.
"""

import csv
import math
from dataclasses import dataclass

from scipy.special import ndtr

from .errors import InfeasibleError
from .phase import fwer_thresholds_persistent

__all__ = [
    "PowerCell",
    "fisher_z_moments",
    "detection_power",
    "min_detectable_correlation",
    "power_table",
    "write_power_table_csv",
]


@dataclass(frozen=True)
class PowerCell:
    """One grid entry: solved threshold rho and minimum detectable rho1."""

    n: int
    alpha: float
    rho: float
    rho1: float
    beta: float
    p: int

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")

    def to_dict(self):
        return {
            "n": self.n,
            "alpha": self.alpha,
            "rho": self.rho,
            "rho1": self.rho1,
            "beta": self.beta,
            "p": self.p,
        }


def _atanh(rho):
    # 0.5*(log1p(rho) - log1p(-rho)) keeps precision for rho near 1.
    return 0.5 * (math.log1p(rho) - math.log1p(-rho))


def fisher_z_moments(rho_true, n):
    """Mean and variance of the Fisher-Z transformed sample correlation.

    Parameters
    ----------
    rho_true : float
        Population correlation, ``|rho_true| < 1``.
    n : int
        Sample count, ``n >= 4`` (the variance ``1/(n-3)`` needs it).

    Returns
    -------
    (float, float)
        Bias-corrected mean ``atanh(rho) + rho/(2*(n-1))`` and variance
        ``1/(n-3)``; the variance does not depend on ``rho_true``.
    """
    rho_true = float(rho_true)
    if not abs(rho_true) < 1.0:
        raise ValueError(f"|rho_true| must be < 1, got {rho_true}")
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"n must be an integer, got {n!r}")
    if n < 4:
        raise ValueError(f"n must be >= 4, got {n}")
    mean = _atanh(rho_true) + rho_true / (2.0 * (n - 1))
    return mean, 1.0 / (n - 3)


def detection_power(rho_threshold, rho_true, n):
    """Probability that the sample correlation exceeds a threshold.

    ``Phi((mean(rho_true) - atanh(rho_threshold)) * sqrt(n-3))`` - the
    per-treatment chance that a variable pair with true correlation
    ``rho_true`` survives a screen at ``rho_threshold``.
    """
    rho_threshold = float(rho_threshold)
    if not 0.0 < rho_threshold < 1.0:
        raise ValueError(f"rho_threshold must lie in (0, 1), got {rho_threshold}")
    rho_true = float(rho_true)
    if not 0.0 <= rho_true < 1.0:
        raise ValueError(f"rho_true must lie in [0, 1), got {rho_true}")
    mean, variance = fisher_z_moments(rho_true, n)
    return float(ndtr((mean - _atanh(rho_threshold)) / math.sqrt(variance)))


def min_detectable_correlation(rho_thresholds, n, beta, *, per_treatment=False):
    """Smallest true correlation detected with probability >= beta.

    Parameters
    ----------
    rho_thresholds : float or sequence of float
        Screening threshold per treatment.
    n : int or sequence of int
        Sample count per treatment (broadcast against the thresholds).
    beta : float
        Target detection probability in (0, 1).
    per_treatment : bool
        By default beta constrains the *product* of the per-treatment
        detection probabilities - all screens must fire, as in
        persistent screening.  With ``per_treatment=True`` each single
        treatment must reach beta on its own, which yields a smaller
        rho1.

    Returns
    -------
    float
        rho1 solving the constraint with equality, located by bisection
        to 1e-8.
    """
    beta = float(beta)
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    thresholds = list(rho_thresholds) if isinstance(rho_thresholds, (tuple, list)) else [rho_thresholds]
    ns = list(n) if isinstance(n, (tuple, list)) else [n] * len(thresholds)
    if len(ns) != len(thresholds):
        if len(thresholds) == 1:
            thresholds = thresholds * len(ns)
        else:
            raise ValueError(f"{len(thresholds)} thresholds for {len(ns)} sample counts")

    def attained(rho1):
        powers = [detection_power(t, rho1, nj) for t, nj in zip(thresholds, ns)]
        return min(powers) if per_treatment else math.prod(powers)

    hi = 1.0 - 1e-12
    if attained(hi) < beta:
        raise InfeasibleError(f"no correlation below 1 reaches detection probability {beta}")
    if attained(0.0) >= beta:
        return 0.0
    lo = 0.0
    while hi - lo > 1e-8:
        mid = 0.5 * (lo + hi)
        if attained(mid) >= beta:
            hi = mid
        else:
            lo = mid
    return hi


def power_table(p, n_list, alpha_list, beta, *, J=1.0, treatments=2, per_treatment=False):
    """Threshold/detectability grid for equal-treatment persistent screens.

    For every (n, alpha) pair: solve the balanced persistent threshold
    at level alpha with ``treatments`` identical treatments, then the
    minimum detectable correlation at level beta.  Cells are emitted in
    row-major (n outer, alpha inner) order.
    """
    cells = []
    for n in n_list:
        for alpha in alpha_list:
            reports = fwer_thresholds_persistent(p, [n] * treatments, alpha, [J] * treatments)
            rho = reports[0].rho
            rho1 = min_detectable_correlation(
                [r.rho for r in reports], [n] * treatments, beta, per_treatment=per_treatment
            )
            cells.append(PowerCell(n=n, alpha=alpha, rho=rho, rho1=rho1, beta=beta, p=p))
    return cells


def write_power_table_csv(cells, path):
    """Write PowerCells as CSV with columns n, alpha, rho, rho1, beta, p."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "alpha", "rho", "rho1", "beta", "p"])
        for cell in cells:
            writer.writerow(
                [cell.n, f"{cell.alpha:.17g}", f"{cell.rho:.17g}", f"{cell.rho1:.17g}", f"{cell.beta:.17g}", cell.p]
            )
