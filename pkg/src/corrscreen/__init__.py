"""Correlation screening for many variables observed on few samples.

The package turns sample matrices into unit-norm U-scores, screens
auto-, cross-, and persistent correlations above a threshold, and ties
the threshold to theory: the spherical-cap probability of a high
correlation under the null, the critical point where discoveries start
to proliferate, familywise-error solvers, and Fisher-Z power planning.
A Monte Carlo harness checks the theory empirically, and the report
module summarises multi-treatment runs as inclusion graphs and
persistent subnetworks.
"""

__version__ = "0.1.0"

from . import ingest, montecarlo, phase, power, report, screen, spherecap, uscore
from .errors import InfeasibleError
from .ingest import DataMatrix, TreatmentSet, load_matrix, load_treatments
from .montecarlo import (
    CovarianceSpec,
    SimReport,
    SimSpec,
    empirical_fwer,
    operating_points,
    phase_curve,
    poisson_check,
)
from .phase import (
    ThresholdReport,
    critical_threshold_auto,
    critical_threshold_cross,
    critical_threshold_persistent,
    critical_threshold_table,
    expected_auto_approx,
    expected_auto_exact,
    fwer_threshold_auto,
    fwer_threshold_cross,
    fwer_thresholds_persistent,
    implied_alpha,
    user_threshold,
)
from .power import (
    PowerCell,
    detection_power,
    fisher_z_moments,
    min_detectable_correlation,
    power_table,
)
from .report import InclusionGraph, SubnetworkResult, inclusion_graph, persistent_subnetwork
from .screen import ScreenResult, auto_screen, cross_screen, persistent_screen
from .spherecap import a_n, cap_probability, inverse_cap_probability
from .uscore import HelmertBasis, UScoreMatrix, compute_uscores, helmert_basis

__all__ = [
    "__version__",
    "InfeasibleError",
    "DataMatrix",
    "TreatmentSet",
    "load_matrix",
    "load_treatments",
    "HelmertBasis",
    "UScoreMatrix",
    "compute_uscores",
    "helmert_basis",
    "a_n",
    "cap_probability",
    "inverse_cap_probability",
    "ScreenResult",
    "auto_screen",
    "cross_screen",
    "persistent_screen",
    "ThresholdReport",
    "critical_threshold_auto",
    "critical_threshold_cross",
    "critical_threshold_persistent",
    "critical_threshold_table",
    "expected_auto_approx",
    "expected_auto_exact",
    "fwer_threshold_auto",
    "fwer_threshold_cross",
    "fwer_thresholds_persistent",
    "implied_alpha",
    "user_threshold",
    "PowerCell",
    "detection_power",
    "fisher_z_moments",
    "min_detectable_correlation",
    "power_table",
    "CovarianceSpec",
    "SimReport",
    "SimSpec",
    "empirical_fwer",
    "operating_points",
    "phase_curve",
    "poisson_check",
    "InclusionGraph",
    "SubnetworkResult",
    "inclusion_graph",
    "persistent_subnetwork",
    "ingest",
    "montecarlo",
    "phase",
    "power",
    "report",
    "screen",
    "spherecap",
    "uscore",
]
