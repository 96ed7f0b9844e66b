"""Perturbation series for bound states of attractive short-range wells.

The package computes the small-strength expansion of the ground-state
energy of one-dimensional Schroedinger problems with an attractive
profile, by three independent routes that cross-validate each other:

* exact truncated-series arithmetic driven by each model's quantization
  condition (`wellpert.models`),
* direct multidimensional integrals of profile products against
  piecewise-polynomial kernels (`wellpert.integrals`),
* Rayleigh-Schroedinger perturbation theory in a periodic box with
  box-size extrapolation (`wellpert.periodic_box`).

`wellpert.summation` resums the (typically finite-radius) series with
Pade-family approximants, and `wellpert.cli` exposes everything as a
command-line tool emitting JSON/CSV plus optional figures.
"""

from .numeric import Bracket, NumericalError, gauss_legendre, solve_bracketed
from .series import EnergySeries, TruncatedSeries, kernel_series, newton_implicit_series
from .models import (
    MODEL_IDS,
    ModelSpec,
    ScalingMap,
    branch_point,
    exact_eigenvalue,
    implicit_energy_series,
    matrix_element,
    potential,
    quantization_form,
)
from .integrals import (
    IntegrationDomain,
    WCoefficients,
    default_domain,
    energy_series_from_w,
    w_coefficient,
    w_coefficients,
)
from .periodic_box import (
    BlowupRow,
    PlaneWaveBasis,
    RsptResult,
    blowup_report,
    build_hamiltonian,
    delta_box_series,
    ground_energy_diag,
    rspt_coefficients,
    rspt_extrapolated,
)
from .summation import (
    PadeApproximant,
    QuadraticPade,
    RadiusEstimate,
    TwoPointPade,
    pade,
    quadratic_pade,
    radius_estimate,
    two_point_pade,
)

__version__ = "0.1.0"

__all__ = [
    "Bracket",
    "NumericalError",
    "gauss_legendre",
    "solve_bracketed",
    "EnergySeries",
    "TruncatedSeries",
    "kernel_series",
    "newton_implicit_series",
    "MODEL_IDS",
    "ModelSpec",
    "ScalingMap",
    "branch_point",
    "exact_eigenvalue",
    "implicit_energy_series",
    "matrix_element",
    "potential",
    "quantization_form",
    "IntegrationDomain",
    "WCoefficients",
    "default_domain",
    "energy_series_from_w",
    "w_coefficient",
    "w_coefficients",
    "BlowupRow",
    "PlaneWaveBasis",
    "RsptResult",
    "blowup_report",
    "build_hamiltonian",
    "delta_box_series",
    "ground_energy_diag",
    "rspt_coefficients",
    "rspt_extrapolated",
    "PadeApproximant",
    "QuadraticPade",
    "RadiusEstimate",
    "TwoPointPade",
    "pade",
    "quadratic_pade",
    "radius_estimate",
    "two_point_pade",
    "__version__",
]
