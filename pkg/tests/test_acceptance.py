"""Release gate: one test per shipped guarantee, each with its runtime budget.

Run with ``pytest -v tests/test_acceptance.py`` to get one pass/fail line
per guarantee.  Policy: a guarantee the implementation cannot honestly
meet is recorded as a strict expected failure with the measured numbers
in the reason string — never silently loosened.
"""

import math
import random
import time
from fractions import Fraction

import pytest

import oracles
from wellpert.integrals import energy_series_from_w, w_coefficients
from wellpert.models import (
    ModelSpec,
    beta_coefficient,
    beta_extrapolated_coefficient,
    beta_series_numeric,
    branch_point,
    delta_periodic_energy,
    exact_eigenvalue,
    implicit_energy_series,
)
from wellpert.periodic_box import (
    PlaneWaveBasis,
    delta_box_series,
    ground_energy_diag,
    rspt_coefficients,
)
from wellpert.series import TruncatedSeries, kernel_value
from wellpert.summation import pade, quadratic_pade, radius_estimate

F = Fraction

pytestmark = pytest.mark.acceptance


def _fit_slope(xs, ys):
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum(
        (x - mx) ** 2 for x in xs
    )


def test_criterion_01_exact_rational_series():
    start = time.perf_counter()

    pt = implicit_energy_series(ModelSpec(id="poschl_teller"), 5).series.coeffs
    assert pt[2:] == (F(-1), F(2), F(-5), F(14))

    sq = implicit_energy_series(ModelSpec(id="square"), 6).series.coeffs
    assert sq[2:] == (F(-1), F(4, 3), F(-92, 45), F(1072, 315), F(-84752, 14175))

    ex = implicit_energy_series(ModelSpec(id="exponential"), 6).series.coeffs
    assert ex[2:] == (F(-1), F(3), F(-143, 12), F(3887, 72), F(-71303, 270))

    rescaled_constants = (F(-1), F(-1, 12), F(-1, 180), F(-1, 3780), F(-1, 226800))
    box = delta_box_series(F(10), 5).series.coeffs
    for j, constant in enumerate(rescaled_constants, start=1):
        assert box[j] * F(10) ** (2 - j) == constant, j

    assert time.perf_counter() - start < 1.0


@pytest.mark.slow
def test_criterion_02_quadrature_cross_validation():
    start = time.perf_counter()

    exact_sq = implicit_energy_series(ModelSpec(id="square"), 5).series.to_float()
    from_w = energy_series_from_w(w_coefficients(ModelSpec(id="square"), jmax=4))
    for k in range(2, 6):
        assert abs(from_w.series.coeffs[k] - exact_sq.coeffs[k]) < 1e-10, k

    exact_ex = implicit_energy_series(ModelSpec(id="exponential"), 5).series.to_float()
    from_w = energy_series_from_w(w_coefficients(ModelSpec(id="exponential"), jmax=4))
    for k in range(2, 6):
        assert abs(from_w.series.coeffs[k] - exact_ex.coeffs[k]) < 1e-8, k

    assert time.perf_counter() - start < 60.0


def test_criterion_03_branch_points():
    start = time.perf_counter()

    eps_c, lam_c = branch_point(ModelSpec(id="square"))
    assert abs(eps_c - (-1.0)) < 1e-9
    assert abs(lam_c - (-0.4392288398)) < 1e-9

    _, lam_c = branch_point(ModelSpec(id="poschl_teller"))
    assert abs(lam_c - (-0.25)) < 1e-10

    assert time.perf_counter() - start < 1.0


@pytest.mark.xfail(
    strict=True,
    reason=(
        "stated 1e-4 is unattainable with Richardson over the fixed ladder "
        "beta in {1, 1/2, 1/4, 1/8}: measured extrapolation errors are "
        "2.974e-3 for the order-2 coefficient and 1.231e-2 for order-3.  "
        "The regulated coefficients contain terms nonpolynomial in beta "
        "(beta*log-type corrections from the threshold), so polynomial "
        "extrapolation on four nodes stalls at the few-1e-3 level.  See the "
        "decision ledger for the full error table."
    ),
)
def test_criterion_04a_regulator_extrapolation_stated_tolerance():
    start = time.perf_counter()
    err2 = abs(beta_extrapolated_coefficient(2, betas=(1.0, 0.5, 0.25, 0.125)) - (-1.0))
    err3 = abs(beta_extrapolated_coefficient(3, betas=(1.0, 0.5, 0.25, 0.125)) - (4.0 / 3.0))
    assert time.perf_counter() - start < 5.0
    assert err2 < 1e-4 and err3 < 1e-4, (err2, err3)


def test_criterion_04b_regulator_series_matches_closed_forms():
    start = time.perf_counter()
    numeric = beta_series_numeric(1.0, 3).series.coeffs
    for j in range(0, 4):
        assert abs(numeric[j] - beta_coefficient(j, 1.0)) < 1e-10, j
    assert time.perf_counter() - start < 5.0


@pytest.mark.slow
def test_criterion_05_box_homogeneity_and_rspt_tails():
    start = time.perf_counter()

    # exact homogeneity: coefficient_j(L) * L**(2-j) identical across boxes
    reference = delta_box_series(F(10), 5).series.coeffs
    for L in (F(5), F(10), F(20)):
        coeffs = delta_box_series(L, 5).series.coeffs
        for j in range(1, 6):
            assert coeffs[j] * L ** (2 - j) == reference[j] * F(10) ** (2 - j), (L, j)

    # sum-over-states truncation tail ~ 1/n_max
    L = 10.0
    model = ModelSpec(id="delta", L=L)
    exact = [float(c) for c in delta_box_series(F(10), 3).series.coeffs]
    sizes = (100, 200, 400, 800)
    per_size = {
        n: rspt_coefficients(model, PlaneWaveBasis(L=L, n_max=n), 3).coefficients
        for n in sizes
    }
    for j in (2, 3):
        errors = [abs(per_size[n][j - 1] - exact[j]) for n in sizes]
        slope = _fit_slope([math.log(n) for n in sizes], [math.log(e) for e in errors])
        assert abs(slope - (-1.0)) < 0.1, (j, slope)

    assert time.perf_counter() - start < 30.0


def test_criterion_06_exponential_error_law():
    start = time.perf_counter()

    lam = 2.0
    limit = -lam * lam / 4.0
    k = math.sqrt(-limit)
    lengths = [6.0, 8.0, 10.0, 12.0]
    logs = [math.log(abs(delta_periodic_energy(lam, L) - limit)) for L in lengths]
    slope = _fit_slope(lengths, logs)
    assert abs(slope - (-k)) < 0.01 * k, slope

    for L in lengths:
        periodic = delta_periodic_energy(lam, L, boundary="periodic")
        neumann = delta_periodic_energy(lam, L, boundary="neumann")
        assert abs(periodic - neumann) < 1e-12, L

    assert time.perf_counter() - start < 1.0


def test_criterion_07_summation_quality():
    start = time.perf_counter()

    # the algebraic approximant closes the secant-well curve exactly
    s = implicit_energy_series(ModelSpec(id="poschl_teller"), 4).series
    qp = quadratic_pade(s, (2, 1, 0))
    scale = qp.r[0]
    assert tuple(c / scale for c in qp.p) == (F(0), F(0), F(1))
    assert tuple(c / scale for c in qp.q) == (F(1), F(2))
    assert tuple(c / scale for c in qp.r) == (F(1),)

    # one-step rational summation of the steepest series stays useful
    # well past the convergence radius
    series = implicit_energy_series(ModelSpec(id="exponential"), 6).series.to_float()
    approx = pade(series, 3, 3)
    for lam, tol in zip((0.25, 0.5, 0.75), oracles.PADE33_EXPONENTIAL_TOL):
        exact = exact_eigenvalue(ModelSpec(id="exponential", lam=lam))
        assert abs(approx.evaluate(lam) - exact) < tol, lam

    assert time.perf_counter() - start < 5.0


def test_criterion_08_radius_estimates():
    start = time.perf_counter()

    # 30 nonzero coefficients: orders 2..31
    pt = implicit_energy_series(ModelSpec(id="poschl_teller"), 31).series
    est = radius_estimate(pt)
    assert abs(est.radius - 0.25) < 1e-4

    sq = implicit_energy_series(ModelSpec(id="square"), 31).series
    est = radius_estimate(sq)
    assert abs(est.radius - 0.43923) < 1e-3

    assert time.perf_counter() - start < 5.0


# -- criterion 9: the invariant suites, representative timed versions ---------


def test_criterion_09a_series_ring_axioms():
    start = time.perf_counter()
    rng = random.Random(20260819)

    def draw():
        return TruncatedSeries(
            [F(rng.randint(-20, 20), rng.randint(1, 12)) for _ in range(6)],
            variable="x",
        )

    for _ in range(25):
        a, b, c = draw(), draw(), draw()
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if b.coeffs[0] != 0:
            assert (a * b) / b == a
    assert time.perf_counter() - start < 30.0


def test_criterion_09b_kernel_identities():
    start = time.perf_counter()
    for i in range(-40, 41):
        z = i / 20.0
        c = kernel_value("cos_sqrt", z)
        s = kernel_value("sinc_sqrt", z)
        ch = kernel_value("cosh_sqrt", z)
        sh = kernel_value("sinhc_sqrt", z)
        assert abs(c * c + z * s * s - 1.0) < 1e-12, z
        assert abs(ch * ch - z * sh * sh - 1.0) < 1e-11, z
    assert time.perf_counter() - start < 30.0


def test_criterion_09c_pade_reexpansion():
    start = time.perf_counter()
    for model_id in ("square", "exponential"):
        s = implicit_energy_series(ModelSpec(id=model_id), 6).series
        assert pade(s, 3, 3).expansion(6) == s, model_id
    assert time.perf_counter() - start < 30.0


def test_criterion_09d_rspt_small_strength_slopes():
    start = time.perf_counter()
    L, n_max = 10.0, 120
    model = ModelSpec(id="delta", L=L)
    basis = PlaneWaveBasis(L=L, n_max=n_max)
    for order in (2, 3):
        coeffs = rspt_coefficients(model, basis, order).coefficients
        deltas = []
        for lam in (0.05, 0.1):
            diag = ground_energy_diag(model, basis, lam)
            truncated = sum(c * lam ** (j + 1) for j, c in enumerate(coeffs))
            deltas.append(abs(diag - truncated))
        slope = math.log(deltas[1] / deltas[0]) / math.log(2.0)
        assert slope >= order + 0.9, (order, slope)
    assert time.perf_counter() - start < 30.0


def test_criterion_09e_variational_monotonicity():
    start = time.perf_counter()
    model = ModelSpec(id="delta", L=10.0)
    for lam in (0.5, 2.0):
        energies = [
            ground_energy_diag(model, PlaneWaveBasis(L=10.0, n_max=n), lam)
            for n in (10, 20, 40)
        ]
        assert energies[0] >= energies[1] - 1e-12 >= energies[2] - 2e-12, lam
    assert time.perf_counter() - start < 30.0
