"""Direct integral route: ordered-simplex quadrature of kernel moments."""

import itertools

import pytest

import oracles
from wellpert.integrals import (
    DEFAULT_DOMAINS,
    KERNEL_DEGREES,
    MAX_INTEGRAL_ORDER,
    PREFACTOR_DENOMINATORS,
    IntegrationDomain,
    _kernel_raw,
    _kernel_symmetrized,
    default_domain,
    energy_series_from_w,
    w_coefficient,
    w_coefficient_with_error,
    w_coefficients,
)
from wellpert.models import ModelSpec
from wellpert.numeric import NumericalError


class TestDomain:
    def test_constants(self):
        assert MAX_INTEGRAL_ORDER == 4
        assert PREFACTOR_DENOMINATORS == (2, 4, 48, 96)
        assert KERNEL_DEGREES == (0, 1, 2, 3)

    def test_defaults_exist(self):
        for model_id in ("square", "exponential", "poschl_teller"):
            dom = default_domain(model_id)
            assert dom.cutoff > 0

    def test_pointlike_has_no_domain(self):
        with pytest.raises(ValueError, match="integrated analytically"):
            default_domain("delta")

    def test_half_edge_validation(self):
        with pytest.raises(ValueError):
            IntegrationDomain(kind="finite_box", cutoff=1.0, half_edges=(0.5, 0.4, 1.0))
        with pytest.raises(ValueError):
            IntegrationDomain(kind="finite_box", cutoff=1.0, half_edges=(0.5,))

    def test_axis_edges_mirror(self):
        dom = IntegrationDomain(kind="exponential_tail", cutoff=2.0, half_edges=(1.0, 2.0))
        assert dom.axis_edges() == [-2.0, -1.0, 0.0, 1.0, 2.0]

    def test_tail_bounds_below_target(self):
        # every default domain keeps the truncated mass below 1e-12
        # for every order and kernel degree that order uses
        for model_id in ("square", "exponential", "poschl_teller"):
            dom = default_domain(model_id)
            for j in range(1, 5):
                bound = dom.tail_bound(j, KERNEL_DEGREES[j - 1])
                assert bound < 1e-12, (model_id, j, bound)

    def test_finite_box_has_no_tail(self):
        assert default_domain("square").tail_bound(4, 3) == 0.0


class TestKernels:
    def test_first_order_is_unity(self):
        assert _kernel_symmetrized(1, (0.3,)) == 1.0

    def test_second_order_gap(self):
        assert _kernel_symmetrized(2, (0.2, 0.7)) == pytest.approx(2 * 0.5)

    def test_third_order_matches_permutation_sum(self):
        pts = (0.1, 0.45, 0.8)
        brute = sum(
            _kernel_raw(3, tuple(pts[i] for i in perm))
            for perm in itertools.permutations(range(3))
        )
        assert _kernel_symmetrized(3, pts) == pytest.approx(brute, rel=1e-13)

    def test_fourth_order_matches_permutation_sum(self):
        pts = (0.05, 0.3, 0.55, 0.9)
        brute = sum(
            _kernel_raw(4, tuple(pts[i] for i in perm))
            for perm in itertools.permutations(range(4))
        )
        assert _kernel_symmetrized(4, pts) == pytest.approx(brute, rel=1e-13)

    def test_raw_translation_invariance(self):
        pts = (0.1, 0.4, 0.6, 0.9)
        shifted = tuple(p + 5.0 for p in pts)
        assert _kernel_raw(4, pts) == pytest.approx(_kernel_raw(4, shifted), rel=1e-12)


class TestWCoefficients:
    def test_square_exact_rationals(self):
        w = w_coefficients(ModelSpec(id="square"))
        for value, expected in zip(w.values, oracles.SQUARE_W):
            assert abs(value - float(expected)) < 1e-12

    def test_pointlike_analytic(self):
        w = w_coefficients(ModelSpec(id="delta"))
        assert w.values == (-0.5, 0.0, 0.0, 0.0)
        assert w.errors == (0.0, 0.0, 0.0, 0.0)

    def test_error_estimates_reported(self):
        value, estimate = w_coefficient_with_error(ModelSpec(id="square"), 3)
        assert abs(value - float(oracles.SQUARE_W[2])) < 1e-12
        assert 0.0 <= estimate < 1e-10

    def test_unconverged_quadrature_raises(self):
        with pytest.raises(NumericalError, match="quadrature not converged"):
            w_coefficient(ModelSpec(id="square"), 4, tolerance=1e-30)

    def test_per_simplex_decomposition_agrees(self):
        for j in (2, 3):
            sym = w_coefficient(ModelSpec(id="square"), j)
            per = w_coefficient(ModelSpec(id="square"), j, decomposition="per_simplex")
            assert abs(sym - per) < 1e-12

    def test_order_validation(self):
        with pytest.raises(ValueError):
            w_coefficient(ModelSpec(id="square"), 5)
        with pytest.raises(ValueError):
            w_coefficient(ModelSpec(id="square"), 0)


class TestEnergyFromW:
    def test_square_energy_series(self):
        es = energy_series_from_w(w_coefficients(ModelSpec(id="square")))
        assert es.series.coeffs[0] == 0.0 and es.series.coeffs[1] == 0.0
        for k, expected in zip(range(2, 6), oracles.SQUARE_COEFFS):
            assert abs(es.series.coeffs[k] - float(expected)) < 1e-11, k

    def test_mapping_formulas(self):
        from wellpert.integrals import WCoefficients

        w = WCoefficients(values=(-1.0, 2.0, 3.0, 5.0), errors=(0.0,) * 4, model_id="square")
        es = energy_series_from_w(w)
        w1, w2, w3, w4 = w.values
        assert es.series.coeffs[2] == -(w1 * w1)
        assert es.series.coeffs[3] == -2 * w1 * w2
        assert es.series.coeffs[4] == -(w2 * w2 + 2 * w1 * w3)
        assert es.series.coeffs[5] == -2 * (w1 * w4 + w2 * w3)

    def test_truncated_w_gives_truncated_series(self):
        from wellpert.integrals import WCoefficients

        w = WCoefficients(values=(-1.0, 0.5), errors=(0.0, 0.0), model_id="square")
        assert energy_series_from_w(w).order == 3

    def test_rejects_vanishing_first_moment(self):
        from wellpert.integrals import WCoefficients

        w = WCoefficients(values=(0.0, 1.0), errors=(0.0, 0.0), model_id="square")
        with pytest.raises(ValueError, match="first coefficient must be nonzero"):
            energy_series_from_w(w)


@pytest.mark.slow
class TestCrossValidation:
    """Quadrature values against the exact rational series route."""

    def test_poschl_teller(self):
        w = w_coefficients(ModelSpec(id="poschl_teller"))
        for value, expected in zip(w.values, oracles.POSCHL_TELLER_W):
            assert abs(value - float(expected)) < 1e-10

    def test_exponential(self):
        w = w_coefficients(ModelSpec(id="exponential"))
        for value, expected in zip(w.values, oracles.EXPONENTIAL_W):
            assert abs(value - float(expected)) < 1e-8

    def test_cutoff_doubling_shifts_below_tail_budget(self):
        # doubling the tail cutoff must move no order by more than 1e-11
        base = DEFAULT_DOMAINS["poschl_teller"]
        doubled = IntegrationDomain(
            kind=base.kind,
            cutoff=2.0 * base.cutoff,
            decay=base.decay,
            half_edges=tuple(base.half_edges) + (2.0 * base.cutoff,),
            gl_order=base.gl_order,
        )
        for j in (1, 2, 3, 4):
            a = w_coefficient(ModelSpec(id="poschl_teller"), j)
            b = w_coefficient(ModelSpec(id="poschl_teller"), j, dom=doubled)
            assert abs(a - b) < 1e-11, j
