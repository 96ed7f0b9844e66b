"""Structural invariants checked over generated inputs.

Five families: the exact-series ring axioms, kernel function identities,
approximant consistency (re-expansion and residuals), perturbation-order
scaling of the box route, and variational monotonicity of nested bases.
"""

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

settings.register_profile("suite", max_examples=50, deadline=None)
settings.load_profile("suite")

import oracles
from wellpert.integrals import _kernel_raw, _kernel_symmetrized
from wellpert.models import ModelSpec, exact_eigenvalue, implicit_energy_series
from wellpert.numeric import NumericalError
from wellpert.periodic_box import PlaneWaveBasis, ground_energy_diag, rspt_coefficients
from wellpert.series import TruncatedSeries, compose, kernel_value, sqrt1p_series
from wellpert.summation import pade, quadratic_pade, radius_estimate

F = Fraction

coefficient = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def series_of(order: int, variable: str = "x"):
    return st.lists(coefficient, min_size=order + 1, max_size=order + 1).map(
        lambda cs: TruncatedSeries(cs, variable=variable)
    )


class TestRingAxioms:
    @given(series_of(5), series_of(5))
    def test_addition_commutes(self, a, b):
        assert a + b == b + a

    @given(series_of(5), series_of(5))
    def test_multiplication_commutes(self, a, b):
        assert a * b == b * a

    @given(series_of(4), series_of(4), series_of(4))
    def test_addition_associates(self, a, b, c):
        assert (a + b) + c == a + (b + c)

    @given(series_of(4), series_of(4), series_of(4))
    def test_multiplication_associates(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @given(series_of(4), series_of(4), series_of(4))
    def test_distributive(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(series_of(5))
    def test_additive_inverse(self, a):
        assert a - a == TruncatedSeries.zero(5)

    @given(series_of(5))
    def test_multiplicative_identity(self, a):
        one = TruncatedSeries.constant(F(1), 5)
        assert a * one == a

    @given(series_of(5), series_of(5))
    def test_division_inverts_multiplication(self, a, b):
        assume(b.coeffs[0] != 0)
        assert (a * b) / b == a

    @given(series_of(4))
    def test_power_is_repeated_product(self, a):
        assert a ** 3 == a * a * a

    @given(series_of(5), series_of(5))
    def test_derivative_is_linear(self, a, b):
        assert (a + b).derivative() == a.derivative() + b.derivative()

    @given(series_of(5), series_of(5))
    def test_leibniz_rule(self, a, b):
        lhs = (a * b).derivative()
        rhs = a.derivative() * b.truncate(4) + a.truncate(4) * b.derivative()
        assert lhs == rhs

    @given(series_of(4), series_of(4), st.fractions(min_value=-5, max_value=5, max_denominator=6))
    def test_evaluation_matches_power_sum(self, a, b, x):
        # Horner evaluation agrees with the literal power sum; addition
        # evaluates termwise.  (The truncated product is NOT compatible
        # with evaluation: it drops powers above the cutoff by design.)
        assert a.evaluate(x) == sum(c * x ** k for k, c in enumerate(a.coeffs))
        assert (a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x)


class TestComposition:
    nilpotent = st.lists(coefficient, min_size=4, max_size=4).map(
        lambda cs: TruncatedSeries([F(0)] + cs, variable="x")
    )

    @given(series_of(4), series_of(4), nilpotent)
    def test_multiplicative(self, f, g, h):
        assert compose(f * g, h) == compose(f, h) * compose(g, h)

    @given(series_of(4), series_of(4), nilpotent)
    def test_additive(self, f, g, h):
        assert compose(f + g, h) == compose(f, h) + compose(g, h)

    @given(nilpotent)
    def test_sqrt1p_squares_back(self, s):
        r = sqrt1p_series(s)
        assert r * r == 1 + s


class TestKernelIdentities:
    z_values = st.floats(min_value=-2.0, max_value=2.0,
                         allow_nan=False, allow_infinity=False)

    @given(z_values)
    def test_pythagorean(self, z):
        c = kernel_value("cos_sqrt", z)
        s = kernel_value("sinc_sqrt", z)
        assert c * c + z * s * s == pytest.approx(1.0, abs=1e-12)

    @given(z_values)
    def test_hyperbolic(self, z):
        c = kernel_value("cosh_sqrt", z)
        s = kernel_value("sinhc_sqrt", z)
        assert c * c - z * s * s == pytest.approx(1.0, abs=1e-11)

    @given(st.floats(min_value=-2.0, max_value=2.0, allow_nan=False))
    def test_tangent_form(self, z):
        assume(abs(kernel_value("cos_sqrt", z)) > 0.1)
        t = kernel_value("tan_sq_sqrt", z)
        c = kernel_value("cos_sqrt", z)
        s = kernel_value("sinc_sqrt", z)
        assert t * c * c == pytest.approx(z * s * s, abs=1e-12)

    @given(st.floats(min_value=0.01, max_value=4.0, allow_nan=False))
    def test_sqrtcoth_reflection(self, z):
        # sqrt(z) coth(sqrt z) * tanh(sqrt z) = sqrt(z)
        x = math.sqrt(z)
        assert kernel_value("sqrtcoth", z) * math.tanh(x) == pytest.approx(x, rel=1e-13)

    @given(st.floats(min_value=-0.9, max_value=3.0, allow_nan=False))
    def test_sqrt1p_squares(self, z):
        v = kernel_value("sqrt1p", z)
        assert v * v == pytest.approx(1.0 + z, rel=1e-14)


class TestSimplexKernels:
    ordered3 = st.lists(
        st.floats(min_value=0.01, max_value=0.99, allow_nan=False),
        min_size=3, max_size=3, unique=True,
    ).map(sorted)
    ordered4 = st.lists(
        st.floats(min_value=0.01, max_value=0.99, allow_nan=False),
        min_size=4, max_size=4, unique=True,
    ).map(sorted)

    @given(ordered3)
    def test_third_order_symmetrization(self, pts):
        pts = tuple(pts)
        brute = sum(
            _kernel_raw(3, tuple(pts[i] for i in perm))
            for perm in itertools.permutations(range(3))
        )
        assert _kernel_symmetrized(3, pts) == pytest.approx(brute, rel=1e-10, abs=1e-12)

    @given(ordered4)
    def test_fourth_order_symmetrization(self, pts):
        pts = tuple(pts)
        brute = sum(
            _kernel_raw(4, tuple(pts[i] for i in perm))
            for perm in itertools.permutations(range(4))
        )
        assert _kernel_symmetrized(4, pts) == pytest.approx(brute, rel=1e-10, abs=1e-12)


class TestApproximantConsistency:
    @given(series_of(6, variable="lambda"),
           st.integers(min_value=0, max_value=3))
    @settings(max_examples=60)
    def test_pade_reexpansion(self, s, l_deg):
        m_deg = 6 - l_deg
        try:
            approx = pade(s, l_deg, m_deg)
        except NumericalError:
            assume(False)
        expanded = approx.expansion(6)
        if approx.reduced:
            # a reduced table entry matches through l + m_reduced only
            matched = l_deg + approx.denominator_degree
            assert expanded.coeffs[: matched + 1] == s.coeffs[: matched + 1]
        else:
            assert expanded == s

    @given(series_of(6, variable="lambda"))
    @settings(max_examples=60)
    def test_quadratic_residual_vanishes(self, s):
        try:
            qp = quadratic_pade(s, (2, 2, 1))
        except NumericalError:
            assume(False)
        n = s.order
        pad_to = lambda t: TruncatedSeries(
            tuple(t) + (F(0),) * (n - len(t) + 1), variable=s.variable)
        residual = pad_to(qp.p) + pad_to(qp.q) * s + pad_to(qp.r) * (s * s)
        assert all(c == 0 for c in residual.coeffs[: 2 + 2 + 1 + 2])

    @given(st.floats(min_value=0.05, max_value=3.0, allow_nan=False),
           st.sampled_from([1, -1]),
           st.floats(min_value=0.5, max_value=2.0, allow_nan=False))
    @settings(max_examples=40)
    def test_radius_recovers_geometric_tail(self, radius, sign, amplitude):
        coeffs = [0.0, 0.0] + [amplitude * (sign / radius) ** j for j in range(14)]
        s = TruncatedSeries(coeffs, variable="lambda")
        est = radius_estimate(s)
        assert est.radius == pytest.approx(radius, rel=1e-6)
        assert est.singularity_sign == sign


class TestCatalanStructure:
    def test_hyperbolic_secant_coefficients_are_signed_catalan(self):
        # the expansion starts at order 2; the coefficient of
        # strength**(n+1) is (-1)**n times the n-th Catalan number
        es = implicit_energy_series(ModelSpec(id="poschl_teller"), 21)
        assert es.series.coeffs[0] == 0 and es.series.coeffs[1] == 0
        for n in range(1, 21):
            catalan = F(math.comb(2 * n, n), n + 1)
            assert es.series.coeffs[n + 1] == (-1) ** n * catalan, n

    def test_ratio_recurrence(self):
        es = implicit_energy_series(ModelSpec(id="poschl_teller"), 12)
        c = es.series.coeffs
        for n in range(1, 11):
            # consecutive Catalan ratio with alternating sign: -2(2n+1)/(n+2)
            assert c[n + 2] * F(n + 2) == c[n + 1] * F(-2 * (2 * n + 1)), n


class TestPerturbationOrderScaling:
    @pytest.mark.parametrize("order", [2, 3])
    def test_box_route_truncation_scales(self, order):
        # the residual against diagonalization in the same basis must
        # shrink like strength**(order+1)
        L, n_max = 10.0, 120
        model = ModelSpec(id="delta", L=L)
        basis = PlaneWaveBasis(L=L, n_max=n_max)
        coeffs = rspt_coefficients(model, basis, order).coefficients
        deltas = []
        for lam in (0.05, 0.1):
            diag = ground_energy_diag(model, basis, lam)
            truncated = sum(c * lam ** (j + 1) for j, c in enumerate(coeffs))
            deltas.append(abs(diag - truncated))
        slope = math.log(deltas[1] / deltas[0]) / math.log(2.0)
        assert slope >= order + 0.9, (order, slope, deltas)

    @pytest.mark.parametrize("model_id", ["poschl_teller", "square", "exponential"])
    def test_series_remainder_scales_past_truncation(self, model_id):
        s = implicit_energy_series(ModelSpec(id=model_id), 6).series.to_float()
        d1 = abs(exact_eigenvalue(ModelSpec(id=model_id, lam=0.05)) - s.evaluate(0.05))
        d2 = abs(exact_eigenvalue(ModelSpec(id=model_id, lam=0.1)) - s.evaluate(0.1))
        slope = math.log(d2 / d1) / math.log(2.0)
        assert slope >= 6.5, (model_id, slope)


class TestVariationalMonotonicity:
    @pytest.mark.parametrize("model_id,L", [
        ("delta", 10.0),
        ("square", 10.0),
        ("exponential", 14.0),
    ])
    @pytest.mark.parametrize("lam", [0.5, 2.0])
    def test_nested_bases_descend(self, model_id, L, lam):
        model = ModelSpec(id=model_id, L=L) if model_id == "delta" else ModelSpec(id=model_id)
        energies = [
            ground_energy_diag(model, PlaneWaveBasis(L=L, n_max=n), lam)
            for n in (10, 20, 40)
        ]
        assert energies[0] >= energies[1] - 1e-12
        assert energies[1] >= energies[2] - 1e-12

    @pytest.mark.parametrize("n_max", [10, 20, 40])
    def test_bounded_from_below_by_same_box_exact(self, n_max):
        # Rayleigh-Ritz: every truncation of the periodic-box Hamiltonian
        # sits above that same Hamiltonian's true ground energy
        lam, L = 2.0, 10.0
        exact = oracles.DELTA_PERIODIC_EXACT[(lam, L)]
        e = ground_energy_diag(ModelSpec(id="delta", L=L), PlaneWaveBasis(L=L, n_max=n_max), lam)
        assert e >= exact - 1e-12
