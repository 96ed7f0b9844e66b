"""Catalog of the four attractive wells and their quantization conditions.

Each model couples a dimensionless strength lam to a fixed profile v(x)
with -1 <= v <= 0.  The module provides, per model: physical/dimensionless
scaling, a floating quantization residual (with analytic continuation on
both sides of every square root), an exact-arithmetic series recasting of
the same condition, exact eigenvalues, Fourier matrix elements for the
periodic-box treatment, deep-well asymptotics, branch-point location, and
the delta-regularized variant of the finite well.

The float residual and the series relation are two renditions of one
equation; tests hold them against each other rather than trusting either
alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .numeric import Bracket, NumericalError, newton_2d, solve_bracketed
from .series import (
    EnergySeries,
    SeriesRelation,
    TruncatedSeries,
    compose,
    kernel_series,
    kernel_value,
    newton_implicit_series,
    sqrt1p_series,
)

MODEL_IDS = ("poschl_teller", "square", "delta", "exponential")

# Curvature of the profile at the origin, where a two-sided Taylor
# expansion exists.  None marks profiles with a kink, a jump, or no
# pointwise value at 0, for which the subleading deep-well term is
# unavailable.
CURVATURE_AT_ORIGIN = {
    "poschl_teller": 2.0,
    "square": None,
    "delta": None,
    "exponential": None,
}


@dataclass(frozen=True)
class ModelSpec:
    """One well at one strength, plus optional box length and regulator.

    lam >= 0 is the dimensionless strength.  L is the periodic box
    length (delta and box contexts).  beta is the strength of the
    attached pointlike regulator well (square model only).
    """

    id: str
    lam: float = 0.0
    L: Optional[float] = None
    beta: Optional[float] = None

    def __post_init__(self) -> None:
        if self.id not in MODEL_IDS:
            raise ValueError(f"unknown model {self.id!r}; expected one of {MODEL_IDS}")
        if not (isinstance(self.lam, (int, float, Fraction)) and self.lam >= 0):
            raise ValueError(f"strength lam must be >= 0, got {self.lam!r}")
        if self.L is not None and not self.L > 0:
            raise ValueError(f"box length L must be positive, got {self.L!r}")
        if self.beta is not None:
            if self.id != "square":
                raise ValueError("the pointlike regulator is defined for the square model only")
            if not self.beta > 0:
                raise ValueError(f"regulator strength beta must be positive, got {self.beta!r}")


def potential(model_id: str, x: float):
    """Profile v(x) of a model; broadcasts over numpy arrays.

    The pointlike well has no pointwise profile, so asking for one is a
    caller error.
    """
    import numpy as np

    if model_id == "poschl_teller":
        return -1.0 / np.cosh(x) ** 2
    if model_id == "square":
        return np.where(np.abs(x) <= 1.0, -1.0, 0.0)
    if model_id == "exponential":
        return -np.exp(-np.abs(x))
    if model_id == "delta":
        raise ValueError("not available: the pointlike well has no pointwise profile")
    raise ValueError(f"unknown model {model_id!r}; expected one of {MODEL_IDS}")


# -- physical scaling --------------------------------------------------


@dataclass(frozen=True)
class ScalingMap:
    """Physical constants fixing the dimensionless form.

    mass m, well depth V0, length scale gamma (inverse decay rate for
    exponential tails), and the action constant hbar; all positive.
    """

    mass: float
    depth: float
    length: float
    hbar: float = 1.0

    def __post_init__(self) -> None:
        for name in ("mass", "depth", "length", "hbar"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0 and math.isfinite(value)):
                raise ValueError(f"invalid scaling: {name} must be a positive real, got {value!r}")

    @property
    def strength(self) -> float:
        """Dimensionless strength lam = 2 m gamma^2 V0 / hbar^2."""
        return 2.0 * self.mass * self.length**2 * self.depth / self.hbar**2

    @property
    def energy_unit(self) -> float:
        """Physical energy per unit of dimensionless energy."""
        return self.hbar**2 / (2.0 * self.mass * self.length**2)


def scale(direction: str, s: ScalingMap, value: float) -> float:
    """Convert an energy between physical and dimensionless form.

    ``to_dimensionless`` maps a physical energy E to eps = E / unit,
    ``to_physical`` maps back; the two compose to the identity.
    """
    if direction == "to_dimensionless":
        return float(value) / s.energy_unit
    if direction == "to_physical":
        return float(value) * s.energy_unit
    raise ValueError(f"direction must be to_dimensionless or to_physical, got {direction!r}")


# -- floating quantization residuals -----------------------------------
#
# All conditions are recast so the unknown enters through kernels of
# z = (wavenumber)^2, which are entire in z; evaluation is then valid on
# both sides of every turning point without branch bookkeeping.


def _exponential_condition(nu: float, lam: float) -> float:
    """Recast exponential-well condition F(nu, lam), nu = 2 sqrt(-eps).

    F(nu, lam) = 2 lam sum_m (-lam)^m / (m! (nu+1)...(nu+m+1))
               - nu    sum_m (-lam)^m / (m! (nu+1)...(nu+m)).
    Entire in lam and analytic for nu > -1, so it serves both the
    physical branch (nu >= 0) and the continuation the branch point
    lives on.  Terms are summed until they stop mattering at relative
    level 1e-17.
    """
    nu = float(nu)
    lam = float(lam)
    if nu <= -1.0:
        raise ValueError(f"outside physical branch: nu must exceed -1, got {nu}")
    total = 0.0
    sign = 1.0
    lam_pow = 1.0
    fact = 1.0
    prod_short = 1.0  # (nu+1)...(nu+m)
    for m in range(500):
        prod_long = prod_short * (nu + m + 1.0)
        term = sign * lam_pow / fact * (2.0 * lam / prod_long - nu / prod_short)
        total += term
        if m >= 1 and abs(term) < 1e-17 * max(abs(total), 1e-300):
            return total
        sign = -sign
        lam_pow *= lam
        fact *= m + 1.0
        prod_short = prod_long
    raise NumericalError(
        f"evaluation failure: exponential condition did not settle in 500 terms at nu={nu}, lam={lam}"
    )


def _square_condition(eps: float, lam: float) -> float:
    """Squared even-state condition of the finite well: w tan^2(sqrt w) + eps."""
    w = lam + eps
    return w * kernel_value("tan_sq_sqrt", w) + eps


def _square_beta_condition(eps: float, lam: float, beta: float) -> float:
    """Finite well with an attached pointlike well of strength beta.

    With k = sqrt(-eps) and w = lam + eps:
    F = k (2 cos sqrt(w) - beta sinc sqrt(w)) - beta cos sqrt(w) - 2 w sinc sqrt(w).
    Vanishes at (lam=0, eps=-beta^2/4), the regulator's own level.
    """
    if eps >= 0.0:
        raise ValueError(f"outside physical branch: the regulated level needs eps < 0, got {eps}")
    k = math.sqrt(-eps)
    w = lam + eps
    c = kernel_value("cos_sqrt", w)
    s = kernel_value("sinc_sqrt", w)
    return k * (2.0 * c - beta * s) - beta * c - 2.0 * w * s


def _delta_periodic_condition(eps: float, lam: float, L: float) -> float:
    """Pointlike well in a periodic box: eps + (lam/L) sqrtcoth(-eps L^2 / 4)."""
    return eps + (lam / L) * kernel_value("sqrtcoth", -eps * L * L / 4.0)


def residual(model: ModelSpec, eps: float) -> float:
    """Quantization-condition residual F(eps) at the model's strength.

    For positive strength the square and exponential models restrict
    eps to the physical ground-state range -lam <= eps <= 0 (error:
    "outside physical branch"); the analytic-continuation forms used by
    branch-point location live in the private helpers.
    """
    eps = float(eps)
    lam = float(model.lam)
    if model.id == "poschl_teller":
        return (lam + eps) ** 2 + eps
    if model.id == "square":
        if model.beta is not None:
            return _square_beta_condition(eps, lam, float(model.beta))
        if lam > 0 and not -lam <= eps <= 0.0:
            raise ValueError(
                f"outside physical branch: need -lam <= eps <= 0, got eps={eps} at lam={lam}"
            )
        return _square_condition(eps, lam)
    if model.id == "delta":
        if model.L is not None:
            return _delta_periodic_condition(eps, lam, float(model.L))
        return eps + lam * lam / 4.0
    # exponential
    if lam > 0 and not -lam < eps <= 0.0:
        raise ValueError(
            f"outside physical branch: need -lam < eps <= 0, got eps={eps} at lam={lam}"
        )
    return _exponential_condition(2.0 * math.sqrt(max(-eps, 0.0)), lam)


# -- series recastings --------------------------------------------------


def _poschl_teller_relation() -> SeriesRelation:
    def res(e: TruncatedSeries) -> TruncatedSeries:
        lam = TruncatedSeries.identity(e.order, exact=e.exact, variable=e.variable)
        return (lam + e) ** 2 + e

    def der(e: TruncatedSeries) -> TruncatedSeries:
        lam = TruncatedSeries.identity(e.order, exact=e.exact, variable=e.variable)
        return 2 * (lam + e) + 1

    return SeriesRelation(res, der, leading_order=2, name="poschl_teller strength-series")


def _square_relation() -> SeriesRelation:
    def res(e: TruncatedSeries) -> TruncatedSeries:
        n = e.order
        lam = TruncatedSeries.identity(n, exact=e.exact, variable=e.variable)
        w = lam + e
        tk = kernel_series("tan_sq_sqrt", n, exact=e.exact)
        return w * compose(tk, w) + e

    def der(e: TruncatedSeries) -> TruncatedSeries:
        n = e.order
        lam = TruncatedSeries.identity(n, exact=e.exact, variable=e.variable)
        w = lam + e
        tk = kernel_series("tan_sq_sqrt", n + 1, exact=e.exact)
        tkp = tk.derivative()
        return compose(tk.truncate(n), w) + w * compose(tkp, w) + 1

    return SeriesRelation(res, der, leading_order=2, name="square strength-series")


def _delta_relation() -> SeriesRelation:
    def res(e: TruncatedSeries) -> TruncatedSeries:
        lam = TruncatedSeries.identity(e.order, exact=e.exact, variable=e.variable)
        quarter = Fraction(1, 4) if e.exact else 0.25
        return e + lam * lam * quarter

    def der(e: TruncatedSeries) -> TruncatedSeries:
        one = Fraction(1) if e.exact else 1.0
        return TruncatedSeries.constant(one, e.order, e.variable)

    return SeriesRelation(res, der, leading_order=2, name="delta strength-series")


def _delta_periodic_relation(L: Union[int, Fraction, float]) -> SeriesRelation:
    """Pointlike well in a box of length L, series in the strength.

    Exact when L is rational (ints and Fractions are; floats are taken
    at their exact binary value in exact mode).
    """

    def res(e: TruncatedSeries) -> TruncatedSeries:
        n = e.order
        boxl = Fraction(L) if e.exact else float(L)
        lam = TruncatedSeries.identity(n, exact=e.exact, variable=e.variable)
        z = e * (-(boxl * boxl) / 4)
        kk = kernel_series("sqrtcoth", n, exact=e.exact)
        return e + (lam / boxl) * compose(kk, z)

    def der(e: TruncatedSeries) -> TruncatedSeries:
        n = e.order
        boxl = Fraction(L) if e.exact else float(L)
        lam = TruncatedSeries.identity(n, exact=e.exact, variable=e.variable)
        z = e * (-(boxl * boxl) / 4)
        kk = kernel_series("sqrtcoth", n + 1, exact=e.exact)
        kp = kk.derivative()
        return (lam / boxl) * compose(kp, z) * (-(boxl * boxl) / 4) + 1

    return SeriesRelation(res, der, leading_order=1, name=f"delta box-series (L={L})")


def _exponential_nu_relation() -> SeriesRelation:
    """Exponential-well condition solved for nu = 2 sqrt(-eps).

    nu is itself analytic in the strength (nu ~ 2 lam), so the implicit
    solve runs in the nu variable and the energy series is recovered as
    eps = -nu^2/4 afterward.
    """

    def _sums(nu: TruncatedSeries):
        n = nu.order
        one = Fraction(1) if nu.exact else 1.0
        one_s = TruncatedSeries.constant(one, n, nu.variable)
        lam = TruncatedSeries.identity(n, exact=nu.exact, variable=nu.variable)
        total_a = TruncatedSeries.zero(n, exact=nu.exact, variable=nu.variable)
        total_b = TruncatedSeries.zero(n, exact=nu.exact, variable=nu.variable)
        total_da = TruncatedSeries.zero(n, exact=nu.exact, variable=nu.variable)
        total_db = TruncatedSeries.zero(n, exact=nu.exact, variable=nu.variable)
        sign = 1
        lam_pow = one_s
        fact = 1
        prod_short = one_s  # (nu+1)...(nu+m)
        dlog_short = TruncatedSeries.zero(n, exact=nu.exact, variable=nu.variable)
        for m in range(n + 1):
            inv_next = one_s / (nu + (m + 1))
            prod_long = prod_short * (nu + (m + 1))
            dlog_long = dlog_short + inv_next
            coeff = (Fraction(1, fact) if nu.exact else 1.0 / fact) * sign
            a_m = (one_s / prod_long) * coeff
            b_m = (one_s / prod_short) * coeff
            total_a = total_a + lam_pow * a_m
            total_b = total_b + lam_pow * b_m
            total_da = total_da - lam_pow * (a_m * dlog_long)
            total_db = total_db - lam_pow * (b_m * dlog_short)
            lam_pow = lam_pow * lam
            sign = -sign
            fact *= m + 1
            prod_short = prod_long
            dlog_short = dlog_long
        return lam, total_a, total_b, total_da, total_db

    def res(nu: TruncatedSeries) -> TruncatedSeries:
        lam, total_a, total_b, _, _ = _sums(nu)
        return 2 * lam * total_a - nu * total_b

    def der(nu: TruncatedSeries) -> TruncatedSeries:
        lam, _, total_b, total_da, total_db = _sums(nu)
        return 2 * lam * total_da - total_b - nu * total_db

    return SeriesRelation(res, der, leading_order=1, name="exponential strength-series (nu form)")


def series_relation(model: ModelSpec) -> SeriesRelation:
    """The model's quantization condition in series form.

    For the exponential model the relation is in nu = 2 sqrt(-eps),
    the variable in which the condition is analytic;
    :func:`implicit_energy_series` converts back to the energy.
    """
    if model.id == "poschl_teller":
        return _poschl_teller_relation()
    if model.id == "square":
        return _square_relation()
    if model.id == "delta":
        if model.L is not None:
            return _delta_periodic_relation(model.L)
        return _delta_relation()
    return _exponential_nu_relation()


def implicit_energy_series(
    model: ModelSpec, order: int, exact: bool = True
) -> EnergySeries:
    """Energy expansion in powers of the strength, through ``order``."""
    relation = series_relation(model)
    solved = newton_implicit_series(relation, order, exact=exact, variable="lambda")
    if model.id == "exponential":
        quarter = Fraction(1, 4) if exact else 0.25
        solved = -(solved * solved) * quarter
    return EnergySeries(series=solved, variable="lambda", label=relation.name)


# -- validity hints and the bundled condition --------------------------


def ground_state_bracket(model: ModelSpec) -> Bracket:
    """Search interval, in the model's natural root variable, that pins
    the even ground state and excludes every higher branch."""
    lam = float(model.lam)
    if lam <= 0:
        raise ValueError("a bracket hint needs positive strength")
    if model.id == "square":
        return Bracket(0.0, min(math.sqrt(lam), math.pi / 2))
    if model.id == "exponential":
        return Bracket(0.0, 2.0 * math.sqrt(lam))
    if model.id == "delta" and model.L is not None:
        L = float(model.L)
        hi = (lam / 2.0) / math.tanh(lam * L / 8.0) + 1.0
        return Bracket(lam / 2.0, hi)
    if model.id == "delta":
        return Bracket(lam / 4.0, lam)
    # poschl_teller: bracket in the energy itself
    return Bracket(-((lam + 1.0) ** 2), 0.0)


@dataclass(frozen=True)
class QuantizationForm:
    """A condition in both renditions plus a root-bracketing hint."""

    float_residual: Callable[[float, ModelSpec], float]
    series_relation: SeriesRelation
    validity: Callable[[ModelSpec], Bracket]


def quantization_form(model: ModelSpec) -> QuantizationForm:
    return QuantizationForm(
        float_residual=lambda eps, m=model: residual(m, eps),
        series_relation=series_relation(model),
        validity=ground_state_bracket,
    )


# -- exact eigenvalues --------------------------------------------------


def exact_eigenvalue(model: ModelSpec, n: int = 0) -> float:
    """Bound-state energy of level ``n`` (even states only).

    Closed forms where they exist; bracketed root finding on the
    residual otherwise.
    """
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"no such bound state: level must be a nonnegative integer, got {n!r}")
    lam = float(model.lam)
    if model.id == "poschl_teller":
        xi = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * lam))
        if not n < xi - 1.0:
            raise ValueError(f"no such bound state: level {n} needs strength above {(n + 1) * (n + 2)}")
        return -((xi - n - 1.0) ** 2)
    if model.id == "delta":
        if n != 0:
            raise ValueError("no such bound state: the pointlike well binds a single level")
        if model.L is not None:
            return delta_periodic_energy(lam, float(model.L))
        return -lam * lam / 4.0
    if n != 0:
        raise ValueError("no such bound state: only the even ground state is catalogued")
    if lam == 0.0:
        return 0.0
    if model.id == "square":
        # root in k1 = sqrt(lam + eps)
        hi = min(math.sqrt(lam), math.pi / 2 * (1 - 1e-14))

        def g(k1: float) -> float:
            return k1 * math.tan(k1) - math.sqrt(max(lam - k1 * k1, 0.0))

        k1 = solve_bracketed(g, Bracket(0.0, hi), tol=1e-15 * max(1.0, hi))
        return k1 * k1 - lam
    # exponential: descending scan in nu = 2 sqrt(-eps); the ground
    # state is the largest root below 2 sqrt(lam).
    top = 2.0 * math.sqrt(lam)
    steps = 400
    h = top / steps
    prev_nu = top
    prev_val = _exponential_condition(prev_nu, lam)
    for i in range(1, steps + 1):
        nu = top - i * h
        val = _exponential_condition(nu, lam)
        if val == 0.0:
            return -nu * nu / 4.0
        if math.copysign(1.0, val) != math.copysign(1.0, prev_val):
            root = solve_bracketed(
                lambda t: _exponential_condition(t, lam),
                Bracket(nu, prev_nu),
                tol=1e-16 * max(1.0, top),
            )
            return -root * root / 4.0
        prev_nu, prev_val = nu, val
    raise NumericalError(
        f"evaluation failure: no sign change located for the exponential well at lam={lam}"
    )


# -- Fourier matrix elements --------------------------------------------

BASIS_KINDS = ("full_complex", "even_cosine")


def matrix_element(model: ModelSpec, m: int, n: int, basis: str = "even_cosine") -> float:
    """Potential matrix element <m|v|n> in a periodic box of length L.

    full_complex uses exp(2 pi i n x / L)/sqrt(L); even_cosine uses the
    parity-adapted set 1/sqrt(L), sqrt(2/L) cos(2 pi n x / L) (n >= 1).
    Closed forms per model; the hyperbolic-secant well has no elementary
    box integrals, so it is not available here.
    """
    if basis not in BASIS_KINDS:
        raise ValueError(f"not available: basis must be one of {BASIS_KINDS}, got {basis!r}")
    if model.L is None:
        raise ValueError("matrix elements need a box length L")
    L = float(model.L)
    if model.id == "poschl_teller":
        raise ValueError("not available: no closed-form box elements for the hyperbolic-secant well")
    if model.id == "square" and L <= 2.0:
        raise ValueError(f"well exceeds box: the square well needs L > 2, got L={L}")
    if basis == "full_complex":
        if not (isinstance(m, int) and isinstance(n, int)):
            raise ValueError("basis indices must be integers")
        q = 2.0 * math.pi * (m - n) / L
        if model.id == "delta":
            return -1.0 / L
        if model.id == "square":
            if q == 0.0:
                return -2.0 / L
            return -(2.0 / L) * math.sin(q) / q
        # exponential
        return -(2.0 / L) * (1.0 - (-1.0) ** abs(m - n) * math.exp(-L / 2.0)) / (1.0 + q * q)
    # even_cosine
    if not (isinstance(m, int) and isinstance(n, int) and m >= 0 and n >= 0):
        raise ValueError("cosine-basis indices must be nonnegative integers")
    if m > n:
        m, n = n, m
    if model.id == "delta":
        if m == 0 and n == 0:
            return -1.0 / L
        if m == 0:
            return -math.sqrt(2.0) / L
        return -2.0 / L
    if model.id == "square":

        def sinc(t: float) -> float:
            return 1.0 if t == 0.0 else math.sin(t) / t

        cm = 2.0 * math.pi * m / L
        cn = 2.0 * math.pi * n / L
        if m == 0 and n == 0:
            return -2.0 / L
        if m == 0:
            return -(math.sqrt(2.0) * 2.0 / L) * sinc(cn)
        return -(2.0 / L) * (sinc(cm - cn) + sinc(cm + cn))
    # exponential

    def tail_integral(q: float, parity: int) -> float:
        # integral of exp(-|x|) cos(qx) over the box; qL/2 is an integer
        # multiple of pi so the boundary sine terms vanish.
        return 2.0 * (1.0 - parity * math.exp(-L / 2.0)) / (1.0 + q * q)

    par = (-1) ** ((m + n) % 2)
    cm = 2.0 * math.pi * m / L
    cn = 2.0 * math.pi * n / L
    if m == 0 and n == 0:
        return -(1.0 / L) * tail_integral(0.0, 1)
    if m == 0:
        return -(math.sqrt(2.0) / L) * tail_integral(cn, par)
    return -(1.0 / L) * (tail_integral(cm - cn, par) + tail_integral(cm + cn, par))


# -- deep-well asymptotics ----------------------------------------------


@dataclass(frozen=True)
class LargeStrengthExpansion:
    """Leading deep-well behavior eps_n ~ -(leading) lam + (subleading) sqrt(lam).

    ``leading`` multiplies -lam; ``subleading`` multiplies +sqrt(lam)
    and is None when the profile has no two-sided Taylor expansion at
    the origin (flagged in ``note`` instead of raising).
    """

    leading: Optional[float]
    subleading: Optional[float]
    note: str = ""

    def evaluate(self, lam: float) -> float:
        if self.leading is None:
            raise ValueError(f"not available: {self.note}")
        value = -self.leading * lam
        if self.subleading is not None:
            value += self.subleading * math.sqrt(lam)
        return value


def large_lambda(model: ModelSpec, n: int = 0) -> LargeStrengthExpansion:
    """Deep-well expansion eps_n ~ -lam + (2n+1) sqrt(lam v''(0)/2)."""
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"level must be a nonnegative integer, got {n!r}")
    if model.id == "delta":
        return LargeStrengthExpansion(
            leading=None,
            subleading=None,
            note="pointlike well: no depth scale, exact energy is -lam^2/4",
        )
    curvature = CURVATURE_AT_ORIGIN[model.id]
    if curvature is None:
        return LargeStrengthExpansion(
            leading=1.0, subleading=None, note="no Taylor expansion at origin"
        )
    return LargeStrengthExpansion(
        leading=1.0, subleading=(2 * n + 1) * math.sqrt(curvature / 2.0), note=""
    )


# -- branch points -------------------------------------------------------

_BRANCH_STARTS = {
    "poschl_teller": (-0.3, -0.2),
    "square": (-0.9, -0.4),
}


def branch_point(model: ModelSpec) -> tuple[float, float]:
    """Nearest singularity (eps_c, lam_c) of the ground-state curve.

    Solves F = 0, dF/d(eps) = 0 on the analytic continuation of the
    recast condition.  The pointlike well's energy is an entire
    function of the strength, so it has no branch point to find.
    """
    if model.id == "delta":
        raise ValueError(
            "no branch point: the pointlike-well energy -lam^2/4 is entire in the strength"
        )
    if model.id == "exponential":
        # The fold sits on the continuation nu < 0, unreachable through
        # eps; solve in the (nu, lam) plane and map back.
        def system(p):
            nu, lam = float(p[0]), float(p[1])
            h = 1e-6 * max(1.0, abs(nu))
            f = _exponential_condition(nu, lam)
            fn = (_exponential_condition(nu + h, lam) - _exponential_condition(nu - h, lam)) / (
                2.0 * h
            )
            return (f, fn)

        # tol sits above the noise floor of differencing the term-summed
        # condition twice; the root itself is pinned ~1e-11 or better
        nu_c, lam_c = newton_2d(system, (-0.5, -0.15), tol=1e-10)
        return (-nu_c * nu_c / 4.0, lam_c)

    if model.id == "poschl_teller":
        analytic = lambda eps, lam: (lam + eps) ** 2 + eps
    else:
        analytic = _square_condition

    def system(p):
        eps, lam = float(p[0]), float(p[1])
        h = 1e-6 * max(1.0, abs(eps))
        f = analytic(eps, lam)
        fe = (analytic(eps + h, lam) - analytic(eps - h, lam)) / (2.0 * h)
        return (f, fe)

    eps_c, lam_c = newton_2d(system, _BRANCH_STARTS[model.id], tol=1e-13)
    return (eps_c, lam_c)


# -- pointlike well in a box ---------------------------------------------


def delta_periodic_energy(lam: float, L: float, boundary: str = "periodic") -> float:
    """Ground energy of the pointlike well in a box of length L.

    ``periodic`` solves k = (lam/2) coth(kL/2); ``neumann`` solves the
    rearranged 2k tanh(kL/2) = lam, the condition for a box with
    zero-derivative walls.  Both pin the same root; keeping the two
    forms separate lets tests confirm that numerically.
    """
    lam = float(lam)
    L = float(L)
    if not (lam > 0 and L > 0):
        raise ValueError(f"strength and box length must be positive, got lam={lam}, L={L}")
    if boundary not in ("periodic", "neumann"):
        raise ValueError(f"boundary must be periodic or neumann, got {boundary!r}")
    hi = (lam / 2.0) / math.tanh(lam * L / 8.0) + 1.0
    if boundary == "periodic":

        def f(k: float) -> float:
            return k - (lam / 2.0) / math.tanh(k * L / 2.0)

    else:

        def f(k: float) -> float:
            return 2.0 * k * math.tanh(k * L / 2.0) - lam

    k_root = solve_bracketed(f, Bracket(lam / 2.0, hi), tol=1e-16 * max(1.0, hi))
    return -k_root * k_root


def delta_periodic_error_expansion(count: int) -> TruncatedSeries:
    """Coefficients of (1+x)^2/(1-x)^2 in x = exp(-kL): 1, 4, 8, 12, ...

    The finite-box energy error follows this geometric profile; the
    series is exposed for diagnostics and tests.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    order = count - 1
    one_plus = TruncatedSeries([Fraction(1), Fraction(1)] + [Fraction(0)] * max(0, order - 1))
    one_minus = TruncatedSeries([Fraction(1), Fraction(-1)] + [Fraction(0)] * max(0, order - 1))
    if order == 0:
        one_plus = TruncatedSeries([Fraction(1)])
        one_minus = TruncatedSeries([Fraction(1)])
    return (one_plus * one_plus) / (one_minus * one_minus)


# -- beta regularization of the square well -----------------------------


def beta_coefficient(j: int, beta: float) -> float:
    """Closed-form strength-series coefficients of the regulated well.

    Orders 0..3 have elementary closed forms; higher orders must come
    from :func:`beta_series_numeric`.
    """
    if not isinstance(j, int) or j < 0:
        raise ValueError(f"order must be a nonnegative integer, got {j!r}")
    if not beta > 0:
        raise ValueError(f"regulator strength beta must be positive, got {beta!r}")
    b = float(beta)
    if j == 0:
        return -b * b / 4.0
    if j == 1:
        return math.exp(-b) - 1.0
    if j == 2:
        return 2.0 * math.exp(-2.0 * b) * (1.0 + b - math.exp(b)) / (b * b)
    if j == 3:
        return (
            math.exp(-3.0 * b)
            * (5.0 * math.exp(2.0 * b) - 8.0 * math.exp(b) * (b + 2.0) + 6.0 * b * b + 14.0 * b + 11.0)
            / b**4
        )
    raise ValueError(
        f"no closed form available above order 3 (got {j}); use beta_series_numeric"
    )


def beta_series_numeric(beta: float, order: int) -> EnergySeries:
    """Strength series of the regulated square well at fixed beta (float).

    The condition is recast about the regulator's own level
    eps0 = -beta^2/4: with eta = eps - eps0, the square root of -eps
    becomes (beta/2) sqrt(1 - 4 eta / beta^2), a series operation, and
    the oscillatory kernels are re-expanded about w0 = -beta^2/4.
    Newton-on-series then solves for eta order by order.
    """
    if not beta > 0:
        raise ValueError(f"regulator strength beta must be positive, got {beta!r}")
    if order < 1:
        raise ValueError("order must be at least 1")
    b = float(beta)
    w0 = -b * b / 4.0
    pad = order + 40
    try:
        cos_shift = kernel_series("cos_sqrt", pad, exact=False).shift(w0).truncate(order + 1)
        sinc_shift = kernel_series("sinc_sqrt", pad, exact=False).shift(w0).truncate(order + 1)
    except OverflowError as exc:
        raise NumericalError(f"precision exhausted re-expanding kernels at beta={b}") from exc
    cos_k = cos_shift.truncate(order)
    sinc_k = sinc_shift.truncate(order)
    cos_kp = cos_shift.derivative()
    sinc_kp = sinc_shift.derivative()

    def k_series(eta: TruncatedSeries) -> TruncatedSeries:
        return (b / 2.0) * sqrt1p_series(eta * (-4.0 / (b * b)))

    def res(eta: TruncatedSeries) -> TruncatedSeries:
        n = eta.order
        lam = TruncatedSeries.identity(n, exact=False, variable=eta.variable)
        u = lam + eta
        w = u + w0
        c = compose(cos_k.truncate(n), u)
        s = compose(sinc_k.truncate(n), u)
        k = k_series(eta)
        return k * (2 * c - b * s) - b * c - 2 * (w * s)

    def der(eta: TruncatedSeries) -> TruncatedSeries:
        n = eta.order
        lam = TruncatedSeries.identity(n, exact=False, variable=eta.variable)
        u = lam + eta
        w = u + w0
        c = compose(cos_k.truncate(n), u)
        s = compose(sinc_k.truncate(n), u)
        cp = compose(cos_kp.truncate(n), u)
        sp = compose(sinc_kp.truncate(n), u)
        k = k_series(eta)
        dk = -0.5 * (TruncatedSeries.constant(1.0, n, eta.variable) / k)
        return dk * (2 * c - b * s) + k * (2 * cp - b * sp) - b * cp - 2 * s - 2 * (w * sp)

    relation = SeriesRelation(res, der, leading_order=1, name=f"regulated square (beta={b})")
    eta = newton_implicit_series(relation, order, exact=False, variable="lambda")
    eps_series = eta + w0
    return EnergySeries(series=eps_series, variable="lambda", label=relation.name)


def beta_extrapolated_coefficient(
    j: int, betas: tuple = (1.0, 0.5, 0.25, 0.125), order: Optional[int] = None
) -> float:
    """Regulator-free coefficient by Richardson extrapolation in beta.

    Computes the order-j coefficient of the regulated series at each
    beta in the (decreasing) sequence and extrapolates polynomially to
    beta = 0.  Never evaluates at beta = 0 itself, where the expansion
    point collides with the threshold.
    """
    if order is None:
        order = max(j, 1)
    values = []
    for b in betas:
        if j <= 3:
            values.append(beta_coefficient(j, b))
        else:
            values.append(float(beta_series_numeric(b, order).series.coeffs[j]))
    xs = [float(b) for b in betas]
    # Neville tableau evaluated at beta = 0
    t = list(values)
    m = len(t)
    for level in range(1, m):
        for i in range(m - level):
            t[i] = t[i + 1] + (t[i + 1] - t[i]) * xs[i + level] / (xs[i] - xs[i + level])
    return t[0]
