"""Truncated power series over exact rationals or floats.

A :class:`TruncatedSeries` stores coefficients c[0..N] of a series known
through order N; arithmetic truncates consistently at that order.  A
series is *exact* when every coefficient is a :class:`fractions.Fraction`
(ints are promoted on construction); the presence of any float demotes
the whole series to float mode.  Binary operations require equal
truncation orders so that silent precision loss cannot happen.

The module also provides the analytic kernels used by the quantization
conditions (cosine and hyperbolic families in the variable z = x**2,
which keeps everything single-valued), Newton iteration for implicit
series, and the :class:`SeriesRelation` container that packages a
quantization condition with its energy derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .numeric import NumericalError

Coefficient = Union[Fraction, float]

KERNEL_KINDS = (
    "cos_sqrt",
    "sinc_sqrt",
    "cosh_sqrt",
    "sinhc_sqrt",
    "tan_sq_sqrt",
    "sqrtcoth",
    "exp",
    "sqrt1p",
)

MAX_KERNEL_ORDER = 200


def _coerce(items: Sequence) -> tuple:
    if any(isinstance(c, float) for c in items):
        return tuple(float(c) for c in items)
    out = []
    for c in items:
        if isinstance(c, Fraction):
            out.append(c)
        elif isinstance(c, int):
            out.append(Fraction(c))
        else:
            raise ValueError(f"coefficients must be Fraction, int, or float, got {type(c).__name__}")
    return tuple(out)


class TruncatedSeries:
    """Power series truncated at a fixed order.

    ``variable`` names the formal expansion variable; binary operations
    insist that both operands share the variable, the coefficient domain
    (exact vs float), and the truncation order, and raise ValueError
    ("incompatible series") otherwise.  That strictness is the whole
    point: silent demotion from exact to float is how cross-checks rot.
    """

    __slots__ = ("coeffs", "variable")

    def __init__(self, coefficients: Sequence[Coefficient], variable: str = "x"):
        items = list(coefficients)
        if not items:
            raise ValueError("a series needs at least its constant coefficient")
        if not isinstance(variable, str) or not variable:
            raise ValueError("variable must be a nonempty string")
        self.coeffs = _coerce(items)
        self.variable = variable

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, order: int, exact: bool = True, variable: str = "x") -> "TruncatedSeries":
        if order < 0:
            raise ValueError("order must be nonnegative")
        c = Fraction(0) if exact else 0.0
        return cls([c] * (order + 1), variable)

    @classmethod
    def constant(cls, value: Coefficient, order: int, variable: str = "x") -> "TruncatedSeries":
        if order < 0:
            raise ValueError("order must be nonnegative")
        zero = 0.0 if isinstance(value, float) else Fraction(0)
        return cls([value] + [zero] * order, variable)

    @classmethod
    def identity(cls, order: int, exact: bool = True, variable: str = "x") -> "TruncatedSeries":
        """The series of the variable itself."""
        if order < 1:
            raise ValueError("the identity series needs order >= 1")
        one = Fraction(1) if exact else 1.0
        zero = Fraction(0) if exact else 0.0
        return cls([zero, one] + [zero] * (order - 1), variable)

    # -- introspection ------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return isinstance(self.coeffs[0], Fraction)

    @property
    def domain(self) -> str:
        """Coefficient domain: "rational" or "float"."""
        return "rational" if self.exact else "float"

    def __repr__(self) -> str:
        return (
            f"TruncatedSeries(variable={self.variable!r}, order={self.order}, "
            f"{self.domain}, {list(self.coeffs)!r})"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.variable == other.variable and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.variable, self.coeffs))

    # -- shape changes ------------------------------------------------

    def truncate(self, order: int) -> "TruncatedSeries":
        """Drop coefficients above ``order``."""
        if not 0 <= order <= self.order:
            raise ValueError(f"cannot truncate order-{self.order} series to order {order}")
        return TruncatedSeries(self.coeffs[: order + 1], self.variable)

    def pad(self, order: int) -> "TruncatedSeries":
        """Extend with zero coefficients up to ``order``.

        Padding asserts knowledge the series may not have; use it only
        when the higher coefficients are genuinely zero.
        """
        if order < self.order:
            raise ValueError(f"cannot pad order-{self.order} series down to order {order}")
        zero = Fraction(0) if self.exact else 0.0
        return TruncatedSeries(self.coeffs + (zero,) * (order - self.order), self.variable)

    def to_float(self) -> "TruncatedSeries":
        return TruncatedSeries([float(c) for c in self.coeffs], self.variable)

    # -- arithmetic ---------------------------------------------------

    def _check_compat(self, other: "TruncatedSeries") -> None:
        if self.variable != other.variable:
            raise ValueError(
                f"incompatible series: variables {self.variable!r} vs {other.variable!r}"
            )
        if self.exact != other.exact:
            raise ValueError(
                f"incompatible series: domains {self.domain} vs {other.domain}; call to_float() first"
            )
        if self.order != other.order:
            raise ValueError(
                f"incompatible series: orders {self.order} vs {other.order}; truncate or pad explicitly"
            )

    def _check_scalar(self, value: Coefficient) -> Coefficient:
        if isinstance(value, float) and self.exact:
            raise ValueError(
                "incompatible series: float scalar into an exact series; call to_float() first"
            )
        return value

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_compat(other)
            return TruncatedSeries(
                [a + b for a, b in zip(self.coeffs, other.coeffs)], self.variable
            )
        if isinstance(other, (int, float, Fraction)):
            other = self._check_scalar(other)
            head = [self.coeffs[0] + other]
            return TruncatedSeries(head + list(self.coeffs[1:]), self.variable)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.variable)

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_compat(other)
            return TruncatedSeries(
                [a - b for a, b in zip(self.coeffs, other.coeffs)], self.variable
            )
        if isinstance(other, (int, float, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_compat(other)
            n = self.order
            a, b = self.coeffs, other.coeffs
            out = []
            for k in range(n + 1):
                out.append(sum(a[i] * b[k - i] for i in range(k + 1)))
            return TruncatedSeries(out, self.variable)
        if isinstance(other, (int, float, Fraction)):
            other = self._check_scalar(other)
            return TruncatedSeries([c * other for c in self.coeffs], self.variable)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_compat(other)
            if other.coeffs[0] == 0:
                raise ValueError("non-unit divisor: the divisor's constant term is zero")
            n = self.order
            a, b = self.coeffs, other.coeffs
            q: list = []
            for k in range(n + 1):
                acc = a[k]
                for i in range(1, k + 1):
                    acc = acc - b[i] * q[k - i]
                q.append(acc / b[0])
            return TruncatedSeries(q, self.variable)
        if isinstance(other, (int, float, Fraction)):
            other = self._check_scalar(other)
            if other == 0:
                raise ZeroDivisionError("division of a series by zero")
            if isinstance(other, int):
                other = Fraction(other)
            return TruncatedSeries([c / other for c in self.coeffs], self.variable)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, float, Fraction)):
            scalar = self._check_scalar(other)
            if not isinstance(scalar, float):
                scalar = Fraction(scalar)
            return TruncatedSeries.constant(
                float(scalar) if not self.exact else scalar, self.order, self.variable
            ) / self
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or isinstance(exponent, bool) or exponent < 0:
            raise ValueError("series exponent must be a nonnegative integer")
        one = Fraction(1) if self.exact else 1.0
        result = TruncatedSeries.constant(one, self.order, self.variable)
        base = self
        k = exponent
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- calculus and evaluation --------------------------------------

    def derivative(self) -> "TruncatedSeries":
        """Termwise derivative; the order drops by one (floor zero)."""
        if self.order == 0:
            zero = Fraction(0) if self.exact else 0.0
            return TruncatedSeries([zero], self.variable)
        return TruncatedSeries(
            [k * c for k, c in enumerate(self.coeffs) if k > 0], self.variable
        )

    def shift(self, amount: Coefficient) -> "TruncatedSeries":
        """Coefficients of f(amount + x) given this series for f(x).

        Exact when the series and the shift are both rational.  The
        result is a plain re-expansion of the stored polynomial, so it
        is only as accurate as the truncation of f about 0.
        """
        amount = self._check_scalar(amount)
        n = self.order
        powers = [1]
        for _ in range(n):
            powers.append(powers[-1] * amount)
        out = []
        for k in range(n + 1):
            acc = self.coeffs[k] * 0
            for m in range(k, n + 1):
                acc = acc + math.comb(m, k) * self.coeffs[m] * powers[m - k]
            out.append(acc)
        return TruncatedSeries(out, self.variable)

    def evaluate(self, x: Coefficient):
        """Horner evaluation of the truncating polynomial at ``x``."""
        acc = self.coeffs[-1] * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """Series of outer(inner(x)), truncated at inner's order.

    ``inner`` must vanish at the origin; otherwise the coefficients of
    the composite would depend on outer terms beyond any truncation.
    ``outer`` may be longer than ``inner`` (the excess cannot reach the
    kept orders) but not shorter.
    """
    if inner.coeffs[0] != 0:
        raise ValueError(
            "composition requires nilpotent argument: inner constant term must be zero"
        )
    if outer.exact != inner.exact:
        raise ValueError(
            f"incompatible series: domains {outer.domain} vs {inner.domain}; call to_float() first"
        )
    n = inner.order
    if outer.order < n:
        raise ValueError(f"outer series order {outer.order} is below the target order {n}")
    acc = TruncatedSeries.constant(outer.coeffs[n], n, inner.variable)
    for k in range(n - 1, -1, -1):
        acc = acc * inner + outer.coeffs[k]
    return acc


def sqrt1p_series(s: TruncatedSeries) -> TruncatedSeries:
    """Square root of 1 + s for a series s vanishing at the origin.

    Newton iteration in the series ring, r <- (r + (1+s)/r) / 2, which
    doubles the number of correct coefficients each step and never
    leaves the coefficient domain.  A nonzero constant term would put
    the root on an unknown branch, so it is rejected.
    """
    if s.coeffs[0] != 0:
        raise ValueError(
            "unsupported branch point: sqrt1p needs a series vanishing at the origin"
        )
    one = Fraction(1) if s.exact else 1.0
    target = s + one
    r = TruncatedSeries.constant(one, s.order, s.variable)
    half = Fraction(1, 2) if s.exact else 0.5
    steps = max(1, s.order).bit_length() + 2
    for _ in range(steps):
        nxt = (r + target / r) * half
        if nxt == r:
            break
        r = nxt
    return r


# -- analytic kernels ------------------------------------------------
#
# All kernels are entire (or meromorphic) functions of z = x**2, so
# their series have plain integer-power terms and the same expression
# covers oscillatory (z > 0) and evanescent (z < 0) regimes.


def _kernel_exact(kind: str, order: int) -> list:
    if kind == "cos_sqrt":
        return [Fraction((-1) ** m, math.factorial(2 * m)) for m in range(order + 1)]
    if kind == "sinc_sqrt":
        return [Fraction((-1) ** m, math.factorial(2 * m + 1)) for m in range(order + 1)]
    if kind == "cosh_sqrt":
        return [Fraction(1, math.factorial(2 * m)) for m in range(order + 1)]
    if kind == "sinhc_sqrt":
        return [Fraction(1, math.factorial(2 * m + 1)) for m in range(order + 1)]
    if kind == "exp":
        return [Fraction(1, math.factorial(m)) for m in range(order + 1)]
    if kind == "sqrt1p":
        out = [Fraction(1)]
        for m in range(1, order + 1):
            out.append(out[-1] * Fraction(3 - 2 * m, 2 * m))
        return out
    if kind == "tan_sq_sqrt":
        # tan(sqrt z)**2 = z * (sinc/cos)**2; the leading factor of z
        # is restored after the division, which needs one spare order.
        s = TruncatedSeries(_kernel_exact("sinc_sqrt", order))
        c = TruncatedSeries(_kernel_exact("cos_sqrt", order))
        q = s / c
        q2 = q * q
        return [Fraction(0)] + list(q2.coeffs[:order])
    if kind == "sqrtcoth":
        num = TruncatedSeries(_kernel_exact("cosh_sqrt", order))
        den = TruncatedSeries(_kernel_exact("sinhc_sqrt", order))
        return list((num / den).coeffs)
    raise ValueError(f"unknown kernel kind {kind!r}; expected one of {KERNEL_KINDS}")


def kernel_series(kind: str, order: int, exact: bool = True) -> TruncatedSeries:
    """Taylor coefficients of a named kernel in the variable z about 0.

    Kinds: cos_sqrt(z) = cos(sqrt z), sinc_sqrt(z) = sin(sqrt z)/sqrt z,
    cosh_sqrt and sinhc_sqrt likewise, tan_sq_sqrt(z) = tan(sqrt z)**2,
    sqrtcoth(z) = sqrt(z) * coth(sqrt z), exp, and sqrt1p(z) = sqrt(1+z).
    """
    if kind not in KERNEL_KINDS:
        raise ValueError(f"unknown kernel kind {kind!r}; expected one of {KERNEL_KINDS}")
    if not 0 <= order <= MAX_KERNEL_ORDER:
        raise ValueError(f"kernel order must be in 0..{MAX_KERNEL_ORDER}, got {order}")
    series = TruncatedSeries(_kernel_exact(kind, order), "z")
    return series if exact else series.to_float()


def kernel_value(kind: str, z: float) -> float:
    """Evaluate a kernel at a real argument, on either side of zero.

    Negative arguments use the hyperbolic/trigonometric continuation of
    the same analytic function, e.g. tan_sq_sqrt(-v) = -tanh(sqrt v)**2.
    """
    z = float(z)
    if kind == "exp":
        return math.exp(z)
    if kind == "sqrt1p":
        if z < -1.0:
            raise ValueError(f"sqrt1p needs an argument >= -1, got {z}")
        return math.sqrt(1.0 + z)
    if kind not in KERNEL_KINDS:
        raise ValueError(f"unknown kernel kind {kind!r}; expected one of {KERNEL_KINDS}")
    x = math.sqrt(abs(z))
    if kind == "cos_sqrt":
        return math.cos(x) if z >= 0.0 else math.cosh(x)
    if kind == "cosh_sqrt":
        return math.cosh(x) if z >= 0.0 else math.cos(x)
    if kind == "sinc_sqrt":
        if x == 0.0:
            return 1.0
        return math.sin(x) / x if z >= 0.0 else math.sinh(x) / x
    if kind == "sinhc_sqrt":
        if x == 0.0:
            return 1.0
        return math.sinh(x) / x if z >= 0.0 else math.sin(x) / x
    if kind == "tan_sq_sqrt":
        if z >= 0.0:
            t = math.tan(x)
            return t * t
        t = math.tanh(x)
        return -t * t
    # sqrtcoth
    if x == 0.0:
        return 1.0
    if z >= 0.0:
        return x / math.tanh(x)
    s = math.sin(x)
    # x cot x has poles at multiples of pi; exact float zeros never land
    # there, so guard on closeness instead of equality.
    if abs(s) < 1e-12 * max(1.0, x):
        raise NumericalError(f"sqrtcoth pole at z = {z}")
    return x * math.cos(x) / s


# -- implicit series solving ------------------------------------------


@dataclass(frozen=True)
class SeriesRelation:
    """A quantization condition F(energy, coupling) = 0 in series form.

    ``residual`` maps a candidate energy series e(x) to the series of
    F(e(x), x); ``derivative`` maps it to the series of the partial
    derivative of F with respect to the energy along the same curve.
    The derivative is supplied by hand per model: each condition here
    is built from a handful of kernels, so its closed-form derivative
    is short, exact, and cheaper than any automatic scheme.

    ``leading_order`` is the power of the coupling at which the solved
    energy starts (2 for the bare wells, 1 after splitting off a
    constant in regulated variants).
    """

    residual: Callable[[TruncatedSeries], TruncatedSeries]
    derivative: Callable[[TruncatedSeries], TruncatedSeries]
    leading_order: int = 2
    name: str = ""


def newton_implicit_series(
    relation: SeriesRelation,
    order: int,
    exact: bool = True,
    variable: str = "lambda",
) -> TruncatedSeries:
    """Solve F(e(x), x) = 0 for the energy series e through ``order``.

    Newton iteration in the series ring doubles the number of correct
    coefficients per step, so the cap of log2(order) + 4 steps leaves
    generous headroom.  The condition must be nondegenerate: the energy
    derivative of F must not vanish at the origin, else no power-series
    branch is selected and a NumericalError is raised.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    eps = TruncatedSeries.zero(order, exact=exact, variable=variable)
    d0 = relation.derivative(eps).coeffs[0]
    degenerate = (d0 == 0) if exact else (not math.isfinite(float(d0)) or abs(float(d0)) < 1e-300)
    if degenerate:
        raise NumericalError(
            "implicit function theorem violated: the energy derivative of "
            f"{relation.name or 'the condition'} vanishes at the origin"
        )
    def clamp_leading(series: TruncatedSeries) -> TruncatedSeries:
        # The solution starts at relation.leading_order by construction;
        # forcing the lower coefficients to zero removes rounding noise
        # that would otherwise break nilpotency downstream.
        lead = min(relation.leading_order, series.order + 1)
        if lead <= 0 or all(c == 0 for c in series.coeffs[:lead]):
            return series
        zero = 0 if exact else 0.0
        coeffs = (zero,) * lead + series.coeffs[lead:]
        return TruncatedSeries(coeffs, variable=series.variable)

    cap = max(order, 1).bit_length() + 4
    for _ in range(cap):
        res = relation.residual(eps)
        slope = relation.derivative(eps)
        update = res / slope
        new = clamp_leading(eps - update)
        if not exact:
            bad = [c for c in new.coeffs if not math.isfinite(c)]
            if bad:
                raise NumericalError(
                    f"precision exhausted in {relation.name or 'implicit solve'}: non-finite coefficient"
                )
        if exact:
            if new == eps:
                return eps
        else:
            scale = 1.0 + max(abs(c) for c in eps.coeffs)
            if max(abs(a - b) for a, b in zip(new.coeffs, eps.coeffs)) <= 1e-13 * scale:
                return new
        eps = new
    # The loop should have reached its fixed point well inside the cap.
    check = relation.residual(eps)
    if exact and all(c == 0 for c in check.coeffs):
        return eps
    raise NumericalError(
        f"divergent iteration solving {relation.name or 'implicit series'} through order {order}"
    )


@dataclass(frozen=True)
class EnergySeries:
    """An energy expansion together with labels describing how it was built."""

    series: TruncatedSeries
    variable: str = "lambda"
    label: str = ""

    @property
    def order(self) -> int:
        return self.series.order

    @property
    def coefficients(self) -> tuple:
        return self.series.coeffs
