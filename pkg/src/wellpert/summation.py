"""Series summation: Pade approximants, their quadratic (algebraic)
generalization, two-point approximants matching both ends of the
strength axis, and ratio-based radius-of-convergence estimation.

All linear systems are solved exactly over rationals when the input
series is rational, so degeneracy detection is exact; float input falls
back to numpy linear algebra with conditioning checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .numeric import NumericalError
from .series import TruncatedSeries


# -- exact linear algebra helpers ------------------------------------------


def _solve_exact(matrix, rhs):
    """Gaussian elimination over Fractions; returns None when singular."""
    n = len(rhs)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col] / inv
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _solve_float(matrix, rhs):
    a = np.array(matrix, dtype=float)
    b = np.array(rhs, dtype=float)
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(x)) or np.linalg.cond(a) > 1e13:
        return None
    return [float(v) for v in x]


def _nullspace_exact(matrix, ncols):
    """Basis of the exact null space via reduced row echelon form."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rows[i][f]
        basis.append(vec)
    return basis


def _poly_eval(coeffs: Sequence, x: float) -> float:
    total = 0.0
    for c in reversed(list(coeffs)):
        total = total * x + float(c)
    return total


def _trim(coeffs):
    last = 0
    for i, c in enumerate(coeffs):
        if c != 0:
            last = i
    return tuple(coeffs[: last + 1])


# -- Pade approximants -------------------------------------------------------


@dataclass(frozen=True)
class PadeApproximant:
    """Rational function N/D whose Taylor expansion reproduces the input
    series through numerator_degree + denominator_degree.  When the
    requested denominator degree led to a singular system, the degrees
    record the reduced table entry actually built."""

    numerator: tuple
    denominator: tuple
    requested: tuple
    variable: str

    @property
    def numerator_degree(self) -> int:
        return len(self.numerator) - 1

    @property
    def denominator_degree(self) -> int:
        return len(self.denominator) - 1

    @property
    def reduced(self) -> bool:
        return (self.numerator_degree, self.denominator_degree) != self.requested

    def evaluate(self, x: float) -> float:
        return _poly_eval(self.numerator, x) / _poly_eval(self.denominator, x)

    def expansion(self, order: int) -> TruncatedSeries:
        num = TruncatedSeries(list(self.numerator) + [0] * (order + 1 - len(self.numerator)), self.variable)
        den = TruncatedSeries(list(self.denominator) + [0] * (order + 1 - len(self.denominator)), self.variable)
        return num / den


def pade(series: TruncatedSeries, l_deg: int, m_deg: int) -> PadeApproximant:
    """[l_deg / m_deg] Pade approximant of a truncated series.

    The denominator coefficients solve the standard aliasing system on
    coefficients l_deg+1 .. l_deg+m_deg.  A singular system means the
    requested table entry is degenerate; the denominator degree is then
    reduced until the system becomes regular, and the result records the
    reduction.  If every reduced system down to degree 1 is singular the
    table column is degenerate and no approximant is produced.
    """
    if not (isinstance(l_deg, int) and isinstance(m_deg, int) and l_deg >= 0 and m_deg >= 0):
        raise ValueError("degrees must be nonnegative integers")
    if series.order < l_deg + m_deg:
        raise ValueError(
            f"series order {series.order} is too short for [{l_deg}/{m_deg}]"
        )
    c = list(series.coeffs)
    exact = series.domain == "rational"
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0

    def coeff(k: int):
        return c[k] if 0 <= k <= series.order else zero

    for m in range(m_deg, -1, -1):
        if m == 0:
            if m_deg > 0:
                raise NumericalError(
                    f"degenerate Pade table entry: [{l_deg}/{m_deg}] and every "
                    "reduced denominator degree give a singular system"
                )
            b = []
        else:
            rows = [[coeff(l_deg + 1 + r - s) for s in range(1, m + 1)] for r in range(m)]
            rhs = [-coeff(l_deg + 1 + r) for r in range(m)]
            b = (_solve_exact if exact else _solve_float)(rows, rhs)
            if b is None:
                continue
        den = [one] + list(b)
        num = [
            sum(den[i] * coeff(k - i) for i in range(0, min(k, m) + 1))
            for k in range(l_deg + 1)
        ]
        return PadeApproximant(
            numerator=_trim(num) if any(x != 0 for x in num) else (zero,),
            denominator=tuple(den),
            requested=(l_deg, m_deg),
            variable=series.variable,
        )
    raise NumericalError("degenerate Pade table entry")  # pragma: no cover


# -- quadratic (algebraic) approximants --------------------------------------


@dataclass(frozen=True)
class QuadraticPade:
    """Polynomials (P, Q, R) with P + Q f + R f^2 vanishing through order
    p+q+r+1 against the input series f.  Evaluation solves the quadratic
    for the branch that follows the series near the origin; ``branch``
    records the chosen sign of the square root."""

    p: tuple
    q: tuple
    r: tuple
    degrees: tuple
    variable: str
    branch: int

    def discriminant(self, x: float) -> float:
        qv = _poly_eval(self.q, x)
        return qv * qv - 4.0 * _poly_eval(self.r, x) * _poly_eval(self.p, x)

    def roots(self, x: float) -> tuple:
        pv, qv, rv = (_poly_eval(t, x) for t in (self.p, self.q, self.r))
        if rv == 0.0:
            if qv == 0.0:
                raise NumericalError("degenerate system: Q and R both vanish at the point")
            root = -pv / qv
            return (root, root)
        disc = qv * qv - 4.0 * rv * pv
        if disc < 0.0:
            raise NumericalError(
                "complex branch: the discriminant is negative; the conjugate roots are "
                f"{(-qv / (2 * rv))!r} +/- {(math.sqrt(-disc) / (2 * abs(rv)))!r} i"
            )
        s = math.sqrt(disc)
        return ((-qv + s) / (2.0 * rv), (-qv - s) / (2.0 * rv))

    def evaluate(self, x: float) -> float:
        pair = self.roots(x)
        return pair[0] if self.branch > 0 else pair[1]


def quadratic_pade(series: TruncatedSeries, degrees: Tuple[int, int, int]) -> QuadraticPade:
    """Hermite-style quadratic approximant of a truncated series.

    Solves the homogeneous system requiring P + Q f + R f^2 = O(x^(p+q+r+2)),
    normalizing the first nonzero coefficient of R (or of Q when R is
    identically zero) to 1.  The returned branch is the quadratic root
    that tracks the series at a small probe point.
    """
    p_deg, q_deg, r_deg = degrees
    if min(degrees) < 0:
        raise ValueError("degrees must be nonnegative")
    total = p_deg + q_deg + r_deg
    if series.order < total + 1:
        raise ValueError(
            f"series order {series.order} is too short for degrees {degrees}; need {total + 1}"
        )
    exact = series.domain == "rational"
    work_order = total + 1
    f = series.truncate(work_order) if series.order > work_order else series.pad(work_order)
    f2 = f * f
    ncols = total + 3
    rows = []
    for k in range(total + 2):
        row = []
        for i in range(p_deg + 1):
            row.append(1 if i == k else 0)
        for i in range(q_deg + 1):
            row.append(f.coeffs[k - i] if 0 <= k - i else 0)
        for i in range(r_deg + 1):
            row.append(f2.coeffs[k - i] if 0 <= k - i else 0)
        rows.append(row)
    if exact:
        basis = _nullspace_exact(rows, ncols)
    else:
        a = np.array([[float(x) for x in row] for row in rows])
        _, sing, vt = np.linalg.svd(a)
        tol = max(a.shape) * (sing[0] if sing.size else 1.0) * 1e-13
        basis = [vt[i] for i in range(vt.shape[0]) if i >= len(sing) or sing[i] <= tol]
        basis = [list(v) for v in basis[::-1]]
    nz = (lambda x: x != 0) if exact else (lambda x: abs(x) > 1e-10)
    chosen = None
    for vec in basis:
        p_block = vec[: p_deg + 1]
        q_part = vec[p_deg + 1 : p_deg + q_deg + 2]
        r_part = vec[p_deg + q_deg + 2 :]
        # With P and Q both identically zero the vector encodes y^2 = 0,
        # which matches any series starting late enough but determines
        # nothing; only vectors with a live P or Q pin the root.
        if not any(nz(x) for x in q_part) and not any(nz(x) for x in p_block):
            continue
        if chosen is None:
            chosen = vec
        if any(nz(x) for x in r_part):
            chosen = vec
            break
    if chosen is None:
        raise NumericalError(
            "degenerate system: the quadratic matching system has no usable null vector"
        )
    p_part = chosen[: p_deg + 1]
    q_part = chosen[p_deg + 1 : p_deg + q_deg + 2]
    r_part = chosen[p_deg + q_deg + 2 :]
    norm = next((x for x in r_part if nz(x)), None)
    if norm is None:
        norm = next(x for x in q_part if nz(x))
    p_part = [x / norm for x in p_part]
    q_part = [x / norm for x in q_part]
    r_part = [x / norm for x in r_part]
    approx = QuadraticPade(
        p=tuple(p_part),
        q=tuple(q_part),
        r=tuple(r_part),
        degrees=degrees,
        variable=series.variable,
        branch=+1,
    )
    probe = 0.01
    target = sum(float(c) * probe**k for k, c in enumerate(series.coeffs))
    try:
        plus, minus = approx.roots(probe)
    except NumericalError:
        probe = 1e-4
        target = sum(float(c) * probe**k for k, c in enumerate(series.coeffs))
        plus, minus = approx.roots(probe)
    branch = +1 if abs(plus - target) <= abs(minus - target) else -1
    return QuadraticPade(
        p=approx.p, q=approx.q, r=approx.r, degrees=degrees,
        variable=series.variable, branch=branch,
    )


# -- two-point approximants ---------------------------------------------------


@dataclass(frozen=True)
class TwoPointPade:
    """Rational function in u = sqrt(x) matching the series at the origin
    and the prescribed power behavior at infinity.

    The numerator degree exceeds the denominator degree by exactly 2, so
    the function grows like slope * x at large x.  When the matching
    system zeroes the top denominator coefficient the nominal slope
    condition is vacuous; ``degenerate_top`` records that, and
    ``effective_slope`` reports the realized large-x slope."""

    numerator: tuple  # coefficients in u, ascending, starting at u^0
    denominator: tuple
    p_small: int
    q_large: int
    slope: float
    subleading: Optional[float]

    @property
    def degenerate_top(self) -> bool:
        return self.denominator[-1] == 0

    @property
    def effective_slope(self) -> float:
        n_lead = max((i for i, c in enumerate(self.numerator) if c != 0), default=-1)
        d_lead = max((i for i, c in enumerate(self.denominator) if c != 0), default=-1)
        if n_lead < 0 or n_lead - d_lead != 2:
            return 0.0
        return float(self.numerator[n_lead]) / float(self.denominator[d_lead])

    def evaluate(self, x: float) -> float:
        if x < 0:
            raise ValueError("two-point evaluation needs x >= 0 (u = sqrt(x))")
        u = math.sqrt(x)
        return _poly_eval(self.numerator, u) / _poly_eval(self.denominator, u)


def two_point_pade(
    series: TruncatedSeries,
    p_small: int,
    q_large: int,
    slope: float = -1.0,
    subleading: Optional[float] = None,
) -> TwoPointPade:
    """Approximant matching p_small coefficients at 0 and q_large at infinity.

    Works in u = sqrt(x).  With denominator degree d the free parameters
    are a_4..a_(d+2) and b_1..b_d, 2d-1 in all, so p_small + q_large
    must be odd.  Small-end conditions equate the u^4..u^(p_small+3)
    coefficients of D * f and N; the large-end conditions pin the slope
    (a_(d+2) = slope * b_d) and, when q_large = 2, the subleading
    sqrt(x) coefficient.
    """
    if not (p_small >= 1 and q_large in (1, 2)):
        raise ValueError("need p_small >= 1 and q_large in {1, 2}")
    if (p_small + q_large) % 2 == 0:
        raise ValueError(
            f"no two-point approximant at these orders: p_small + q_large = "
            f"{p_small + q_large} must be odd to balance the parameter count"
        )
    if q_large == 2 and subleading is None:
        raise ValueError("the second large-x condition needs the subleading coefficient")
    if series.order < p_small:
        raise ValueError(f"series order {series.order} is too short for p_small={p_small}")
    if series.coeffs[0] != 0 or (series.order >= 1 and series.coeffs[1] != 0):
        raise ValueError("the series must start at second order (bound-state energies do)")
    d = (p_small + q_large + 1) // 2
    # binary floats are exact rationals, so a rational series keeps the
    # whole computation exact whatever the prescribed slope
    exact = series.domain == "rational"

    def tcoeff(m: int):
        # coefficient of u^m of the target: series coefficient of x^(m/2)
        if m % 2 or m // 2 > series.order:
            return Fraction(0) if exact else 0.0
        value = series.coeffs[m // 2]
        return value if exact else float(value)

    slope_c = Fraction(slope) if exact else float(slope)
    sub_c = None
    if subleading is not None:
        sub_c = Fraction(subleading) if exact else float(subleading)
    nunk = 2 * d - 1  # a_4..a_(d+2), then b_1..b_d
    rows = []
    rhs = []
    zero = Fraction(0) if exact else 0.0

    def a_col(k: int) -> Optional[int]:
        return k - 4 if 4 <= k <= d + 2 else None

    one = Fraction(1) if exact else 1.0
    # unknown layout: columns 0..d-2 hold a_4..a_(d+2); columns d-1..2d-2
    # hold b_1..b_d (b_0 = 1 is folded into the right-hand sides)
    for k in range(4, p_small + 4):
        row = [zero] * nunk
        col = a_col(k)
        if col is not None:
            row[col] = -one
        for i in range(1, d + 1):
            row[d + i - 2] = tcoeff(k - i)
        rows.append(row)
        rhs.append(-tcoeff(k))
    row = [zero] * nunk
    row[a_col(d + 2)] = one
    row[2 * d - 2] = -slope_c
    rows.append(row)
    rhs.append(zero)
    if q_large == 2:
        row = [zero] * nunk
        col = a_col(d + 1)
        if col is not None:
            row[col] = one
        row[2 * d - 2] = -sub_c
        if d >= 2:
            row[2 * d - 3] = -slope_c
            rhs.append(zero)
        else:
            rhs.append(slope_c)
        rows.append(row)
    solution = (_solve_exact if exact else _solve_float)(rows, rhs)
    if solution is None:
        raise NumericalError(
            "no two-point approximant at these orders: the matching system is singular"
        )
    a = solution[: d - 1]
    b = solution[d - 1 :]
    numerator = [zero, zero, zero, zero] + list(a)
    denominator = [one] + list(b)
    return TwoPointPade(
        numerator=tuple(numerator),
        denominator=tuple(denominator),
        p_small=p_small,
        q_large=q_large,
        slope=float(slope),
        subleading=None if subleading is None else float(subleading),
    )


# -- radius of convergence ----------------------------------------------------


@dataclass(frozen=True)
class RadiusEstimate:
    """Extrapolated convergence radius and the sign of the limiting
    singularity's position on the real axis."""

    radius: float
    singularity_sign: int
    terms_used: int


def radius_estimate(series: TruncatedSeries) -> RadiusEstimate:
    """Ratio-plot estimate of the nearest singularity.

    Consecutive-coefficient ratios |c_j / c_(j+1)| are extrapolated
    linearly in 1/j to j -> infinity with a Neville table on the last
    five ratios.  Strictly alternating tail signs place the singularity
    on the negative axis.
    """
    coeffs = [float(c) for c in series.coeffs]
    start = next((i for i, c in enumerate(coeffs) if c != 0.0), len(coeffs))
    tail = coeffs[start:]
    if any(c == 0.0 for c in tail) or len(tail) < 10:
        nonzero = sum(1 for c in tail if c != 0.0)
        raise ValueError(
            "no reliable estimate: need at least 10 consecutive nonzero coefficients, "
            f"got {nonzero if not any(c == 0.0 for c in tail) else 'a gap in the tail'}"
            f" (tail length {len(tail)})"
        )
    js = list(range(start, start + len(tail) - 1))
    ratios = [abs(tail[i] / tail[i + 1]) for i in range(len(tail) - 1)]
    pts = list(zip(js, ratios))[-5:]
    xs = [1.0 / j for j, _ in pts]
    table = [r for _, r in pts]
    estimates = [table[-1]]
    n = len(table)
    for level in range(1, n):
        new = []
        for i in range(n - level):
            x0, x1 = xs[i], xs[i + level]
            new.append(((0.0 - x1) * table[i] - (0.0 - x0) * table[i + 1]) / (x0 - x1))
        table = new
        estimates.append(table[-1])
    radius = table[0]
    last_step = abs(estimates[-1] - estimates[-2])
    if not math.isfinite(radius) or radius <= 0.0 or radius < 1e-6 * ratios[-1] or (
        last_step > 0.5 * abs(radius)
    ):
        raise NumericalError(
            "no reliable estimate: the ratio sequence is not settling "
            f"(last ratios {ratios[-3:]!r}, extrapolation steps {estimates!r})"
        )
    signs = [1 if tail[i] > 0 else -1 for i in range(len(tail) - 6, len(tail))]
    alternating = all(signs[i] != signs[i + 1] for i in range(len(signs) - 1))
    constant = all(signs[i] == signs[i + 1] for i in range(len(signs) - 1))
    if not (alternating or constant):
        raise NumericalError(
            "no reliable estimate: coefficient signs neither settle nor alternate "
            f"(tail signs {signs!r})"
        )
    return RadiusEstimate(
        radius=radius,
        singularity_sign=-1 if alternating else +1,
        terms_used=len(tail),
    )
