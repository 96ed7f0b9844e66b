"""Root finding, quadrature nodes, and small dense eigenproblems.

Everything in this module is generic numerics: no knowledge of potentials
or series lives here.  Routines raise :class:`NumericalError` for runtime
failures (lost brackets, singular Jacobians, stalled iterations) so callers
can distinguish them from bad arguments, which raise ``ValueError``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np


class NumericalError(Exception):
    """An iteration failed to converge or a numerical premise was violated."""


@dataclass(frozen=True)
class Bracket:
    """A closed interval [lo, hi] believed to contain a root."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("bracket endpoints must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _eval_checked(f: Callable[[float], float], x: float) -> float:
    try:
        y = f(x)
    except (ArithmeticError, ValueError) as exc:
        raise NumericalError(f"evaluation failure at x={x!r}: {exc}") from exc
    y = float(y)
    if not math.isfinite(y):
        raise NumericalError(f"evaluation failure at x={x!r}: non-finite value {y!r}")
    return y


def solve_bracketed(
    f: Callable[[float], float],
    bracket: Bracket,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Find a root of ``f`` inside ``bracket``.

    Uses secant steps guarded by bisection: whenever two consecutive
    iterations fail to halve the enclosing interval, the next step is a
    forced bisection, so convergence is never worse than bisection while
    smooth problems get superlinear behaviour.

    Parameters
    ----------
    f : callable
        Continuous function with a sign change on the bracket.
    bracket : Bracket
        Interval with f(lo) and f(hi) of opposite sign.
    tol : float
        Absolute half-width at which the enclosure is accepted.
    max_iter : int
        Iteration cap before giving up.

    Returns
    -------
    float
        Point where ``f`` vanishes to within ``tol``.

    Raises
    ------
    NumericalError
        If the bracket does not straddle a sign change, an evaluation
        fails, or the cap is reached.
    """
    lo, hi = bracket.lo, bracket.hi
    flo = _eval_checked(f, lo)
    fhi = _eval_checked(f, hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise NumericalError(
            f"invalid bracket: f({lo}) = {flo} and f({hi}) = {fhi} have the same sign"
        )

    width_two_ago = hi - lo
    for iteration in range(max_iter):
        width = hi - lo
        if width <= 2.0 * tol:
            return 0.5 * (lo + hi)
        # Secant proposal from the current endpoints.  Fall back to the
        # midpoint when it degenerates or when progress has stalled.
        force_bisect = iteration >= 2 and width > 0.5 * width_two_ago
        if force_bisect or fhi == flo:
            x = 0.5 * (lo + hi)
        else:
            x = hi - fhi * (hi - lo) / (fhi - flo)
            margin = 0.01 * width
            if not (lo + margin < x < hi - margin):
                x = 0.5 * (lo + hi)
        fx = _eval_checked(f, x)
        width_two_ago = width if iteration % 2 == 0 else width_two_ago
        if fx == 0.0:
            return x
        if math.copysign(1.0, fx) == math.copysign(1.0, flo):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
    raise NumericalError(
        f"no convergence: bracket width {hi - lo:.3e} after {max_iter} iterations"
    )


def newton_2d(
    f: Callable[[Sequence[float]], Sequence[float]],
    x0: Sequence[float],
    tol: float = 1e-12,
    max_iter: int = 100,
) -> tuple[float, float]:
    """Damped Newton iteration for a two-dimensional system f(x) = 0.

    The Jacobian is formed by central differences with per-component step
    ``1e-6 * max(1, |x_i|)``.  Each Newton step is halved (up to 30 times)
    until the residual norm decreases, which keeps the iteration from
    jumping out of the basin on stiff systems.

    Returns the root as a (x, y) pair.  Raises NumericalError with
    "singular system" when the Jacobian cannot be inverted and
    "no convergence" when the cap is exhausted.
    """
    x = np.asarray([float(v) for v in x0], dtype=float)
    if x.shape != (2,):
        raise ValueError("x0 must have exactly two components")

    def residual(p: np.ndarray) -> np.ndarray:
        r = np.asarray(f(p), dtype=float)
        if r.shape != (2,):
            raise ValueError("f must return exactly two components")
        if not np.all(np.isfinite(r)):
            raise NumericalError(f"evaluation failure at {p.tolist()}: non-finite residual")
        return r

    r = residual(x)
    for _ in range(max_iter):
        rnorm = float(np.hypot(r[0], r[1]))
        if rnorm <= tol:
            return float(x[0]), float(x[1])
        jac = np.empty((2, 2))
        for i in range(2):
            h = 1e-6 * max(1.0, abs(x[i]))
            xp = x.copy()
            xm = x.copy()
            xp[i] += h
            xm[i] -= h
            jac[:, i] = (residual(xp) - residual(xm)) / (2.0 * h)
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"singular system at {x.tolist()}") from exc
        if not np.all(np.isfinite(step)):
            raise NumericalError(f"singular system at {x.tolist()}")
        scale = 1.0
        for _half in range(30):
            trial = x + scale * step
            r_trial = residual(trial)
            if float(np.hypot(r_trial[0], r_trial[1])) < rnorm:
                x, r = trial, r_trial
                break
            scale *= 0.5
        else:
            raise NumericalError(
                f"no convergence: damping exhausted at {x.tolist()}, residual {rnorm:.3e}"
            )
    if float(np.hypot(r[0], r[1])) <= tol:
        return float(x[0]), float(x[1])
    raise NumericalError(f"no convergence after {max_iter} iterations, residual {r.tolist()}")


class QuadratureRule(NamedTuple):
    """Nodes and weights for integration on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray

    def mapped(self, a: float, b: float) -> "QuadratureRule":
        """Affine image of the rule on the interval [a, b]."""
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        return QuadratureRule(mid + half * self.nodes, half * self.weights)


def gauss_legendre(order: int) -> QuadratureRule:
    """Gauss-Legendre rule of the given order on [-1, 1].

    Exact for polynomials of degree 2*order - 1.  Orders outside
    1..256 are rejected; nothing in this package needs more.
    """
    if not isinstance(order, int) or isinstance(order, bool):
        raise ValueError("unsupported order: quadrature order must be an integer")
    if not 1 <= order <= 256:
        raise ValueError(f"unsupported order {order}: must be in 1..256")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return QuadratureRule(nodes, weights)


def symmetric_eigen_lowest(matrix: np.ndarray) -> float:
    """Lowest eigenvalue of a real symmetric matrix.

    The input must be symmetric to within 1e-12 * (1 + max |entry|);
    asymmetry that large means the caller assembled the matrix wrong,
    so it is a ValueError rather than something to silence by averaging.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = 1.0 + float(np.max(np.abs(m)))
    if float(np.max(np.abs(m - m.T))) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    values = np.linalg.eigvalsh(m)
    return float(values[0])
