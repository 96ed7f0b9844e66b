"""Multidimensional strength-series integrals, orders one through four.

The expansion of -sqrt(-eps) in powers of the strength has coefficients
w_j given by j-dimensional integrals of products of the profile against
piecewise-polynomial kernels of the coordinates.  Every |x - y| factor
is resolved by integrating over the ordered simplex x1 <= ... <= xj with
the kernel symmetrized over the j! relabelings; the symmetrized kernels
below were expanded once, exactly, and are frozen here.  Each coordinate
axis is split into panels so that the profile is analytic inside every
cell, then cells are integrated by tensor Gauss-Legendre with ordered
same-panel groups mapped through a nested affine chain.

Quadrature results are always produced twice, at the requested order and
a coarser one; the difference is the reported error estimate and the
convergence guard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations
from typing import Optional, Sequence

import numpy as np

from .models import ModelSpec, potential
from .numeric import NumericalError, QuadratureRule, gauss_legendre
from .series import EnergySeries, TruncatedSeries

MAX_INTEGRAL_ORDER = 4

# 1/prefactor for each order: w_j = (1/denominator) * integral.
PREFACTOR_DENOMINATORS = (2, 4, 48, 96)


@dataclass(frozen=True)
class IntegrationDomain:
    """Axis decomposition for the strength-series integrals.

    ``kind`` is "finite_box" (profile supported on [-cutoff, cutoff])
    or "exponential_tail" (profile decays like exp(-decay * |x|), box
    truncated at +-cutoff).  ``half_edges`` lists the panel boundaries
    on (0, cutoff]; the axis is split symmetrically, with an edge at 0
    for tail domains so the |x| kink never sits inside a panel.
    """

    kind: str
    cutoff: float
    decay: float = 1.0
    half_edges: tuple = ()
    gl_order: int = 24

    def __post_init__(self) -> None:
        if self.kind not in ("finite_box", "exponential_tail"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if not self.cutoff > 0:
            raise ValueError("cutoff must be positive")
        if self.kind == "exponential_tail" and not self.decay > 0:
            raise ValueError("decay rate must be positive")
        edges = tuple(float(e) for e in self.half_edges) or (float(self.cutoff),)
        if list(edges) != sorted(set(edges)) or edges[0] <= 0 or edges[-1] != float(self.cutoff):
            raise ValueError("half_edges must increase strictly and end at the cutoff")
        object.__setattr__(self, "half_edges", edges)

    @property
    def subdivisions(self) -> int:
        """Panels per axis."""
        return len(self.axis_edges()) - 1

    def axis_edges(self) -> list:
        inner = [e for e in self.half_edges]
        if self.kind == "finite_box":
            return [-e for e in reversed(inner)] + list(inner)
        return [-e for e in reversed(inner)] + [0.0] + list(inner)

    def tail_bound(self, j: int, kernel_degree: int) -> float:
        """Conservative bound on the neglected tail of the j-fold integral.

        For a profile bounded by exp(-decay |x|), sending one coordinate
        beyond the cutoff X costs at most
        j * 2^j * (2X)^degree * X^(j-1) * exp(-decay X) / decay^j
        relative to the raw integral (before the 1/denominator), which
        the default domains keep below 1e-12 at every order.
        """
        if self.kind == "finite_box":
            return 0.0
        x = self.cutoff
        return (
            j
            * 2.0**j
            * (2.0 * x) ** kernel_degree
            * x ** (j - 1)
            * math.exp(-self.decay * x)
            / self.decay**j
        )


DEFAULT_DOMAINS = {
    "square": IntegrationDomain(kind="finite_box", cutoff=1.0),
    "exponential": IntegrationDomain(
        kind="exponential_tail", cutoff=60.0, decay=1.0, half_edges=(5.0, 40.0, 60.0)
    ),
    "poschl_teller": IntegrationDomain(
        kind="exponential_tail", cutoff=28.0, decay=2.0, half_edges=(3.0, 28.0)
    ),
}


def default_domain(model_id: str) -> IntegrationDomain:
    if model_id == "delta":
        raise ValueError("not available: the pointlike well is integrated analytically")
    if model_id not in DEFAULT_DOMAINS:
        raise ValueError(f"unknown model {model_id!r}")
    return DEFAULT_DOMAINS[model_id]


# -- kernels -------------------------------------------------------------


def _kernel_symmetrized(j: int, x: np.ndarray) -> np.ndarray:
    """Kernel summed over the j! relabelings, on the ordered simplex.

    ``x`` has shape (j, npoints) with x[0] <= x[1] <= ... <= x[j-1]
    pointwise.  The order-4 form is written in the gap variables
    (u, v, w) = consecutive differences.
    """
    if j == 1:
        return np.ones_like(x[0])
    if j == 2:
        return 2.0 * (x[1] - x[0])
    if j == 3:
        d = x[2] - x[0]
        return 24.0 * d * d
    u = x[1] - x[0]
    v = x[2] - x[1]
    w = x[3] - x[2]
    return 16.0 * (
        3.0 * u**3
        + 12.0 * u**2 * v
        + 9.0 * u**2 * w
        + 18.0 * u * v**2
        + 24.0 * u * v * w
        + 9.0 * u * w**2
        + 10.0 * v**3
        + 18.0 * v**2 * w
        + 12.0 * v * w**2
        + 3.0 * w**3
    )


def _kernel_raw(j: int, x: np.ndarray) -> np.ndarray:
    """The unsymmetrized kernel, valid for any coordinate ordering."""
    if j == 1:
        return np.ones_like(x[0])
    if j == 2:
        return np.abs(x[0] - x[1])
    if j == 3:
        s = np.abs(x[0] - x[1]) + np.abs(x[1] - x[2]) + np.abs(x[2] - x[0])
        return s * s
    axy = np.abs(x[0] - x[1])
    axz = np.abs(x[0] - x[2])
    azt = np.abs(x[2] - x[3])
    return axy**3 + 6.0 * axy**2 * axz + 3.0 * axy**2 * azt + 6.0 * axy * axz * azt


KERNEL_DEGREES = (0, 1, 2, 3)


# -- ordered-simplex quadrature ------------------------------------------


def _ordered_chain(a: float, b: float, count: int, rule: QuadratureRule):
    """Nodes/weights for count ordered coordinates in a single panel.

    Integrates f over a <= t_1 <= ... <= t_count <= b as the iterated
    integral; each level maps the rule onto [t_prev, b].  Returns
    (coords, weights) with coords of shape (count, q**count).
    """
    nodes = rule.nodes
    weights = rule.weights
    q = nodes.size
    shifted = 0.5 * (nodes + 1.0)  # in [0, 1]
    lower = np.array([a])
    w = np.array([1.0])
    levels = []
    for _ in range(count):
        span = b - lower  # (S,)
        t = lower[:, None] + span[:, None] * shifted[None, :]  # (S, q)
        w = (w[:, None] * (0.5 * span[:, None]) * weights[None, :]).ravel()
        levels = [lv.repeat(q) for lv in levels]
        levels.append(t.ravel())
        lower = levels[-1]
    coords = np.vstack(levels)
    return coords, w


def _cell_grid(groups, rule: QuadratureRule):
    """Tensor grid for one ordered cell.

    ``groups`` is a list of ((a, b), count) in increasing panel order;
    coordinates in different panels are independent, coordinates that
    share a panel stay ordered inside it.
    """
    coord_blocks = []
    weight_blocks = []
    for (a, b), count in groups:
        c, w = _ordered_chain(a, b, count, rule)
        coord_blocks.append(c)
        weight_blocks.append(w)
    total = 1
    sizes = [w.size for w in weight_blocks]
    for s in sizes:
        total *= s
    coords = np.empty((sum(c.shape[0] for c in coord_blocks), total))
    weights = np.ones(total)
    row = 0
    left = 1
    right = total
    for c, w, s in zip(coord_blocks, weight_blocks, sizes):
        right //= s
        reps_shape = (left, s, right)
        idx = np.broadcast_to(np.arange(s)[None, :, None], reps_shape).ravel()
        coords[row : row + c.shape[0], :] = c[:, idx]
        weights *= w[idx]
        row += c.shape[0]
        left *= s
    return coords, weights


def _integrate_ordered(model_id: str, j: int, dom: IntegrationDomain, gl: int, raw: bool, perm) -> float:
    """Integral over the ordered simplex of v-product times a kernel.

    With raw=False the symmetrized kernel is used (one simplex covers
    the whole cube).  With raw=True the unsymmetrized kernel is
    evaluated with coordinates relabeled by ``perm``, the contribution
    of one particular simplex.
    """
    edges = dom.axis_edges()
    rule = gauss_legendre(gl)
    panels = list(zip(edges[:-1], edges[1:]))
    total = 0.0
    for assignment in combinations_with_replacement(range(len(panels)), j):
        groups = []
        for p in assignment:
            if groups and groups[-1][0] == p:
                groups[-1][1] += 1
            else:
                groups.append([p, 1])
        coords, weights = _cell_grid([(panels[p], g) for p, g in groups], rule)
        vprod = np.ones_like(weights)
        for i in range(j):
            vprod *= potential(model_id, coords[i])
        if raw:
            kern = _kernel_raw(j, coords[list(perm)])
        else:
            kern = _kernel_symmetrized(j, coords)
        total += float(np.sum(weights * vprod * kern))
    return total


# -- public API ------------------------------------------------------------


@dataclass(frozen=True)
class WCoefficients:
    """Strength-series coefficients w_1..w_jmax with error estimates."""

    values: tuple
    errors: tuple
    model_id: str

    def __post_init__(self) -> None:
        if len(self.values) != len(self.errors) or not 1 <= len(self.values) <= MAX_INTEGRAL_ORDER:
            raise ValueError("values and errors must align, orders 1..4")


def w_coefficient(
    model: ModelSpec,
    j: int,
    dom: Optional[IntegrationDomain] = None,
    tolerance: float = 1e-7,
    decomposition: str = "symmetrized",
) -> float:
    """Order-j coefficient of the -sqrt(-eps) strength expansion.

    Evaluates the j-dimensional integral at the domain's quadrature
    order and once more at a coarser order; if the two disagree beyond
    ``tolerance`` the result is not trusted and a NumericalError is
    raised reporting both values.  The pointlike well collapses every
    integral analytically and bypasses quadrature.
    """
    value, _ = w_coefficient_with_error(model, j, dom, tolerance, decomposition)
    return value


def w_coefficient_with_error(
    model: ModelSpec,
    j: int,
    dom: Optional[IntegrationDomain] = None,
    tolerance: float = 1e-7,
    decomposition: str = "symmetrized",
):
    if not 1 <= j <= MAX_INTEGRAL_ORDER:
        raise ValueError(f"order must be 1..{MAX_INTEGRAL_ORDER}, got {j}")
    if decomposition not in ("symmetrized", "per_simplex"):
        raise ValueError(f"unknown decomposition {decomposition!r}")
    if model.id == "delta":
        # The pointlike profile collapses each integral at the origin:
        # only the first order survives, with weight -1/2.
        return (-0.5 if j == 1 else 0.0), 0.0
    if dom is None:
        dom = default_domain(model.id)
    coarse = max(2, dom.gl_order - 8)

    def evaluate(gl: int) -> float:
        denom = PREFACTOR_DENOMINATORS[j - 1]
        if decomposition == "symmetrized":
            return _integrate_ordered(model.id, j, dom, gl, raw=False, perm=None) / denom
        total = 0.0
        for perm in permutations(range(j)):
            total += _integrate_ordered(model.id, j, dom, gl, raw=True, perm=perm)
        return total / denom

    fine_value = evaluate(dom.gl_order)
    coarse_value = evaluate(coarse)
    estimate = abs(fine_value - coarse_value)
    if estimate > tolerance:
        raise NumericalError(
            f"quadrature not converged at order {j}: {fine_value!r} (order {dom.gl_order}) "
            f"vs {coarse_value!r} (order {coarse}), difference {estimate:.3e}"
        )
    return fine_value, estimate


def w_coefficients(
    model: ModelSpec,
    jmax: int = MAX_INTEGRAL_ORDER,
    dom: Optional[IntegrationDomain] = None,
    tolerance: float = 1e-7,
) -> WCoefficients:
    """Coefficients w_1..w_jmax with their refinement error estimates."""
    values = []
    errors = []
    for j in range(1, jmax + 1):
        value, err = w_coefficient_with_error(model, j, dom, tolerance)
        values.append(value)
        errors.append(err)
    return WCoefficients(values=tuple(values), errors=tuple(errors), model_id=model.id)


def energy_series_from_w(w: Sequence) -> EnergySeries:
    """Energy coefficients from the squared strength expansion.

    eps = -(sum w_j lam^j)^2, so the energy series starts at order 2:
    eps2 = -w1^2, eps3 = -2 w1 w2, eps4 = -(w2^2 + 2 w1 w3),
    eps5 = -2 (w1 w4 + w2 w3).  Orders beyond the available w are
    omitted rather than padded.
    """
    vals = list(w.values) if isinstance(w, WCoefficients) else [float(t) for t in w]
    if not vals or vals[0] == 0.0:
        raise ValueError("the first coefficient must be nonzero (attractive well)")
    n = len(vals)
    coeffs = [0.0, 0.0]
    w1 = vals[0]
    coeffs.append(-w1 * w1)
    if n >= 2:
        coeffs.append(-2.0 * w1 * vals[1])
    if n >= 3:
        coeffs.append(-(vals[1] ** 2 + 2.0 * w1 * vals[2]))
    if n >= 4:
        coeffs.append(-2.0 * (w1 * vals[3] + vals[1] * vals[2]))
    label = w.model_id + " quadrature series" if isinstance(w, WCoefficients) else "quadrature series"
    return EnergySeries(series=TruncatedSeries(coeffs, "lambda"), variable="lambda", label=label)
