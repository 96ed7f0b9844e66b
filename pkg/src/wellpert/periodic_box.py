"""Periodic-box route: matrix diagonalization, order-by-order
perturbation theory, and the box-size blow-up of the coefficients.

The problem is restated on a ring of circumference L with plane-wave
unperturbed states of energy e_n = 4 n^2 pi^2 / L^2.  The ground state
is nondegenerate, so the textbook Rayleigh-Schroedinger recursion with
intermediate normalization applies in the parity-adapted cosine basis;
the raw complex-exponential basis is kept for matrix builds but refused
for the recursion because its excited levels come in degenerate pairs.
Series coefficients acquire an L dependence and grow like L^(j-2),
which `blowup_report` tabulates and checks against the exact
pointlike-well box series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .models import ModelSpec, implicit_energy_series, matrix_element
from .numeric import NumericalError, symmetric_eigen_lowest
from .series import EnergySeries

PARITIES = ("full_complex", "even_cosine")
MAX_RSPT_ORDER = 12
MAX_EXACT_BOX_ORDER = 30


@dataclass(frozen=True)
class PlaneWaveBasis:
    """Truncated Fourier basis on a ring of circumference L.

    "full_complex" keeps exp(2 pi i n x / L)/sqrt(L) for |n| <= n_max;
    "even_cosine" keeps the even-parity combinations 1/sqrt(L) and
    sqrt(2/L) cos(2 pi n x / L), which spans the same even subspace
    with no degeneracies.
    """

    L: float
    n_max: int
    parity: str = "even_cosine"

    def __post_init__(self) -> None:
        if not float(self.L) > 0.0:
            raise ValueError("box length must be positive")
        if not (isinstance(self.n_max, int) and self.n_max >= 1):
            raise ValueError("n_max must be a positive integer")
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be one of {PARITIES}, got {self.parity!r}")

    @property
    def size(self) -> int:
        return self.n_max + 1 if self.parity == "even_cosine" else 2 * self.n_max + 1

    def indices(self) -> range:
        if self.parity == "even_cosine":
            return range(0, self.n_max + 1)
        return range(-self.n_max, self.n_max + 1)

    def energies(self) -> np.ndarray:
        factor = 4.0 * math.pi**2 / float(self.L) ** 2
        return np.array([factor * n * n for n in self.indices()])


def _box_model(model: ModelSpec, basis: PlaneWaveBasis) -> ModelSpec:
    if model.L is not None and float(model.L) != float(basis.L):
        raise ValueError(
            f"box length mismatch: model carries L={model.L}, basis has L={basis.L}"
        )
    return ModelSpec(id=model.id, L=basis.L, beta=model.beta)


def build_hamiltonian(model: ModelSpec, basis: PlaneWaveBasis, lam: float) -> np.ndarray:
    """Dense real symmetric matrix diag(e_n) + lam * V in the basis."""
    if model.id == "square" and float(basis.L) <= 2.0:
        raise ValueError(f"well exceeds box: the square well needs L > 2, got L={basis.L}")
    h = np.diag(basis.energies())
    if lam == 0.0:
        return h
    boxed = _box_model(model, basis)
    idx = list(basis.indices())
    for a, m in enumerate(idx):
        for b in range(a, len(idx)):
            value = lam * matrix_element(boxed, m, idx[b], basis=basis.parity)
            h[a, b] += value
            if b != a:
                h[b, a] += value
    return h


def ground_energy_diag(model: ModelSpec, basis: PlaneWaveBasis, lam: float) -> float:
    """Lowest eigenvalue of the truncated matrix (variational from above
    within the even-parity subspace; non-increasing as n_max grows)."""
    return symmetric_eigen_lowest(build_hamiltonian(model, basis, lam))


@dataclass(frozen=True)
class RsptResult:
    """Box-dependent strength-series coefficients through the requested
    order, with the per-order wavefunction corrections c^(1)..c^(J-1)
    actually used by the recursion (intermediate normalization: every
    correction has zero component on the unperturbed ground state)."""

    coefficients: tuple
    basis_size: int
    wave_corrections: tuple


def rspt_coefficients(model: ModelSpec, basis: PlaneWaveBasis, order: int) -> RsptResult:
    """Perturbation coefficients from the sum-over-states recursion.

    eps1 = V[0,0]; c1_i = V[i,0]/(e0 - e_i); then order by order
    eps_j = (V c^(j-1))[0] and
    c^(j)_i = [(V c^(j-1))_i - sum_k eps_k c^(j-k)_i] / (e0 - e_i).
    Sums run over the truncated basis, so the coefficients carry an
    O(1/n_max) truncation tail on top of their L dependence.
    """
    if basis.parity != "even_cosine":
        raise ValueError("degenerate unperturbed levels; use even_cosine")
    if not (isinstance(order, int) and 1 <= order <= MAX_RSPT_ORDER):
        raise ValueError(f"order must be 1..{MAX_RSPT_ORDER}, got {order}")
    boxed = _box_model(model, basis)
    size = basis.size
    energies = basis.energies()
    with np.errstate(divide="ignore"):
        inv_gap = np.where(np.arange(size) == 0, 0.0, 1.0)
        inv_gap[1:] = 1.0 / (energies[0] - energies[1:])
        inv_gap[0] = 0.0

    if order <= 2:
        column = np.array([matrix_element(boxed, i, 0) for i in range(size)])
        eps = [float(column[0])]
        c1 = column * inv_gap
        if order == 2:
            eps.append(float(column @ c1))
        waves = (c1,) if order == 2 else ()
        return RsptResult(coefficients=tuple(eps), basis_size=size, wave_corrections=waves)

    v = np.empty((size, size))
    for a in range(size):
        for b in range(a, size):
            v[a, b] = v[b, a] = matrix_element(boxed, a, b)
    eps = []
    corrections = [np.zeros(size)]
    corrections[0][0] = 1.0
    for j in range(1, order + 1):
        vc = v @ corrections[j - 1]
        eps.append(float(vc[0]))
        if j == order:
            break
        new = vc.copy()
        for k in range(1, j):
            new -= eps[k - 1] * corrections[j - k]
        corrections.append(new * inv_gap)
    return RsptResult(
        coefficients=tuple(eps),
        basis_size=size,
        wave_corrections=tuple(corrections[1:]),
    )


@dataclass(frozen=True)
class RsptExtrapolation:
    """Basis-limit estimate of one coefficient with the raw values it
    came from, at truncations N, 2N, 4N."""

    value: float
    raw: tuple  # ((n_max, coefficient), ...) at N, 2N, 4N


def rspt_extrapolated(
    model: ModelSpec, L: float, j: int, n_max: int, parity: str = "even_cosine"
) -> RsptExtrapolation:
    """Richardson extrapolation of the order-j coefficient in 1/n_max.

    The truncation tail of the sums falls off like 1/n_max, so two
    elimination levels on truncations (N, 2N, 4N) remove the 1/N and
    1/N^2 terms: with A the raw values, B_i = 2 A(2^(i+1) N) - A(2^i N)
    and the returned value is (4 B_1 - B_0) / 3.
    """
    raw = []
    for factor in (1, 2, 4):
        basis = PlaneWaveBasis(L=L, n_max=factor * n_max, parity=parity)
        coeff = rspt_coefficients(model, basis, j).coefficients[j - 1]
        raw.append((factor * n_max, coeff))
    b0 = 2.0 * raw[1][1] - raw[0][1]
    b1 = 2.0 * raw[2][1] - raw[1][1]
    return RsptExtrapolation(value=(4.0 * b1 - b0) / 3.0, raw=tuple(raw))


def delta_box_series(L, order: int, exact: bool = True) -> EnergySeries:
    """Exact strength series of the pointlike well on the ring."""
    if not 1 <= order <= MAX_EXACT_BOX_ORDER:
        raise ValueError(f"order must be 1..{MAX_EXACT_BOX_ORDER}, got {order}")
    return implicit_energy_series(ModelSpec(id="delta", L=L), order, exact=exact)


@dataclass(frozen=True)
class BlowupRow:
    """One (L, order) entry of the box-size growth table."""

    L: Union[int, float, Fraction]
    j: int
    coefficient: Union[Fraction, float]
    rescaled: Union[Fraction, float]
    exponent_fit: float


def blowup_report(
    model: ModelSpec,
    L_values: Sequence,
    j: int,
    n_max: Optional[int] = None,
) -> list:
    """Growth of the order-j box coefficient across box sizes.

    Each row carries the coefficient, the rescaled combination
    coefficient * L^(2-j), and the least-squares growth exponent of
    ln|coefficient| against ln L (the same fit for every row).  For the
    pointlike well the coefficients come from the exact rational series,
    the rescaled values are exactly L-independent, and the fitted
    exponent is checked against the analytic value j - 2.
    """
    if len(L_values) < 2:
        raise ValueError("need at least two box lengths to fit a growth exponent")
    rows = []
    if model.id == "delta":
        if not 1 <= j <= MAX_EXACT_BOX_ORDER:
            raise ValueError(f"order must be 1..{MAX_EXACT_BOX_ORDER}, got {j}")
        coefficients = []
        for L in L_values:
            series = delta_box_series(Fraction(L), j, exact=True)
            coefficients.append(series.series.coeffs[j])
        rescaled = [c * Fraction(L) ** (2 - j) for c, L in zip(coefficients, L_values)]
    else:
        if n_max is None:
            n_max = 100
        coefficients = [rspt_extrapolated(model, L, j, n_max).value for L in L_values]
        rescaled = [c * float(L) ** (2 - j) for c, L in zip(coefficients, L_values)]
    if all(float(c) != 0.0 for c in coefficients):
        logs_l = np.log([float(L) for L in L_values])
        logs_c = np.log([abs(float(c)) for c in coefficients])
        slope = float(np.polyfit(logs_l, logs_c, 1)[0])
    else:
        slope = float("nan")
    if model.id == "delta" and not abs(slope - (j - 2)) <= 0.05:
        raise NumericalError(
            f"blow-up exponent mismatch: fitted {slope!r}, analytic value {j - 2}"
        )
    for L, c, r in zip(L_values, coefficients, rescaled):
        rows.append(BlowupRow(L=L, j=j, coefficient=c, rescaled=r, exponent_fit=slope))
    return rows
