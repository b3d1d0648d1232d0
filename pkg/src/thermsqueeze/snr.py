"""Signal-to-noise ratio of thermal squeezed states.

All of the signal is taken to sit in the X quadrature, so with a photon
budget ``N`` the ratio is

    sigma = (2N + 1 - VarX - VarP) / VarX.

For real ``lam, mu`` the variance product is ``(nbar + 1/2)^2``, which
leaves a one-dimensional problem in ``VarX`` with maximiser
``VarX* = (2 nbar + 1)^2 / (2 (2N + 1))`` and optimum

    sigma_T = 4 (N - nbar)(N + nbar + 1) / (2 nbar + 1)^2,

the Yuen limit ``4N(N + 1)`` at ``nbar = 0``.

The optimal displacement is ``alpha = sqrt((N - nbar)(N + nbar + 1)/(2 nbar + 1))``.
The variant ``(N + nbar + 1)(N - nbar)/sqrt(2 nbar + 1)`` (no outer square
root) overshoots the photon budget: at ``N = 1, nbar = 0`` it gives
``<n> = 5/3`` and ``sigma = 16`` instead of 1 and 8. The full-state check
in the test suite pins the square-root form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy.optimize import minimize_scalar

from .errors import BudgetWarning, InsufficientBudgetError
from .group import GroupElement
from .states import ThermalParams, mean_photon


@dataclass(frozen=True)
class SnrOptimum:
    sigma: float
    lam: float
    mu: float
    alpha: float

    def element(self) -> GroupElement:
        return GroupElement(self.lam, self.mu, self.alpha)


@dataclass(frozen=True)
class SweepRow:
    T: float
    nbar: float
    sigma: float
    sigma_ratio: float
    budget_exceeded: bool = False


def _check_budget(N: float):
    if not (math.isfinite(N) and N >= 0):
        raise ValueError(f"photon budget must be finite and >= 0, got {N!r}")


def snr_from_variances(N: float, varX: float, varP: float) -> float:
    """Ratio ``<X>^2 / VarX`` when the whole budget ``N`` is spent.

    A negative numerator means the noise alone exceeds the budget; the
    result is then 0 and a :class:`BudgetWarning` is issued.
    """
    _check_budget(N)
    if varX <= 0 or varP <= 0:
        raise ValueError(f"variances must be positive, got varX={varX!r}, varP={varP!r}")
    signal = 2 * N + 1 - varX - varP
    if signal < 0:
        warnings.warn(
            f"noise VarX + VarP = {varX + varP:.6g} exceeds 2N + 1 = {2 * N + 1:.6g}",
            BudgetWarning,
            stacklevel=2,
        )
        return 0.0
    return signal / varX


def reduced_objective(N: float, nbar: float, varX: float) -> float:
    """``(2N+1)/VarX - 1 - (nbar + 1/2)^2 / VarX^2``."""
    if varX <= 0:
        raise ValueError(f"VarX must be positive, got {varX!r}")
    return (2 * N + 1) / varX - 1.0 - (nbar + 0.5) ** 2 / varX**2


def optimal_variance(N: float, nbar: float) -> float:
    """Maximiser ``(2 nbar + 1)^2 / (2 (2N + 1))`` of :func:`reduced_objective`."""
    return (2 * nbar + 1) ** 2 / (2 * (2 * N + 1))


def maximize_reduced_objective(N: float, nbar: float, xatol: float = 1e-12) -> tuple[float, float]:
    """Numerical maximum of :func:`reduced_objective` over ``VarX in (0, 2N+1]``.

    Bounded Brent search; independent of the closed forms. Returns
    ``(VarX, sigma)``.
    """
    _check_budget(N)
    upper = 2 * N + 1
    res = minimize_scalar(
        lambda v: -reduced_objective(N, nbar, v),
        bounds=(1e-12 * upper, upper),
        method="bounded",
        options={"xatol": xatol, "maxiter": 2000},
    )
    if not res.success:
        raise RuntimeError(f"reduced objective maximisation failed: {res.message}")
    return float(res.x), float(-res.fun)


def _check_nbar(N: float, nbar: float):
    _check_budget(N)
    if not (math.isfinite(nbar) and nbar >= 0):
        raise ValueError(f"nbar must be finite and >= 0, got {nbar!r}")
    if N < nbar:
        raise InsufficientBudgetError(f"photon budget N={N} is below thermal occupancy nbar={nbar}")


def optimal_sigma(N: float, nbar: float) -> float:
    _check_nbar(N, nbar)
    return 4 * (N - nbar) * (N + nbar + 1) / (2 * nbar + 1) ** 2


def optimal_params(N: float, nbar: float) -> SnrOptimum:
    """Real ``(lam, mu, alpha)`` attaining :func:`optimal_sigma` at ``<n> = N``."""
    _check_nbar(N, nbar)
    norm = math.sqrt((2 * N + 1) * (2 * nbar + 1))
    lam = (N + nbar + 1) / norm
    mu = (N - nbar) / norm
    alpha = math.sqrt((N - nbar) * (N + nbar + 1) / (2 * nbar + 1))
    return SnrOptimum(optimal_sigma(N, nbar), lam, mu, alpha)


def photon_number(g: GroupElement, nbar: float) -> float:
    """``<a†a>`` in the thermal squeezed state of ``g``.

    ``|lam|^2 nbar + |mu|^2 (nbar + 1) + |mu alpha* - lam* alpha|^2``.
    """
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar!r}")
    shift = g.mu * g.alpha.conjugate() - g.lam.conjugate() * g.alpha
    return abs(g.lam) ** 2 * nbar + abs(g.mu) ** 2 * (nbar + 1) + abs(shift) ** 2


def temperature_sweep(
    N: float, t_min: float, t_max: float, points: int, epsilon: float = 1.0
) -> list[SweepRow]:
    """Optimal ratio against temperature, ``T`` in units of epsilon / k_B.

    Rows are ordered by ascending ``T``. Where ``nbar > N`` the closed form
    would turn negative; such rows carry ``sigma = 0`` and
    ``budget_exceeded=True``. With ``N = 0`` every row is zero and a
    :class:`BudgetWarning` is issued.
    """
    _check_budget(N)
    if not (0 <= t_min < t_max and math.isfinite(t_max)):
        raise ValueError(f"need 0 <= t_min < t_max, got [{t_min!r}, {t_max!r}]")
    if isinstance(points, bool) or int(points) != points or points < 2:
        raise ValueError(f"need at least 2 points, got {points!r}")
    points = int(points)
    if N == 0:
        warnings.warn("photon budget N = 0: no signal at any temperature", BudgetWarning, stacklevel=2)

    sigma0 = 4 * N * (N + 1)
    step = (t_max - t_min) / (points - 1)
    rows = []
    for i in range(points):
        T = t_min + i * step if i < points - 1 else t_max
        nbar = mean_photon(ThermalParams.from_temperature(T, epsilon)) if T > 0 else 0.0
        exceeded = nbar > N
        sigma = 0.0 if exceeded else optimal_sigma(N, nbar)
        ratio = sigma / sigma0 if sigma0 > 0 else 0.0
        rows.append(SweepRow(T, nbar, sigma, ratio, exceeded))
    return rows
