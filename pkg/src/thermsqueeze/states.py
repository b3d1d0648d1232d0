"""Pure and thermal states on the truncated Fock space.

Density matrices are ``complex128`` arrays. Every constructor validates
its output with :func:`validate_density_matrix` and raises
:class:`~thermsqueeze.errors.TruncationError` instead of returning a state
that the cutoff has visibly damaged.

Quadrature convention: ``X = (a + a†)/sqrt(2)``, ``P = (a - a†)/(i sqrt(2))``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import group
from .errors import TruncationError
from .fock import (
    DEFAULT_TOLERANCES,
    ToleranceConfig,
    check_dim,
    hermiticity_deviation,
    lowering,
    momentum_quadrature,
    position_quadrature,
)
from .group import GroupElement


@dataclass(frozen=True)
class ThermalParams:
    """Inverse temperature ``beta`` and mode energy ``epsilon`` (default 1)."""

    beta: float
    epsilon: float = 1.0

    def __post_init__(self):
        x = self.beta * self.epsilon
        if not (self.beta > 0 and self.epsilon > 0 and math.isfinite(x)):
            raise ValueError(f"need beta*epsilon > 0 and finite, got beta={self.beta!r}, epsilon={self.epsilon!r}")

    @property
    def x(self) -> float:
        """Dimensionless ``beta * epsilon``."""
        return self.beta * self.epsilon

    @classmethod
    def from_temperature(cls, T: float, epsilon: float = 1.0) -> "ThermalParams":
        """``T`` in units of epsilon / k_B."""
        if not T > 0:
            raise ValueError(f"temperature must be positive, got {T!r}")
        return cls(1.0 / T, epsilon)

    @classmethod
    def from_mean_photon(cls, nbar: float, epsilon: float = 1.0) -> "ThermalParams":
        """Inverse of :func:`mean_photon`: ``beta epsilon = ln(1 + 1/nbar)``."""
        if not nbar > 0:
            raise ValueError(f"mean photon number must be positive, got {nbar!r}")
        return cls(math.log1p(1.0 / nbar) / epsilon, epsilon)


def partition_function(t: ThermalParams) -> float:
    """``Z = exp(-x/2) / (1 - exp(-x))`` with ``x = beta epsilon``."""
    x = t.x
    return math.exp(-0.5 * x) / -math.expm1(-x)


def mean_photon(t: ThermalParams) -> float:
    """Free thermal occupancy ``exp(-x) / (1 - exp(-x))``."""
    x = t.x
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def thermal_populations(t: ThermalParams, dim: int) -> np.ndarray:
    """Boltzmann weights of |0>..|dim-1>, renormalised to sum to one."""
    dim = check_dim(dim)
    # exp(-x (n + 1/2))/Z, with the common factor dropped before renormalising
    w = np.exp(-t.x * np.arange(dim, dtype=float))
    return w / w.sum()


def check_thermal_tail(t: ThermalParams, dim: int, tol: ToleranceConfig = DEFAULT_TOLERANCES):
    tail = math.exp(-t.x * dim) / partition_function(t)
    if tail >= tol.truncation_tol:
        raise TruncationError(
            f"thermal tail exp(-beta eps d)/Z = {tail:.3e} exceeds {tol.truncation_tol:.1e} "
            f"at dim={dim}; increase the Fock dimension or lower the temperature"
        )


def validate_density_matrix(rho, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Check hermiticity, unit trace and positivity; return ``rho`` as an array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    herm = hermiticity_deviation(rho)
    if herm >= tol.trace_tol:
        raise ValueError(f"density matrix not Hermitian (deviation {herm:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) >= tol.trace_tol:
        raise ValueError(f"density matrix trace {tr:.12g} differs from 1")
    lowest = np.linalg.eigvalsh(rho)[0]
    if lowest <= -tol.trace_tol:
        raise ValueError(f"density matrix has negative eigenvalue {lowest:.3e}")
    return rho


def _projector(psi: np.ndarray) -> np.ndarray:
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def vacuum(dim: int) -> np.ndarray:
    dim = check_dim(dim)
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def squeezed(g: GroupElement, dim: int, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Projector on ``U(g)|0>``; covers vacuum, coherent and squeezed states."""
    U = group.to_unitary(g, dim)
    return validate_density_matrix(_projector(U[:, 0]), tol)


def coherent(alpha: complex, dim: int, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    return squeezed(GroupElement(1.0, 0.0, alpha), dim, tol)


def free_thermal(t: ThermalParams, dim: int, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Diagonal Gibbs state of ``H0 = epsilon (n + 1/2)``, trace exactly one."""
    dim = check_dim(dim)
    check_thermal_tail(t, dim, tol)
    return np.diag(thermal_populations(t, dim)).astype(complex)


def truncation_leak(g: GroupElement, t: ThermalParams | None, dim: int) -> float:
    """Probability that ``U rho U†`` places beyond level ``dim - 1``.

    ``rho`` is the free thermal state at ``dim`` (or the vacuum when
    ``t`` is None). The transformed state is rebuilt in twice the
    dimension and the weight outside the leading ``dim`` levels is
    returned.
    """
    dim = check_dim(dim)
    big = 2 * dim
    weights = thermal_populations(t, dim) if t is not None else np.eye(1, dim)[0]
    V = group._unitary(g, big)[:, :dim]
    inside = (np.abs(V[:dim, :]) ** 2 @ weights).sum()
    return max(0.0, 1.0 - float(inside))


def thermal_squeezed(
    g: GroupElement,
    t: ThermalParams,
    dim: int,
    tol: ToleranceConfig = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """Gibbs state of ``H = U H0 U†``, built as ``U rho_free U†``.

    Three guards apply: the thermal tail of ``rho_free`` (see
    :func:`free_thermal`), the sector bound of :func:`group.to_unitary`,
    and the measured :func:`truncation_leak`, which must stay below
    ``tol.leak_tol``.
    """
    rho0 = free_thermal(t, dim, tol)
    U = group.to_unitary(g, dim)
    leak = truncation_leak(g, t, dim)
    if leak > tol.leak_tol:
        raise TruncationError(
            f"thermal squeezed state leaks {leak:.3e} of its probability past level {dim - 1} "
            f"(limit {tol.leak_tol:.1e}); increase the Fock dimension"
        )
    rho = U @ rho0 @ U.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return validate_density_matrix(rho, tol)


def required_dim(
    g: GroupElement,
    t: ThermalParams | None = None,
    leak: float = 1e-12,
    start: int = 32,
    max_dim: int = 1024,
    tol: ToleranceConfig = DEFAULT_TOLERANCES,
) -> int:
    """Smallest power-of-two multiple of ``start`` where the state fits.

    Fitting means the sector bound holds, the thermal tail is below
    ``leak`` and :func:`truncation_leak` is below ``leak``.
    """
    dim = check_dim(start)
    while dim <= max_dim:
        fits = group.sector_load(g) <= dim / 4
        if fits and t is not None:
            fits = math.exp(-t.x * dim) / partition_function(t) < min(leak, tol.truncation_tol)
        if fits and truncation_leak(g, t, dim) <= leak:
            return dim
        dim *= 2
    raise TruncationError(f"state does not fit to leak {leak:.1e} below dim {max_dim}")


def thermal_average(rho, W) -> complex:
    """``tr(rho W)``."""
    rho = np.asarray(rho, dtype=complex)
    W = np.asarray(W, dtype=complex)
    if rho.shape != W.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {W.shape}")
    return complex(np.einsum("ij,ji->", rho, W))


def quadrature_variances_closed(g: GroupElement, nbar: float) -> tuple[float, float]:
    """``(|lam - mu|^2 (nbar + 1/2), |lam + mu|^2 (nbar + 1/2))``."""
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar!r}")
    return (
        abs(g.lam - g.mu) ** 2 * (nbar + 0.5),
        abs(g.lam + g.mu) ** 2 * (nbar + 0.5),
    )


def quadrature_variances(rho) -> tuple[float, float]:
    """Trace-based ``Var(X), Var(P)`` of a density matrix."""
    dim = np.asarray(rho).shape[0]
    out = []
    for Q in (position_quadrature(dim), momentum_quadrature(dim)):
        mean = thermal_average(rho, Q).real
        out.append(thermal_average(rho, Q @ Q).real - mean**2)
    return out[0], out[1]


def transformed_hamiltonian(g: GroupElement, dim: int, epsilon: float = 1.0) -> np.ndarray:
    """``epsilon (A† A + 1/2)`` with ``A = lam a + mu a† - alpha``, assembled directly.

    This is the explicit form of ``U H0 U†``; in the truncated space the
    two agree only on a leading sub-block.
    """
    a = lowering(dim)
    A = g.lam * a + g.mu * a.conj().T - g.alpha * np.eye(dim)
    return epsilon * (A.conj().T @ A + 0.5 * np.eye(dim))


def state_to_json(rho) -> str:
    """Debug dump ``{"dim": d, "re": [[...]], "im": [[...]]}``."""
    rho = np.asarray(rho, dtype=complex)
    return json.dumps({"dim": rho.shape[0], "re": rho.real.tolist(), "im": rho.imag.tolist()})


def state_from_json(text: str) -> np.ndarray:
    data = json.loads(text)
    rho = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
    if rho.shape != (data["dim"], data["dim"]):
        raise ValueError(f"dim {data['dim']} does not match matrix shape {rho.shape}")
    return rho
