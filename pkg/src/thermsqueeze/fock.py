"""Truncated Fock-space linear algebra.

Operators on the first ``d`` number states |0>, ..., |d-1> are plain
``complex128`` numpy arrays of shape ``(d, d)``. Rows and columns are
indexed from 0, so entry ``(m, n)`` is <m|W|n>.

Truncation makes the ladder operators fail the canonical commutator in
the last diagonal entry, ``[a, a†][d-1, d-1] = -(d-1)``. Any identity
that is only true in infinite dimension is therefore asserted on a
lower-index sub-block, never on the full matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

DEFAULT_DIM = 64

# scaling threshold for the Taylor stage of the matrix exponential
_EXPM_THETA = 0.5


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances used by validators and regime guards.

    ``unitarity_tol``, ``trace_tol`` and ``oracle_tol`` bound numerical
    deviations. ``truncation_tol`` bounds the thermal weight discarded
    by the Fock cutoff, ``leak_tol`` the probability a transformed state
    pushes past the cutoff.
    """

    unitarity_tol: float = 1e-10
    trace_tol: float = 1e-10
    oracle_tol: float = 1e-6
    truncation_tol: float = 1e-4
    leak_tol: float = 1e-3

    def __post_init__(self):
        for name in ("unitarity_tol", "trace_tol", "oracle_tol", "truncation_tol", "leak_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")


DEFAULT_TOLERANCES = ToleranceConfig()


def check_dim(dim: int) -> int:
    """Validate a Fock dimension and return it as ``int``."""
    if isinstance(dim, bool) or int(dim) != dim:
        raise ValueError(f"Fock dimension must be an integer, got {dim!r}")
    dim = int(dim)
    if dim < 2:
        raise ValueError(f"Fock dimension must be >= 2, got {dim}")
    return dim


def _as_operator(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M


def _check_same_shape(M1: np.ndarray, M2: np.ndarray):
    if M1.shape != M2.shape:
        raise ValueError(f"dimension mismatch: {M1.shape} vs {M2.shape}")


def identity(dim: int) -> np.ndarray:
    return np.eye(check_dim(dim), dtype=complex)


def lowering(dim: int) -> np.ndarray:
    """Annihilation operator ``a`` with <n-1|a|n> = sqrt(n)."""
    dim = check_dim(dim)
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def raising(dim: int) -> np.ndarray:
    """Creation operator ``a†``, the adjoint of :func:`lowering`."""
    return lowering(dim).conj().T


def number(dim: int) -> np.ndarray:
    """Number operator n = a†a, exactly diagonal."""
    dim = check_dim(dim)
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def position_quadrature(dim: int) -> np.ndarray:
    """X = (a + a†)/sqrt(2); the vacuum has Var(X) = 1/2."""
    a = lowering(dim)
    return (a + a.conj().T) / math.sqrt(2.0)


def momentum_quadrature(dim: int) -> np.ndarray:
    """P = (a - a†)/(i sqrt(2))."""
    a = lowering(dim)
    return (a - a.conj().T) / (1j * math.sqrt(2.0))


def commutator(A, B) -> np.ndarray:
    A, B = _as_operator(A), _as_operator(B)
    _check_same_shape(A, B)
    return A @ B - B @ A


def matrix_exponential(M, accuracy: float = 1e-15, max_terms: int = 100) -> np.ndarray:
    """Matrix exponential by scaling and squaring around a Taylor series.

    The input is scaled by ``2**-s`` so its 1-norm is at most 1/2, the
    Taylor series is summed until the next term is below
    ``accuracy * 2**-s`` relative to the partial sum, and the result is
    squared ``s`` times. For anti-Hermitian generators (the only kind
    used for unitaries here) the elementwise error stays at the
    ``accuracy`` level for 1-norms up to about 1e4.

    Parameters
    ----------
    M : array_like
        Square matrix, finite entries.
    accuracy : float
        Target relative truncation error of the series.
    max_terms : int
        Iteration budget for the Taylor stage.

    Real input is exponentiated in real arithmetic; the result is
    always returned as ``complex128``.

    Raises
    ------
    ConvergenceError
        If the series has not converged after ``max_terms`` terms, or
        the result is not finite.
    """
    real = np.isrealobj(M)
    M = _as_operator(M)
    if real:
        M = M.real
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix_exponential: input has non-finite entries")
    if not accuracy > 0:
        raise ValueError("accuracy must be positive")
    n = M.shape[0]
    result = np.eye(n, dtype=M.dtype)
    norm = np.linalg.norm(M, 1)
    if norm == 0.0:
        return result.astype(complex)

    squarings = max(0, math.ceil(math.log2(norm / _EXPM_THETA)))
    A = M / 2.0**squarings
    tol = accuracy * 2.0**-squarings

    term = np.eye(n, dtype=M.dtype)
    for k in range(1, max_terms + 1):
        term = term @ A / k
        result += term
        term_norm = np.linalg.norm(term, 1)
        if term_norm <= tol * np.linalg.norm(result, 1):
            break
    else:
        raise ConvergenceError(f"Taylor series did not converge in {max_terms} terms")

    for _ in range(squarings):
        result = result @ result
    if not np.all(np.isfinite(result)):
        raise ConvergenceError("matrix exponential overflowed")
    return result.astype(complex, copy=False)


def adjoint(M) -> np.ndarray:
    return _as_operator(M).conj().T


def trace(M) -> complex:
    return complex(np.trace(_as_operator(M)))


def hermiticity_deviation(M) -> float:
    """Frobenius norm of M - M†."""
    M = _as_operator(M)
    return float(np.linalg.norm(M - M.conj().T))


def unitarity_deviation(M) -> float:
    """Frobenius norm of M†M - I."""
    M = _as_operator(M)
    return float(np.linalg.norm(M.conj().T @ M - np.eye(M.shape[0])))


def frobenius_distance(M1, M2) -> float:
    M1, M2 = _as_operator(M1), _as_operator(M2)
    _check_same_shape(M1, M2)
    return float(np.linalg.norm(M1 - M2))


def trace_distance(rho1, rho2) -> float:
    """Half the trace norm of rho1 - rho2 (both Hermitian)."""
    rho1, rho2 = _as_operator(rho1), _as_operator(rho2)
    _check_same_shape(rho1, rho2)
    diff = rho1 - rho2
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.abs(np.linalg.eigvalsh(diff)).sum())
