"""The five-parameter squeezing group.

An element ``g = (lam, mu, alpha)`` with ``|lam|^2 - |mu|^2 = 1`` stands
for the canonical transformation

    U a U† = lam a + mu a† - alpha I,

carried by ``U = S(xi) D(alpha)`` with ``S(xi) = exp((xi* a^2 - xi a†^2)/2)``
and ``D(alpha) = exp(alpha a† - alpha* a)``. Exact arithmetic happens in
the 3x3 matrix picture

    [[lam,  mu,   -alpha ],
     [mu*,  lam*, -alpha*],
     [0,    0,     1     ]]

whose rows are the images of ``a``, ``a†`` and ``I``. Because rows hold
images, the matrix of a product ``U1 U2`` is ``M(g2) @ M(g1)``;
:func:`compose` hides that reversal so that it follows operator order.

With the exponent signs as written above no sign flip of ``xi`` is
needed: ``S a S† = cosh(r) a + exp(i phi) sinh(r) a†``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import TruncationError
from .fock import check_dim, matrix_exponential

_CONSTRAINT_TOL = 1e-12


@dataclass(frozen=True)
class SqueezeParams:
    """Squeeze amplitude ``xi = r exp(i phi)``."""

    r: float
    phi: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.r) or self.r < 0:
            raise ValueError(f"squeeze magnitude must be finite and >= 0, got {self.r!r}")
        if not math.isfinite(self.phi):
            raise ValueError(f"squeeze phase must be finite, got {self.phi!r}")

    @property
    def xi(self) -> complex:
        return self.r * cmath.exp(1j * self.phi)


@dataclass(frozen=True)
class GroupElement:
    lam: complex
    mu: complex
    alpha: complex = 0j

    def __post_init__(self):
        for name in ("lam", "mu", "alpha"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        # absolute 1e-12 in the moderate regime, relative once |lam|^2 is large
        scale = max(1.0, abs(self.lam) ** 2)
        if abs(self.constraint_residual()) > _CONSTRAINT_TOL * scale:
            raise ValueError(
                f"|lam|^2 - |mu|^2 must equal 1, residual {self.constraint_residual():.3e}"
            )

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(1.0, 0.0, 0.0)

    def constraint_residual(self) -> float:
        return abs(self.lam) ** 2 - abs(self.mu) ** 2 - 1.0

    def to_matrix(self) -> np.ndarray:
        lam, mu, alpha = self.lam, self.mu, self.alpha
        return np.array(
            [
                [lam, mu, -alpha],
                [mu.conjugate(), lam.conjugate(), -alpha.conjugate()],
                [0.0, 0.0, 1.0],
            ],
            dtype=complex,
        )

    @classmethod
    def from_matrix(cls, m) -> "GroupElement":
        m = np.asarray(m, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
        return cls(m[0, 0], m[0, 1], -m[0, 2])

    @property
    def rotation(self) -> float:
        """Phase of ``lam``; zero for elements built from squeeze parameters."""
        return cmath.phase(self.lam)

    def squeeze_params(self) -> SqueezeParams:
        """Squeeze parameters left after removing the phase of ``lam``."""
        theta = self.rotation
        r = math.acosh(max(1.0, abs(self.lam)))
        phi = cmath.phase(self.mu) + theta if self.mu != 0 else 0.0
        return SqueezeParams(r, phi)

    def is_close(self, other: "GroupElement", tol: float = 1e-12) -> bool:
        return (
            abs(self.lam - other.lam) <= tol
            and abs(self.mu - other.mu) <= tol
            and abs(self.alpha - other.alpha) <= tol
        )


def from_squeeze_params(p: SqueezeParams, alpha: complex = 0j) -> GroupElement:
    return GroupElement(math.cosh(p.r), cmath.exp(1j * p.phi) * math.sinh(p.r), alpha)


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """Element realised by ``U(g1) U(g2)``.

    Computed as the 3x3 product ``M(g2) @ M(g1)``; see the module
    docstring for why the factors swap.
    """
    return GroupElement.from_matrix(g2.to_matrix() @ g1.to_matrix())


def inverse(g: GroupElement) -> GroupElement:
    lam, mu, alpha = g.lam, g.mu, g.alpha
    return GroupElement(
        lam.conjugate(),
        -mu,
        mu * alpha.conjugate() - lam.conjugate() * alpha,
    )


def transform_mode(g: GroupElement) -> tuple[complex, complex, complex]:
    """Coefficients ``(c_a, c_adag, c_id)`` of ``U a U†``."""
    return g.lam, g.mu, -g.alpha


def apply_mode_map(
    g: GroupElement, coeffs: tuple[complex, complex, complex]
) -> tuple[complex, complex, complex]:
    """Conjugate ``W = c_a a + c_adag a† + c_id I`` by ``U(g)``.

    Returns the coefficients of ``U W U†`` in the same basis.
    """
    c_a, c_ad, c_id = (complex(c) for c in coeffs)
    lam, mu, alpha = g.lam, g.mu, g.alpha
    return (
        c_a * lam + c_ad * mu.conjugate(),
        c_a * mu + c_ad * lam.conjugate(),
        c_id - c_a * alpha - c_ad * alpha.conjugate(),
    )


def sector_load(g: GroupElement) -> float:
    """``|alpha|^2 + sinh(r)^2``, the occupied-sector size of U|0>."""
    return abs(g.alpha) ** 2 + abs(g.mu) ** 2


def check_sector(g: GroupElement, dim: int):
    """Raise if ``|alpha|^2 + sinh(r)^2 > dim/4``."""
    load = sector_load(g)
    if load > dim / 4:
        raise TruncationError(
            f"|alpha|^2 + sinh^2 r = {load:.4g} exceeds dim/4 = {dim / 4:.4g}; "
            "increase the Fock dimension"
        )


def _phase_conjugate(M: np.ndarray, theta: float) -> np.ndarray:
    """``R(theta) M R(theta)†`` for the diagonal rotation ``R = exp(-i theta n)``."""
    if theta == 0.0:
        return M
    phase = np.exp(1j * theta * np.arange(M.shape[0]))
    return M * phase[None, :] * phase.conj()[:, None]


def _real_lowering(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1)


def displacement_operator(alpha: complex, dim: int) -> np.ndarray:
    """``D(alpha)``, exponentiated for ``|alpha|`` and rotated to ``arg alpha``.

    ``D(alpha) = R(-arg alpha) D(|alpha|) R(-arg alpha)†``, which keeps
    the exponential in real arithmetic.
    """
    dim = check_dim(dim)
    a = _real_lowering(dim)
    D = matrix_exponential(abs(alpha) * (a.T - a))
    return _phase_conjugate(D, -cmath.phase(alpha))


def squeeze_operator(xi: complex, dim: int) -> np.ndarray:
    """``S(xi)``, exponentiated for ``|xi|`` and rotated to ``arg xi``.

    ``S(r e^{i phi}) = R(-phi/2) S(r) R(-phi/2)†``. The real generator
    ``(a^2 - a†^2) r/2`` only couples levels of equal parity, so the even
    and odd sublattices are exponentiated separately.
    """
    dim = check_dim(dim)
    n = np.arange(2.0, dim)
    a2 = np.diag(np.sqrt(n * (n - 1)), 2)
    G = 0.5 * abs(xi) * (a2 - a2.T)
    S = np.zeros((dim, dim), dtype=complex)
    for start in (0, 1):
        idx = np.arange(start, dim, 2)
        S[np.ix_(idx, idx)] = matrix_exponential(G[np.ix_(idx, idx)])
    return _phase_conjugate(S, -0.5 * cmath.phase(xi))


def rotation_operator(theta: float, dim: int) -> np.ndarray:
    """``exp(-i theta n)``, which maps ``a`` to ``exp(i theta) a``."""
    return np.diag(np.exp(-1j * theta * np.arange(dim))).astype(complex)


@lru_cache(maxsize=8)
def _unitary(g: GroupElement, dim: int) -> np.ndarray:
    """Unguarded truncated unitary, cached and read-only."""
    p = g.squeeze_params()
    U = squeeze_operator(p.xi, dim) @ displacement_operator(g.alpha, dim)
    theta = g.rotation
    if theta != 0.0:
        U = np.exp(-1j * theta * np.arange(dim))[:, None] * U
    U.setflags(write=False)
    return U


def to_unitary(g: GroupElement, dim: int) -> np.ndarray:
    """Truncated unitary ``U = S(xi) D(alpha)`` realising ``g``.

    Elements with a complex ``lam`` (products of squeezes with different
    phases) get an extra diagonal phase rotation in front; for
    ``lam > 0`` the result is exactly ``S(xi) D(alpha)``. The global phase
    is whatever the exponentials produce.

    Raises
    ------
    TruncationError
        If ``|alpha|^2 + sinh^2 r > dim/4``.
    """
    dim = check_dim(dim)
    check_sector(g, dim)
    return _unitary(g, dim).copy()


def guaranteed_block(g: GroupElement, dim: int, tol: float = 1e-10) -> int:
    """Size of the leading sub-block on which ``to_unitary(g, dim)`` is exact.

    The truncated unitary is rebuilt in twice the dimension. Index ``n``
    counts as good when row ``n`` and column ``n`` agree with the larger
    construction to ``tol`` and carry less than ``tol`` weight beyond
    the cutoff. The block size is the number of leading good indices.
    """
    dim = check_dim(dim)
    big = 2 * dim
    U = _unitary(g, dim)
    V = _unitary(g, big)
    col_err = np.abs(U - V[:dim, :dim]).max(axis=0)
    row_err = np.abs(U - V[:dim, :dim]).max(axis=1)
    col_leak = np.sqrt((np.abs(V[dim:, :dim]) ** 2).sum(axis=0))
    row_leak = np.sqrt((np.abs(V[:dim, dim:]) ** 2).sum(axis=1))
    err = np.maximum.reduce([col_err, row_err, col_leak, row_leak])
    bad = np.flatnonzero(err > tol)
    return int(bad[0]) if bad.size else dim


def phase_aligned_deviation(A, B) -> float:
    """Max elementwise ``|exp(i t) A - B|`` at the best global phase ``t``."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    overlap = np.vdot(A, B)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.abs(phase * A - B).max())
