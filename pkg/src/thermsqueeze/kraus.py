"""Kraus maps and thermalising Kraus sets.

A channel is ``rho -> sum_n w_n rho w_n†`` with ``sum_n w_n† w_n = I``.
For a set that carries |0><0| to ``diag(p)`` we write
``w_n = sqrt(p_n) C_n`` and check three structural conditions on the
matrices ``C_n`` (indices from 0, ``r, s, v > 0`` below):

* orthonormality: columns ``s > 0`` of each ``C_n`` are orthonormal;
* probability matching: column 0 of ``C_n`` is the basis vector ``e_n``;
* probability orthogonality: ``sum_n p_n C_n[n, r] = 0``.

Together they are equivalent to completeness.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import KrausValidationError
from .fock import DEFAULT_TOLERANCES, ToleranceConfig, check_dim, unitarity_deviation
from .states import ThermalParams, check_thermal_tail, thermal_populations, validate_density_matrix

COMPLETENESS_TOL = 1e-10
PROBABILITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Kraus operators of a common dimension.

    Construction does not enforce completeness, so that damaged sets can
    still be inspected; :func:`apply_channel` refuses incomplete sets.
    """

    ops: tuple[np.ndarray, ...]
    probabilities: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        ops = tuple(np.asarray(w, dtype=complex) for w in self.ops)
        if not ops:
            raise ValueError("a Kraus set needs at least one operator")
        shape = ops[0].shape
        if len(shape) != 2 or shape[0] != shape[1]:
            raise ValueError(f"Kraus operators must be square, got shape {shape}")
        for w in ops:
            if w.shape != shape:
                raise ValueError(f"Kraus operators have mixed shapes {shape} and {w.shape}")
            w.setflags(write=False)
        object.__setattr__(self, "ops", ops)
        if self.probabilities is not None:
            object.__setattr__(self, "probabilities", check_probabilities(self.probabilities))

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def __len__(self):
        return len(self.ops)


def check_probabilities(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise ValueError("probability vector must be one-dimensional with at least 2 entries")
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise ValueError(f"probabilities must be finite and non-negative: {p.tolist()}")
    if abs(p.sum() - 1.0) >= PROBABILITY_TOL:
        raise ValueError(f"probabilities sum to {p.sum():.15g}, not 1")
    return p


def completeness_deviation(K: KrausSet) -> float:
    """Frobenius norm of ``sum w† w - I``."""
    total = sum(w.conj().T @ w for w in K.ops)
    return float(np.linalg.norm(total - np.eye(K.dim)))


def apply_channel(K: KrausSet, rho, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (K.dim, K.dim):
        raise ValueError(f"dimension mismatch: Kraus set is {K.dim}, state is {rho.shape}")
    dev = completeness_deviation(K)
    if dev >= COMPLETENESS_TOL:
        raise KrausValidationError(f"Kraus set is incomplete (deviation {dev:.3e})")
    out = sum(w @ rho @ w.conj().T for w in K.ops)
    out = 0.5 * (out + out.conj().T)
    return validate_density_matrix(out, tol)


def two_level_set(p: float) -> KrausSet:
    """Two-level set sending |0><0| to ``diag(p, 1 - p)``.

        w0 = sqrt(p)     [[1, 1 - p], [0, sqrt(2p - p^2)]]
        w1 = sqrt(1 - p) [[0, sqrt(1 - p^2)], [1, -p]]
    """
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    w0 = math.sqrt(p) * np.array([[1.0, 1.0 - p], [0.0, math.sqrt(2 * p - p * p)]])
    w1 = math.sqrt(1.0 - p) * np.array([[0.0, math.sqrt(1.0 - p * p)], [1.0, -p]])
    return KrausSet((w0, w1), probabilities=np.array([p, 1.0 - p]))


def canonical_set(p) -> KrausSet:
    """Cyclic-shift thermaliser for an arbitrary distribution ``p``.

    ``C_n`` maps ``e_r`` to ``e_{(n + r) mod d}``: column 0 is ``e_n``,
    the other columns are distinct basis vectors, and the ``n``-th entry
    of every shifted column is zero, so all three conditions hold
    exactly.
    """
    p = check_probabilities(p)
    d = p.size
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    ops = []
    C = np.eye(d, dtype=complex)
    for n in range(d):
        ops.append(math.sqrt(p[n]) * C)
        C = shift @ C
    return KrausSet(tuple(ops), probabilities=p)


@dataclass
class ConditionReport:
    """Per-condition maximum deviations from :func:`validate_conditions`."""

    deviations: dict[str, float]
    tol: float
    skipped: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def passed(self, name: str) -> bool:
        return self.deviations[name] < self.tol

    @property
    def ok(self) -> bool:
        return all(self.passed(name) for name in self.deviations)

    def lines(self) -> list[str]:
        out = [
            f"{name:<26} {'pass' if self.passed(name) else 'FAIL'}  max deviation {dev:.3e}"
            for name, dev in self.deviations.items()
        ]
        return out + [f"note: {n}" for n in self.notes]


def validate_conditions(K: KrausSet, p=None, tol: float = 1e-12) -> ConditionReport:
    """Check completeness and the three structural conditions.

    ``p`` defaults to the probabilities stored on ``K``. Operators with
    ``p_n = 0`` have no ``C_n`` and are skipped with a note.
    """
    p = check_probabilities(K.probabilities if p is None else p)
    d = K.dim
    if len(K) != d or p.size != d:
        raise ValueError(f"need one operator per level: {len(K)} operators, {p.size} probabilities, dim {d}")

    ortho = match = 0.0
    orth_sum = np.zeros(d, dtype=complex)
    report = ConditionReport({}, tol)
    for n, w in enumerate(K.ops):
        if p[n] == 0.0:
            report.skipped.append(n)
            report.notes.append(f"p_{n} = 0: C_{n} undefined, operator skipped")
            continue
        C = w / math.sqrt(p[n])
        gram = C[:, 1:].conj().T @ C[:, 1:]
        ortho = max(ortho, float(np.abs(gram - np.eye(d - 1)).max()))
        match = max(match, float(np.abs(C[:, 0] - np.eye(d)[n]).max()))
        orth_sum += p[n] * C[n, :]

    report.deviations = {
        "completeness": completeness_deviation(K),
        "orthonormality": ortho,
        "probability matching": match,
        "probability orthogonality": float(np.abs(orth_sum[1:]).max()),
    }
    return report


def conjugate_set(K: KrausSet, U, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> KrausSet:
    """``{U w U†}``: the channel expressed in the frame rotated by ``U``."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (K.dim, K.dim):
        raise ValueError(f"dimension mismatch: Kraus set is {K.dim}, U is {U.shape}")
    dev = unitarity_deviation(U)
    if dev >= tol.unitarity_tol:
        raise KrausValidationError(f"conjugating matrix is not unitary (deviation {dev:.3e})")
    Ud = U.conj().T
    return KrausSet(tuple(U @ w @ Ud for w in K.ops))


def compose_sets(K1: KrausSet, K2: KrausSet, prune: float | None = None) -> KrausSet:
    """Kraus set of "apply ``K2``, then ``K1``": products ``w1_i w2_j``.

    With ``prune`` set, products with Frobenius norm at most ``prune``
    are dropped; by default nothing is removed.
    """
    if K1.dim != K2.dim:
        raise ValueError(f"dimension mismatch: {K1.dim} vs {K2.dim}")
    ops = [w1 @ w2 for w1 in K1.ops for w2 in K2.ops]
    if prune is not None:
        ops = [w for w in ops if np.linalg.norm(w) > prune]
    return KrausSet(tuple(ops))


def thermal_kraus(t: ThermalParams, dim: int, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> KrausSet:
    """Canonical set taking |0><0| to the free thermal state at ``dim``."""
    dim = check_dim(dim)
    check_thermal_tail(t, dim, tol)
    return canonical_set(thermal_populations(t, dim))


def kraus_to_json(K: KrausSet) -> str:
    data = {
        "dim": K.dim,
        "ops": [{"re": w.real.tolist(), "im": w.imag.tolist()} for w in K.ops],
        "p": None if K.probabilities is None else K.probabilities.tolist(),
    }
    return json.dumps(data)


def kraus_from_json(text: str) -> KrausSet:
    data = json.loads(text)
    ops = tuple(np.asarray(o["re"], dtype=float) + 1j * np.asarray(o["im"], dtype=float) for o in data["ops"])
    K = KrausSet(ops, probabilities=data.get("p"))
    if K.dim != data["dim"]:
        raise ValueError(f"dim {data['dim']} does not match operator shape {K.dim}")
    return K
