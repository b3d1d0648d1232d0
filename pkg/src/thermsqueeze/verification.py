"""Self-check suite behind ``thermsqueeze verify``.

Each check returns a non-negative deviation that is compared against a
single tolerance. Checks whose state does not fit in the requested
dimension are skipped with a note instead of failing.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import fock, group, kraus, snr, states
from .errors import TruncationError
from .group import GroupElement, SqueezeParams, from_squeeze_params
from .states import ThermalParams


@dataclass
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "skip"
    deviation: float | None
    tol: float
    note: str = ""

    def line(self) -> str:
        dev = "-" if self.deviation is None else f"{self.deviation:.3e}"
        tail = f"  ({self.note})" if self.note else ""
        return f"[{self.status.upper():4}] {self.name:<44} {dev:>10}  tol {self.tol:.1e}{tail}"

    def as_dict(self) -> dict:
        return asdict(self)


def _random_element(rng: np.random.Generator, r_max: float, alpha_max: float) -> GroupElement:
    p = SqueezeParams(rng.uniform(0, r_max), rng.uniform(0, 2 * math.pi))
    alpha = alpha_max * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
    return from_squeeze_params(p, alpha)


def _commutator_corner(dim: int, rng) -> float:
    c = fock.commutator(fock.lowering(dim), fock.raising(dim))
    expected = np.eye(dim)
    expected[-1, -1] = -(dim - 1)
    return float(np.abs(c - expected).max())


def _expm_inverse(dim: int, rng) -> float:
    M = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    M *= 10.0 / np.linalg.norm(M)
    E = fock.matrix_exponential(M) @ fock.matrix_exponential(-M)
    return float(np.abs(E - np.eye(dim)).max())


def _group_inverse(dim: int, rng) -> float:
    worst = 0.0
    ident = GroupElement.identity()
    for _ in range(200):
        g = _random_element(rng, 2.0, 3.0)
        h = group.compose(g, group.inverse(g))
        worst = max(worst, abs(h.lam - ident.lam), abs(h.mu), abs(h.alpha))
    return worst


def _homomorphism(dim: int, rng) -> float:
    worst = 0.0
    for _ in range(5):
        g1 = _random_element(rng, 0.3, 0.5)
        g2 = _random_element(rng, 0.3, 0.5)
        g12 = group.compose(g1, g2)
        k = min(group.guaranteed_block(g, dim) for g in (g1, g2, g12))
        if k < 2:
            raise TruncationError(f"guaranteed block of size {k} at dim={dim}")
        A = group.to_unitary(g12, dim)[:k, :k]
        B = (group.to_unitary(g1, dim) @ group.to_unitary(g2, dim))[:k, :k]
        worst = max(worst, group.phase_aligned_deviation(A, B))
    return worst


def _conjugation(dim: int, rng) -> float:
    g = _random_element(rng, 0.3, 0.5)
    k = group.guaranteed_block(g, dim) - 1
    if k < 2:
        raise TruncationError(f"guaranteed block too small at dim={dim}")
    U = group.to_unitary(g, dim)
    a = fock.lowering(dim)
    c_a, c_ad, c_id = group.transform_mode(g)
    expected = c_a * a + c_ad * a.conj().T + c_id * np.eye(dim)
    return float(np.abs((U @ a @ U.conj().T - expected)[:k, :k]).max())


def _partition_function(dim: int, rng) -> float:
    worst = 0.0
    for x in (math.log(2), 2.0, 50.0):
        t = ThermalParams(x)
        states.check_thermal_tail(t, dim)
        spectral = math.fsum(math.exp(-x * (n + 0.5)) for n in range(dim))
        worst = max(worst, abs(spectral / states.partition_function(t) - 1.0))
    return worst


def _mean_photon(dim: int, rng) -> float:
    worst = 0.0
    for x in (math.log(2), math.log(1.5), 2.0):
        t = ThermalParams(x)
        rho = states.free_thermal(t, dim)
        oracle = states.thermal_average(rho, fock.number(dim)).real
        worst = max(worst, abs(oracle - states.mean_photon(t)))
    return worst


def _variances(dim: int, rng) -> float:
    worst = 0.0
    for r in (0.0, 0.3):
        for phi in (0.0, math.pi / 3):
            for alpha in (0.0, 0.5):
                for x in (2.0, 50.0):
                    g = from_squeeze_params(SqueezeParams(r, phi), alpha)
                    t = ThermalParams(x)
                    rho = states.thermal_squeezed(g, t, dim)
                    closed = states.quadrature_variances_closed(g, states.mean_photon(t))
                    oracle = states.quadrature_variances(rho)
                    worst = max(worst, abs(closed[0] - oracle[0]), abs(closed[1] - oracle[1]))
    return worst


def _trace_invariance(dim: int, rng) -> float:
    g = from_squeeze_params(SqueezeParams(0.3, 0.4), 0.5)
    t = ThermalParams(2.0)
    states.check_thermal_tail(t, dim)
    group.check_sector(g, dim)
    H = states.transformed_hamiltonian(g, dim)
    z = np.exp(-t.beta * np.linalg.eigvalsh(H)).sum()
    return abs(z / states.partition_function(t) - 1.0)


def _yuen_limit(dim: int, rng) -> float:
    worst = 0.0
    for N in (0.5, 1.0, 2.0, 4.0):
        worst = max(worst, abs(snr.optimal_sigma(N, 0.0) - 4 * N * (N + 1)))
        for nbar in (0.0, 0.3, 1.0):
            if nbar > N:
                continue
            _, numeric = snr.maximize_reduced_objective(N, nbar)
            exact = snr.optimal_sigma(N, nbar)
            worst = max(worst, abs(numeric - exact) / max(exact, 1.0))
    return worst


def _optimum_state(dim: int, rng) -> float:
    worst = 0.0
    X = fock.position_quadrature(dim)
    P = fock.momentum_quadrature(dim)
    n_op = fock.number(dim)
    for N, nbar in ((1.0, 0.0), (2.0, 1.0)):
        opt = snr.optimal_params(N, nbar)
        g = opt.element()
        if nbar == 0:
            rho = states.squeezed(g, dim)
        else:
            rho = states.thermal_squeezed(g, ThermalParams.from_mean_photon(nbar), dim)
        mx = states.thermal_average(rho, X).real
        var_x = states.thermal_average(rho, X @ X).real - mx**2
        worst = max(
            worst,
            abs(states.thermal_average(rho, n_op).real - N),
            abs(states.thermal_average(rho, P)),
            abs(mx**2 / var_x - opt.sigma) / opt.sigma,
        )
    return worst


def _two_level_set(dim: int, rng) -> float:
    worst = 0.0
    rho0 = np.diag([1.0, 0.0]).astype(complex)
    for p in (0.0, 0.25, 0.75, 1.0):
        K = kraus.two_level_set(p)
        out = kraus.apply_channel(K, rho0)
        worst = max(worst, kraus.completeness_deviation(K), float(np.abs(out - np.diag([p, 1 - p])).max()))
    return worst


def _canonical_conditions(dim: int, rng) -> float:
    worst = 0.0
    for d in range(2, min(dim, 16) + 1):
        p = rng.dirichlet(np.ones(d))
        report = kraus.validate_conditions(kraus.canonical_set(p))
        worst = max(worst, *report.deviations.values())
    return worst


def _conjugated_thermalizer(dim: int, rng) -> float:
    g = from_squeeze_params(SqueezeParams(0.3, 0.7), 0.5 + 0.2j)
    t = ThermalParams(2.0)
    K = kraus.conjugate_set(kraus.thermal_kraus(t, dim), group.to_unitary(g, dim))
    out = kraus.apply_channel(K, states.squeezed(g, dim))
    return fock.trace_distance(out, states.thermal_squeezed(g, t, dim))


def _semigroup(dim: int, rng) -> float:
    d = min(dim, 6)
    sets = [kraus.canonical_set(rng.dirichlet(np.ones(d))) for _ in range(2)]
    U = fock.matrix_exponential(1j * _random_hermitian(rng, d))
    sets[1] = kraus.conjugate_set(sets[1], U)
    K12 = kraus.compose_sets(sets[0], sets[1])
    rho = _random_state(rng, d)
    seq = kraus.apply_channel(sets[0], kraus.apply_channel(sets[1], rho))
    return max(kraus.completeness_deviation(K12), fock.frobenius_distance(kraus.apply_channel(K12, rho), seq))


def _random_hermitian(rng, d: int) -> np.ndarray:
    M = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (M + M.conj().T)


def _random_state(rng, d: int) -> np.ndarray:
    M = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = M @ M.conj().T
    return rho / np.trace(rho)


CHECKS: list[tuple[str, Callable[[int, np.random.Generator], float]]] = [
    ("fock: commutator corner", _commutator_corner),
    ("fock: exp(M) exp(-M) = I", _expm_inverse),
    ("group: g g^-1 = identity", _group_inverse),
    ("group: homomorphism on guaranteed block", _homomorphism),
    ("group: U a U† = lam a + mu a† - alpha", _conjugation),
    ("states: partition function vs spectral sum", _partition_function),
    ("states: mean photon vs trace oracle", _mean_photon),
    ("states: variances closed form vs oracle", _variances),
    ("states: trace invariance of exp(-beta H)", _trace_invariance),
    ("snr: Yuen limit and numeric optimum", _yuen_limit),
    ("snr: optimal-parameter full state", _optimum_state),
    ("kraus: two-level set", _two_level_set),
    ("kraus: canonical set conditions", _canonical_conditions),
    ("kraus: conjugated thermaliser", _conjugated_thermalizer),
    ("kraus: semigroup composition", _semigroup),
]


def run_checks(dim: int = fock.DEFAULT_DIM, tol: float = 1e-8, seed: int = 20240601) -> list[CheckResult]:
    """Run every check at ``dim``; deterministic for a fixed ``seed``."""
    dim = fock.check_dim(dim)
    results = []
    for name, check in CHECKS:
        rng = np.random.default_rng(seed)
        try:
            dev = float(check(dim, rng))
        except TruncationError as exc:
            results.append(CheckResult(name, "skip", None, tol, f"regime: {exc}"))
            continue
        status = "pass" if dev <= tol else "fail"
        results.append(CheckResult(name, status, dev, tol))
    return results
