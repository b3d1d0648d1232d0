"""Acceptance suite: one pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` (the lines are printed
even without ``-s``). Every criterion runs at dim <= 64.
"""

import cmath
import math

import numpy as np
import pytest

from thermsqueeze import fock, group, kraus, snr, states
from thermsqueeze.errors import TruncationError
from thermsqueeze.group import GroupElement, SqueezeParams, compose, from_squeeze_params, inverse
from thermsqueeze.states import ThermalParams

DIM = 64
LN2 = math.log(2)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}")
        return ok

    return emit


def random_element(rng, r_max, a_max):
    alpha = a_max * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
    return from_squeeze_params(SqueezeParams(rng.uniform(0, r_max), rng.uniform(0, 2 * math.pi)), alpha)


def test_criterion_1_yuen_limit(report):
    exact_ok = all(snr.optimal_sigma(N, 0.0) == 4 * N * (N + 1) for N in (0.5, 1.0, 2.0, 4.0))
    worst = 0.0
    for N in (0.5, 1.0, 2.0, 4.0):
        _, numeric = snr.maximize_reduced_objective(N, 0.0)
        worst = max(worst, abs(numeric - 4 * N * (N + 1)) / (4 * N * (N + 1)))
    ok = exact_ok and worst <= 1e-8
    assert report(1, "Yuen limit 4N(N+1)", ok, f"exact={exact_ok}, numeric max rel dev {worst:.2e} (tol 1e-8)")


def test_criterion_2_degradation_curve(report):
    rows = snr.temperature_sweep(1.0, 0.01, 3.0, 100)
    start = rows[0].sigma_ratio
    ratios = [r.sigma_ratio for r in rows if r.nbar < 1.0]
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    at_match = snr.optimal_sigma(1.0, states.mean_photon(ThermalParams.from_temperature(1 / LN2))) / 8.0
    beyond = all(r.sigma_ratio == 0.0 for r in rows if r.nbar >= 1.0)
    ok = abs(start - 1.0) < 1e-12 and decreasing and abs(at_match) < 1e-12 and beyond
    detail = (
        f"ratio(T=0.01)={start:.12f}, strictly decreasing={decreasing}, "
        f"ratio at nbar=N: {at_match:.1e}, zero beyond={beyond}"
    )
    assert report(2, "degradation of sigma_T/sigma_0 for N=1", ok, detail)


def test_criterion_3_variance_closed_forms(report):
    failures = []
    worst_ok = 0.0
    for r in (0.0, 0.3, 1.0):
        for phi in (0.0, math.pi / 3):
            for amp in (0.0, 1.0):
                for x in (LN2, 2.0, 50.0):
                    g = from_squeeze_params(SqueezeParams(r, phi), amp)
                    t = ThermalParams(x)
                    nbar = states.mean_photon(t)
                    closed = states.quadrature_variances_closed(g, nbar)
                    label = f"r={r:g} phi={phi:.3f} |alpha|={amp:g} beta_eps={x:.3f}"
                    try:
                        rho = states.thermal_squeezed(g, t, DIM)
                    except TruncationError as exc:
                        failures.append(f"{label}: does not fit at dim {DIM} ({exc})")
                        continue
                    vx, vp = states.quadrature_variances(rho)
                    product = abs(g.lam**2 - g.mu**2) ** 2 * (nbar + 0.5) ** 2
                    var_dev = max(abs(vx - closed[0]), abs(vp - closed[1]))
                    prod_dev = abs(vx * vp - product)
                    dev = max(var_dev, prod_dev)
                    if dev > 1e-6:
                        leak = states.truncation_leak(g, t, DIM)
                        failures.append(
                            f"{label}: variance dev {var_dev:.2e}, product dev {prod_dev:.2e}, "
                            f"leak past cutoff {leak:.1e}"
                        )
                    else:
                        worst_ok = max(worst_ok, dev)
    ok = not failures
    detail = f"36 grid points at dim {DIM}, {36 - len(failures)} within 1e-6 (worst passing {worst_ok:.1e})"
    if failures:
        detail += "; failing:\n    " + "\n    ".join(failures)
    assert report(3, "variance closed forms vs trace oracle", ok, detail)


def test_criterion_4_partition_function(report):
    worst_z = 0.0
    for x in (LN2, 1.0, 2.0, 5.0, 50.0):
        spectral = math.fsum(math.exp(-x * (n + 0.5)) for n in range(DIM))
        worst_z = max(worst_z, abs(spectral / states.partition_function(ThermalParams(x)) - 1))
    worst_inv = 0.0
    for r in (0.0, 0.3):
        for phi in (0.0, math.pi / 3):
            for amp in (0.0, 1.0):
                g = from_squeeze_params(SqueezeParams(r, phi), amp)
                U = group.to_unitary(g, DIM)
                conjugated = U @ (fock.number(DIM) + 0.5 * np.eye(DIM)) @ U.conj().T
                explicit = states.transformed_hamiltonian(g, DIM)
                for x in (LN2, 2.0, 50.0):
                    z = states.partition_function(ThermalParams(x))
                    for H in (conjugated, explicit):
                        w = np.linalg.eigvalsh(0.5 * (H + H.conj().T))
                        worst_inv = max(worst_inv, abs(np.exp(-x * w).sum() / z - 1))
    ok = worst_z <= 1e-10 and worst_inv <= 1e-8
    detail = f"closed vs spectral max rel dev {worst_z:.1e} (tol 1e-10); trace invariance {worst_inv:.1e} (tol 1e-8)"
    assert report(4, "partition function and trace invariance", ok, detail)


def test_criterion_5_group_arithmetic(report):
    rng = np.random.default_rng(5)
    e = GroupElement.identity()
    worst_inv = 0.0
    for _ in range(1000):
        g = random_element(rng, 2.0, 3.0)
        h = compose(g, inverse(g))
        worst_inv = max(worst_inv, abs(h.lam - e.lam), abs(h.mu), abs(h.alpha))
    worst_hom = 0.0
    smallest = DIM
    for _ in range(20):
        g1, g2 = random_element(rng, 0.3, 0.5), random_element(rng, 0.3, 0.5)
        g12 = compose(g1, g2)
        k = min(group.guaranteed_block(g, DIM, tol=1e-8) for g in (g1, g2, g12))
        smallest = min(smallest, k)
        A = group.to_unitary(g12, DIM)[:k, :k]
        B = (group.to_unitary(g1, DIM) @ group.to_unitary(g2, DIM))[:k, :k]
        worst_hom = max(worst_hom, group.phase_aligned_deviation(A, B))
    ok = worst_inv <= 1e-12 and worst_hom <= 1e-6 and smallest >= 4
    detail = (
        f"g g^-1 max dev {worst_inv:.1e} over 1000 (tol 1e-12); homomorphism {worst_hom:.1e} "
        f"on blocks >= {smallest} levels (tol 1e-6)"
    )
    assert report(5, "group inverse and homomorphism", ok, detail)


def test_criterion_6_kraus(report):
    rho0 = states.vacuum(2)
    two_level = 0.0
    for p in (0.0, 0.25, 0.75, 1.0):
        K = kraus.two_level_set(p)
        out = kraus.apply_channel(K, rho0)
        two_level = max(two_level, kraus.completeness_deviation(K))
        assert np.abs(out - np.diag([p, 1 - p])).max() <= 4 * np.finfo(float).eps
    rng = np.random.default_rng(6)
    canonical = 0.0
    for d in range(2, 17):
        for _ in range(5):
            rep = kraus.validate_conditions(kraus.canonical_set(rng.dirichlet(np.ones(d))))
            canonical = max(canonical, *rep.deviations.values())
    conj = 0.0
    for r in (0.0, 0.25, 0.5):
        for alpha in (0.0, 1.0, 1j, cmath.exp(0.25j * math.pi)):
            for x in (LN2, 2.0, 50.0):
                g = from_squeeze_params(SqueezeParams(r, 0.7), alpha)
                t = ThermalParams(x)
                Kc = kraus.conjugate_set(kraus.thermal_kraus(t, DIM), group.to_unitary(g, DIM))
                out = kraus.apply_channel(Kc, states.squeezed(g, DIM))
                conj = max(conj, fock.trace_distance(out, states.thermal_squeezed(g, t, DIM)))
    semigroup = 0.0
    for _ in range(5):
        d = int(rng.integers(2, 9))
        K1 = kraus.canonical_set(rng.dirichlet(np.ones(d)))
        q, _ = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
        K2 = kraus.conjugate_set(kraus.canonical_set(rng.dirichlet(np.ones(d))), q)
        semigroup = max(semigroup, kraus.completeness_deviation(kraus.compose_sets(K1, K2)))
    ok = two_level <= 1e-12 and canonical <= 1e-12 and conj <= 1e-6 and semigroup <= 1e-10
    detail = (
        f"two-level completeness {two_level:.1e}; canonical conditions {canonical:.1e}; "
        f"conjugated thermaliser trace distance {conj:.1e}; composed completeness {semigroup:.1e}"
    )
    assert report(6, "Kraus sets", ok, detail)


def test_criterion_7_optimal_state(report):
    worst = 0.0
    for N, nbar in ((0.5, 0.0), (1.0, 0.0), (2.0, 1.0), (1.0, 0.3)):
        opt = snr.optimal_params(N, nbar)
        g = opt.element()
        if nbar == 0:
            rho = states.squeezed(g, DIM)
        else:
            rho = states.thermal_squeezed(g, ThermalParams.from_mean_photon(nbar), DIM)
        X, P = fock.position_quadrature(DIM), fock.momentum_quadrature(DIM)
        mx = states.thermal_average(rho, X).real
        var_x = states.thermal_average(rho, X @ X).real - mx**2
        worst = max(
            worst,
            abs(states.thermal_average(rho, fock.number(DIM)).real - N),
            abs(states.thermal_average(rho, P)),
            abs(mx**2 / var_x - opt.sigma),
        )
    # the displacement without the outer square root misses the budget
    lam, mu = 2 / math.sqrt(3), 1 / math.sqrt(3)
    rho = states.squeezed(GroupElement(lam, mu, 2.0), DIM)
    unrooted_n = states.thermal_average(rho, fock.number(DIM)).real
    ok = worst <= 1e-6 and abs(unrooted_n - 1.0) > 1e-6
    detail = (
        f"max dev of <n>, <P>, <X>^2/VarX {worst:.1e} (tol 1e-6); "
        f"unrooted displacement gives <n>={unrooted_n:.6f} at N=1"
    )
    assert report(7, "optimal-parameter full state", ok, detail)
