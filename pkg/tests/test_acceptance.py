"""Acceptance suite: end-to-end numerical guarantees of the package.

Each test prints one summary line.  Tolerances are part of the contract and
must not be loosened.
"""

import math
import time

import numpy as np
import pytest

from mimome.asymptotics import (
    AspectRatios,
    f1_limit,
    monte_carlo_gsv,
    optimal_allocation,
    zero_boundary,
)
from mimome.certify import certify
from mimome.channel import ChannelPair, sample_gaussian_pair
from mimome.rates import grad_K, grad_Phi, r_plus
from mimome.saddle import SolverConfig, duality_gap, solve
from mimome.spectral import zero_capacity_test

LN_2_5 = math.log(2.5)


# --- shared instance batch for criteria 1 and 4 ------------------------------

def _criterion1_instances():
    rng = np.random.default_rng(20260826)
    out = []
    for i in range(50):
        dims = tuple(int(d) for d in rng.integers(1, 5, size=3))
        P = float(rng.choice([1.0, 10.0]))
        pair = sample_gaussian_pair(*dims, seed=7000 + i)
        out.append((pair, P))
    return out


@pytest.fixture(scope="module")
def solved_batch():
    results = []
    for pair, P in _criterion1_instances():
        t0 = time.time()
        res = solve(pair, P, SolverConfig(tol_gap=1e-9))
        results.append((pair, P, res, time.time() - t0))
    return results


def test_criterion_1_saddle_point_equality(solved_batch):
    """50 random instances: converged, gap <= 1e-6 nats, <= 10 s each."""
    worst_gap, worst_time = 0.0, 0.0
    for pair, P, res, dt in solved_batch:
        assert res.converged, (pair.n_t, pair.n_r, pair.n_e, P, res.status)
        gap = max(duality_gap(pair, res.K_bar, res.Phi_bar), res.final_gap)
        assert gap <= 1e-6
        assert dt <= 10.0
        worst_gap = max(worst_gap, gap)
        worst_time = max(worst_time, dt)
    print(f"criterion 1: PASS (worst gap {worst_gap:.2e}, "
          f"worst time {worst_time:.2f}s)")


def test_criterion_2_scalar_closed_form():
    """Scalar capacity ln(5/2) against a 1e6-point grid oracle."""
    # grid oracle over k in [0, 1]
    k = np.linspace(0.0, 1.0, 10 ** 6)
    grid_max = np.max(np.log1p(4.0 * k) - np.log1p(k))
    assert abs(grid_max - LN_2_5) < 1e-9

    pair = ChannelPair(np.array([[2.0 + 0j]]), np.array([[1.0 + 0j]]))
    res = solve(pair, 1.0, SolverConfig(tol_gap=1e-9))
    assert res.converged
    assert abs(res.capacity_nats - LN_2_5) < 1e-7
    assert abs(res.capacity_nats - grid_max) < 1e-7

    rng = np.random.default_rng(1)
    for _ in range(10):
        he = rng.uniform(0.5, 2.0)
        hr = he * rng.uniform(0.1, 1.0)
        weak = ChannelPair(np.array([[hr + 0j]]), np.array([[he + 0j]]))
        res = solve(weak, 1.0)
        assert res.converged
        assert res.capacity_nats <= 1e-8
    print(f"criterion 2: PASS (|capacity - ln(5/2)| = "
          f"{abs(res.capacity_nats):.2e} on degraded scalars)")


def test_criterion_3_global_optimality_sandwich():
    """r_minus at the solution beats 1e5 random feasible covariances."""
    rng = np.random.default_rng(2)
    P = 2.0
    worst_margin = np.inf
    for trial in range(20):
        pair = sample_gaussian_pair(2, 2, 2, seed=7700 + trial)
        res = solve(pair, P, SolverConfig(tol_gap=1e-8))
        assert res.converged

        n = 10 ** 5
        a = rng.standard_normal((n, 2, 2)) + 1j * rng.standard_normal((n, 2, 2))
        Ks = a @ a.conj().transpose(0, 2, 1)
        traces = np.einsum("nii->n", Ks).real
        # half at full power, half at a random fraction of it
        frac = np.where(rng.random(n) < 0.5, 1.0, rng.random(n))
        Ks *= (P * frac / traces)[:, None, None]

        eye2 = np.eye(2)
        m_r = eye2 + pair.Hr @ Ks @ pair.Hr.conj().T
        m_e = eye2 + pair.He @ Ks @ pair.He.conj().T
        vals = np.linalg.slogdet(m_r)[1] - np.linalg.slogdet(m_e)[1]
        margin = res.capacity_nats - vals.max()
        worst_margin = min(worst_margin, margin)
        assert margin >= -1e-3
    print(f"criterion 3: PASS (worst margin over random search "
          f"{worst_margin:+.2e} nats)")


def test_criterion_4_certificates(solved_batch):
    """Every converged instance passes the optimality certificate."""
    worst = {"noise": 0.0, "degr": 0.0, "psi": 0.0}
    for pair, P, res, _ in solved_batch:
        cert = certify(pair, res.K_bar, res.Phi_bar, P)
        assert cert.noise_condition_residual <= 1e-4
        assert cert.degradedness_residual <= 1e-4
        assert cert.psi_min_eig >= -1e-5 * max(cert.lambda0, 1e-12)
        assert cert.full_rank_M or cert.zero_saddle or cert.rank_S == 0
        assert abs(cert.capacity_nats - res.capacity_nats) < 1e-12
        worst["noise"] = max(worst["noise"], cert.noise_condition_residual)
        worst["degr"] = max(worst["degr"], cert.degradedness_residual)
        worst["psi"] = min(worst["psi"], cert.psi_min_eig)
    print(f"criterion 4: PASS (worst noise {worst['noise']:.2e}, "
          f"degradedness {worst['degr']:.2e}, psi_min {worst['psi']:.2e})")


def test_criterion_5_zero_capacity_equivalence():
    """Capacity < 1e-5 nats iff the generalized singular value is <= 1."""
    rng = np.random.default_rng(5)
    cfg = SolverConfig(tol_gap=1e-6, zero_cap_pretest=False)
    tested = disagreements = 0
    for i in range(200):
        base = sample_gaussian_pair(3, 3, 4, seed=8800 + i)
        target = 1.0 + rng.uniform(-0.5, 0.5)
        sigma0 = zero_capacity_test(base).sigma_max_gen
        pair = ChannelPair((target / sigma0) * base.Hr, base.He)
        rep = zero_capacity_test(pair)
        if abs(rep.margin) < 0.02:
            continue
        tested += 1
        res = solve(pair, 4.0, cfg)
        assert res.converged, (i, rep.margin, res.status, res.final_gap)
        solver_zero = res.capacity_nats < 1e-5
        if solver_zero != rep.capacity_zero:
            disagreements += 1
    assert disagreements == 0
    print(f"criterion 5: PASS ({tested} instances, 0 disagreements)")


def test_criterion_6_gradient_correctness():
    """Analytic gradients match central finite differences to 1e-5."""
    rng = np.random.default_rng(6)
    h = 1e-6
    worst = 0.0
    for _ in range(100):
        n_t, n_r, n_e = (int(d) for d in rng.integers(1, 4, size=3))
        pair = ChannelPair(
            rng.standard_normal((n_r, n_t)) + 1j * rng.standard_normal((n_r, n_t)),
            rng.standard_normal((n_e, n_t)) + 1j * rng.standard_normal((n_e, n_t)))
        a = rng.standard_normal((n_t, n_t)) + 1j * rng.standard_normal((n_t, n_t))
        K = a @ a.conj().T
        K *= 2.0 * rng.uniform(0.2, 0.8) / np.trace(K).real
        b = rng.standard_normal((n_r, n_e)) + 1j * rng.standard_normal((n_r, n_e))
        Phi = rng.uniform(0.2, 0.8) * b / np.linalg.svd(b, compute_uv=False)[0]

        e = rng.standard_normal((n_t, n_t)) + 1j * rng.standard_normal((n_t, n_t))
        e = e + e.conj().T
        num = (r_plus(pair, K + h * e, Phi) - r_plus(pair, K - h * e, Phi)) / (2 * h)
        ana = np.trace(grad_K(pair, K, Phi) @ e).real
        rel = abs(num - ana) / max(1.0, abs(ana))
        assert rel <= 1e-5
        worst = max(worst, rel)

        f = rng.standard_normal(Phi.shape) + 1j * rng.standard_normal(Phi.shape)
        num = (r_plus(pair, K, Phi + h * f) - r_plus(pair, K, Phi - h * f)) / (2 * h)
        ana = np.trace(grad_Phi(pair, K, Phi).conj().T @ f).real
        rel = abs(num - ana) / max(1.0, abs(ana))
        assert rel <= 1e-5
        worst = max(worst, rel)
    print(f"criterion 6: PASS (worst relative deviation {worst:.2e})")


def test_criterion_7_asymptotics():
    """Boundary identity to 1e-10; Monte Carlo within 5% of the limit."""
    t0 = time.time()
    for b in np.linspace(0.005, 0.495, 50):
        g = zero_boundary(float(b))
        assert abs(f1_limit(AspectRatios(float(b), g)) - 1.0) <= 1e-10

    r = AspectRatios(0.25, 0.5)
    stats = monte_carlo_gsv(r, 200, 50, master_seed=7)
    f1 = f1_limit(r)
    rel = abs(stats["mean"] - f1) / f1
    elapsed = time.time() - t0
    assert elapsed <= 120.0
    print(f"criterion 7: mean {stats['mean']:.4f} vs limit {f1:.4f} "
          f"(rel {rel:.2%}, {elapsed:.1f}s)")
    assert rel <= 0.05, (
        f"finite-size deviation {rel:.2%} exceeds 5% at n_e=200; "
        "the mean approaches the limit from below at rate n_t**(-2/3)")


def test_criterion_8_allocation_constants(capsys):
    """The allocation command prints the closed-form constants."""
    from mimome.cli import main
    code = main(["allocate"])
    out = capsys.readouterr().out
    assert code == 0
    assert "beta*=0.222222 gamma*=0.111111 sum=0.333333" in out
    a = optimal_allocation()
    assert abs(a["min_sum"] - 1.0 / 3.0) <= 1e-9
    assert abs(a["equal_split"] - 2.914214) <= 1e-6
    with capsys.disabled():
        print("criterion 8: PASS (beta*=2/9, gamma*=1/9, sum=1/3, "
              "equal split 2.914214)")


def test_criterion_9_concavity_convexity_probes():
    """Midpoint concavity in K and convexity in Phi on 500 random triples."""
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(500):
        n_t, n_r, n_e = (int(d) for d in rng.integers(1, 4, size=3))
        pair = ChannelPair(
            rng.standard_normal((n_r, n_t)) + 1j * rng.standard_normal((n_r, n_t)),
            rng.standard_normal((n_e, n_t)) + 1j * rng.standard_normal((n_e, n_t)))

        def rand_K():
            a = rng.standard_normal((n_t, n_t)) + 1j * rng.standard_normal((n_t, n_t))
            K = a @ a.conj().T
            return K * (2.0 * rng.uniform(0.1, 0.9) / np.trace(K).real)

        def rand_Phi():
            b = rng.standard_normal((n_r, n_e)) + 1j * rng.standard_normal((n_r, n_e))
            return rng.uniform(0.1, 0.9) * b / np.linalg.svd(b, compute_uv=False)[0]

        K1, K2, Phi = rand_K(), rand_K(), rand_Phi()
        mid = r_plus(pair, 0.5 * (K1 + K2), Phi)
        avg = 0.5 * (r_plus(pair, K1, Phi) + r_plus(pair, K2, Phi))
        assert mid >= avg - 1e-9  # concave in the input covariance
        worst = max(worst, avg - mid)

        K, Phi1, Phi2 = rand_K(), rand_Phi(), rand_Phi()
        mid = r_plus(pair, K, 0.5 * (Phi1 + Phi2))
        avg = 0.5 * (r_plus(pair, K, Phi1) + r_plus(pair, K, Phi2))
        assert mid <= avg + 1e-9  # convex in the noise coupling
        worst = max(worst, mid - avg)
    print(f"criterion 9: PASS (worst violation {worst:.2e})")
