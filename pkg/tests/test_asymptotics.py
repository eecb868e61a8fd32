"""Tests for the large-array laws and Monte Carlo experiments."""

import math

import numpy as np
import pytest

from mimome.asymptotics import (
    AspectRatios,
    DomainError,
    f1_limit,
    monte_carlo_gsv,
    optimal_allocation,
    phase_csv_rows,
    phase_diagram,
    zero_boundary,
    zero_region,
)

EQUAL_SPLIT = (3.0 + 2.0 * math.sqrt(2.0)) / 2.0  # 2.914213562373095


def test_f1_at_optimal_allocation_is_one():
    # radicand 1 - (7/9)(1 - 2) = 16/9, root 4/3, (1 + 4/3)/(7/9) = 3,
    # squared 9, times gamma = 1/9 gives exactly 1
    assert abs(f1_limit(AspectRatios(2.0 / 9.0, 1.0 / 9.0)) - 1.0) < 1e-12


def test_f1_small_beta_limit_is_gamma():
    for gamma in (0.3, 1.0, 2.5):
        val = f1_limit(AspectRatios(1e-12, gamma))
        assert abs(val - gamma) < 1e-5


def test_f1_equals_one_on_zero_boundary():
    betas = np.linspace(0.01, 0.49, 50)
    for b in betas:
        g = zero_boundary(float(b))
        assert abs(f1_limit(AspectRatios(float(b), g)) - 1.0) < 1e-10


def test_f1_domain_errors():
    with pytest.raises(DomainError):
        f1_limit(AspectRatios(1.2, 0.5))
    with pytest.raises(DomainError):
        f1_limit(AspectRatios(0.2, 0.0))
    with pytest.raises(DomainError):
        AspectRatios(-0.1, 0.5)


def test_zero_region_intercepts():
    assert zero_region(AspectRatios(0.5, 0.0))
    assert zero_region(AspectRatios(0.0, 1.0))
    assert not zero_region(AspectRatios(0.0, 1.01))
    assert zero_region(AspectRatios(2.0 / 9.0, 1.0 / 9.0))
    assert not zero_region(AspectRatios(2.0 / 9.0, 1.0 / 9.0 + 1e-9))


def test_zero_region_monotone():
    rng = np.random.default_rng(0)
    for _ in range(200):
        b = rng.uniform(0.0, 0.5)
        g = rng.uniform(0.0, 1.0)
        if zero_region(AspectRatios(b, g)):
            assert zero_region(AspectRatios(b, g * 0.5))
            assert zero_region(AspectRatios(b * 0.5, g))


def test_optimal_allocation_constants():
    a = optimal_allocation()
    assert abs(a["beta_star"] - 2.0 / 9.0) < 1e-6
    assert abs(a["gamma_star"] - 1.0 / 9.0) < 1e-6
    assert abs(a["min_sum"] - 1.0 / 3.0) < 1e-9
    assert abs(a["equal_split"] - EQUAL_SPLIT) < 1e-9
    # local minimality probe away from the optimum
    assert 0.3 + zero_boundary(0.3) > 1.0 / 3.0 + 1e-3


def test_monte_carlo_determinism_and_shape():
    r = AspectRatios(0.3, 0.6)
    a = monte_carlo_gsv(r, 40, 8, master_seed=11)
    b = monte_carlo_gsv(r, 40, 8, master_seed=11)
    assert a["samples"] == b["samples"]
    assert len(a["samples"]) == 8
    assert a["mean"] > 0 and a["stdev"] >= 0
    c = monte_carlo_gsv(r, 40, 8, master_seed=12)
    assert a["samples"] != c["samples"]


def test_monte_carlo_converges_toward_limit():
    r = AspectRatios(0.25, 0.5)
    f1 = f1_limit(r)
    errs = [abs(monte_carlo_gsv(r, ne, 10, master_seed=3)["mean"] - f1)
            for ne in (100, 200, 400)]
    drops = sum(1 for lo, hi in zip(errs[1:], errs) if lo <= hi)
    assert drops >= 2


def test_monte_carlo_rejects_degenerate_dims():
    with pytest.raises(DomainError):
        monte_carlo_gsv(AspectRatios(0.001, 0.5), 20, 4, master_seed=0)


def test_phase_diagram_grid_and_csv():
    pts = phase_diagram([0.1, 2.0 / 9.0], [0.05, 1.0 / 9.0], 30, 4,
                        master_seed=21)
    assert len(pts) == 4
    preds = {(round(p.ratios.beta, 6), round(p.ratios.gamma, 6)):
             p.zero_capacity_predicted for p in pts}
    assert preds[(0.1, 0.05)] is True
    assert preds[(round(2.0 / 9.0, 6), round(1.0 / 9.0, 6))] is True
    rows = phase_csv_rows(pts)
    assert len(rows) == 4
    assert rows[0].count(",") == 6
    # deterministic across calls
    pts2 = phase_diagram([0.1, 2.0 / 9.0], [0.05, 1.0 / 9.0], 30, 4,
                         master_seed=21)
    assert phase_csv_rows(pts2) == rows


def test_phase_diagram_order_independent_of_scheduler():
    args = ([0.15, 0.3], [0.1, 0.5], 25, 3, 9)
    serial = phase_csv_rows(phase_diagram(*args))
    # reversed evaluation order must not change the emitted rows
    rev = phase_csv_rows(
        phase_diagram(*args, map_fn=lambda f, xs: reversed([f(x) for x in
                                                            reversed(list(xs))])))
    assert serial == rev


def test_fig3_curve_values():
    # eavesdropper antennas per sender-plus-receiver antenna along the
    # boundary: at the optimal split the value is 3, at the equal split
    # it is (3 + 2 sqrt(2))/2
    a = optimal_allocation()
    n_e_per_T = 1.0 / (a["beta_star"] + a["gamma_star"])
    assert abs(n_e_per_T - 3.0) < 1e-6
    assert abs(a["equal_split"] - 2.914214) < 1e-6
