"""Large-array laws for the secrecy-capacity phase diagram.

When all antenna counts grow with fixed aspect ratios beta = n_t/n_e and
gamma = n_r/n_e, the squared largest generalized singular value of a pair of
i.i.d. Gaussian channel matrices converges almost surely to a closed form.
Secrecy capacity is zero exactly when that limit is at most one, which cuts
the (beta, gamma) plane into a zero region bounded by gamma = (1-sqrt(2 beta))^2.
This module provides the closed forms, the antenna-allocation optimizer along
that boundary, and seeded Monte Carlo experiments that regenerate the
phase-diagram data.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .channel import sample_gaussian_pair, substream
from .spectral import largest_generalized_sv


class DomainError(ValueError):
    """Aspect ratios outside the domain of the limiting formula."""


@dataclass(frozen=True)
class AspectRatios:
    """Antenna-count ratios beta = n_t/n_e and gamma = n_r/n_e."""

    beta: float
    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and math.isfinite(self.gamma)):
            raise DomainError("aspect ratios must be finite")
        if self.beta < 0 or self.gamma < 0:
            raise DomainError("aspect ratios must be nonnegative")


@dataclass(frozen=True)
class PhasePoint:
    """One grid point of the phase diagram with its Monte Carlo estimate."""

    ratios: AspectRatios
    zero_capacity_predicted: bool
    empirical_gsv: float  # mean squared largest generalized singular value
    stdev: float
    trials: int
    n_e: int
    degenerate_rounding: bool = False


def f1_limit(r: AspectRatios) -> float:
    """Almost-sure limit of the squared largest generalized singular value.

    Valid for 0 <= beta < 1, gamma > 0, with the radicand
    1 - (1-beta)(1-beta/gamma) nonnegative.
    """
    beta, gamma = r.beta, r.gamma
    if not 0.0 <= beta < 1.0:
        raise DomainError("beta must satisfy 0 <= beta < 1")
    if gamma <= 0.0:
        raise DomainError("gamma must be positive")
    radicand = 1.0 - (1.0 - beta) * (1.0 - beta / gamma)
    if radicand < -1e-15:
        raise DomainError("radicand negative; ratios outside formula domain")
    root = math.sqrt(max(radicand, 0.0))
    return gamma * ((1.0 + root) / (1.0 - beta)) ** 2


def zero_boundary(beta: float) -> float:
    """Critical gamma below which capacity vanishes, for beta <= 1/2."""
    return (1.0 - math.sqrt(2.0 * beta)) ** 2


def zero_region(r: AspectRatios) -> bool:
    """True iff the large-array secrecy capacity is zero at these ratios."""
    return (r.beta <= 0.5 and r.gamma <= 1.0
            and r.gamma <= zero_boundary(r.beta))


def optimal_allocation() -> dict:
    """Minimize beta + gamma over the zero region's boundary curve.

    Returns the optimal ratios, their sum, and the equal-split value: the
    normalized eavesdropper count when the sender and receiver get equal
    antenna counts (beta = gamma on the boundary).
    """
    res = minimize_scalar(lambda b: b + zero_boundary(b),
                          bounds=(0.0, 0.5), method="bounded",
                          options={"xatol": 1e-14})
    beta_star = float(res.x)
    gamma_star = zero_boundary(beta_star)
    # equal split: beta = gamma = g on the boundary, g = (1 - sqrt(2g))^2;
    # the eavesdropper needs 1/(2g) antennas per sender-plus-receiver antenna
    g = _solve_equal_split()
    return {
        "beta_star": beta_star,
        "gamma_star": gamma_star,
        "min_sum": beta_star + gamma_star,
        "equal_split": 1.0 / (2.0 * g),
    }


def _solve_equal_split() -> float:
    """Solve g = (1 - sqrt(2 g))^2 for g in (0, 1/2) by bisection."""
    lo, hi = 1e-12, 0.5 - 1e-12
    f = lambda g: zero_boundary(g) - g
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _dims_from_ratios(r: AspectRatios, n_e: int):
    """Round aspect ratios to integer antenna counts with a floor of one."""
    n_t = int(round(r.beta * n_e))
    n_r = int(round(r.gamma * n_e))
    degenerate = n_t < 1 or n_r < 1
    return max(n_t, 1), max(n_r, 1), degenerate


def monte_carlo_gsv(r: AspectRatios, n_e: int, trials: int,
                    master_seed: int) -> dict:
    """Sample the squared largest generalized singular value at fixed ratios.

    Each trial draws an independent channel pair from a per-trial substream,
    so results are deterministic regardless of execution order or worker
    count.  Returns mean, standard deviation, and the per-trial samples.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if r.beta >= 1.0:
        raise DomainError("beta must be < 1 for the limiting regime")
    n_t, n_r, degenerate = _dims_from_ratios(r, n_e)
    if degenerate:
        raise DomainError(
            f"ratios ({r.beta}, {r.gamma}) round to zero antennas at n_e={n_e}")
    samples = [gsv_squared_trial(n_t, n_r, n_e, master_seed, t)
               for t in range(trials)]
    mean = statistics.fmean(samples)
    stdev = statistics.stdev(samples) if trials > 1 else 0.0
    return {"mean": mean, "stdev": stdev, "samples": samples,
            "n_t": n_t, "n_r": n_r}


def gsv_squared_trial(n_t: int, n_r: int, n_e: int,
                      master_seed: int, trial: int) -> float:
    """One independent draw of the squared largest generalized singular value."""
    pair = sample_gaussian_pair(n_t, n_r, n_e, seed=master_seed, trial=trial)
    return largest_generalized_sv(pair) ** 2


def phase_diagram(beta_grid, gamma_grid, n_e: int, trials: int,
                  master_seed: int, map_fn=map) -> list:
    """Monte Carlo sweep over a (beta, gamma) grid.

    Grid points whose dimensions round to zero are flagged as degenerate
    with NaN statistics rather than dropped.  `map_fn` may be replaced by a
    parallel map; per-point seeding keeps results order-independent.
    """
    points = [(i, AspectRatios(b, g), n_e, trials, master_seed)
              for i, (b, g) in enumerate(
                  (b, g) for b in beta_grid for g in gamma_grid)]
    if not points:
        raise ValueError("grids must be nonempty")
    return list(map_fn(_run_phase_point, points))


def _run_phase_point(item) -> PhasePoint:
    i, r, n_e, trials, master_seed = item
    n_t, n_r, degenerate = _dims_from_ratios(r, n_e)
    if degenerate or r.beta >= 1.0:
        return PhasePoint(r, zero_region(r), math.nan, math.nan,
                          trials, n_e, degenerate_rounding=True)
    # offset substreams per grid point so points are independent
    stats = monte_carlo_gsv(r, n_e, trials,
                            master_seed=_point_seed(master_seed, i))
    return PhasePoint(r, zero_region(r), stats["mean"], stats["stdev"],
                      trials, n_e)


def _point_seed(master_seed: int, index: int) -> int:
    """Deterministic per-grid-point seed derived from the master seed."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(0x9e3779b9, index))
    return int(ss.generate_state(1)[0])


CSV_HEADER = "beta,gamma,ne,trials,mean_sq_gsv,stdev,predicted_zero"


def phase_csv_rows(points) -> list:
    """Serialize phase points as CSV rows (12 significant digits)."""
    rows = []
    for p in points:
        rows.append(",".join([
            f"{p.ratios.beta:.12g}", f"{p.ratios.gamma:.12g}",
            str(p.n_e), str(p.trials),
            f"{p.empirical_gsv:.12g}", f"{p.stdev:.12g}",
            str(p.zero_capacity_predicted).lower(),
        ]))
    return rows
