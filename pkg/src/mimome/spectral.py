"""Zero-capacity decision via the largest generalized singular value.

Secrecy capacity is zero iff sup_v ||Hr v|| / ||He v|| <= 1.  The supremum
is computed by whitening with He on the orthogonal complement of its null
space; any transmit direction that He misses but Hr sees makes the ratio
infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channel import ChannelPair

NULLSPACE_RTOL = 1e-10


@dataclass(frozen=True)
class GsvReport:
    sigma_max_gen: float  # may be math.inf
    capacity_zero: bool
    margin: float


def largest_generalized_sv(pair: ChannelPair) -> float:
    """sup ||Hr v|| / ||He v||; math.inf when null(He) is not inside null(Hr)."""
    Hr, He = pair.Hr, pair.He
    u, s, vh = np.linalg.svd(He)
    smax = s[0] if len(s) else 0.0
    rank = int(np.sum(s > NULLSPACE_RTOL * max(smax, 1.0)))
    if rank < pair.n_t:
        null_basis = vh[rank:].conj().T
        leak = np.linalg.norm(Hr @ null_basis)
        if leak > NULLSPACE_RTOL * max(np.linalg.norm(Hr), 1.0):
            return math.inf
    if rank == 0:
        return 0.0  # He = 0 and Hr = 0 on all of C^{n_t}
    basis = vh[:rank].conj().T  # orthonormal basis of row(He)
    a = basis.conj().T @ Hr.conj().T @ Hr @ basis
    b = basis.conj().T @ He.conj().T @ He @ basis
    a = 0.5 * (a + a.conj().T)
    b = 0.5 * (b + b.conj().T)
    w = scipy.linalg.eigh(a, b, eigvals_only=True)
    return float(np.sqrt(max(w[-1], 0.0)))


def zero_capacity_test(pair: ChannelPair) -> GsvReport:
    """Sharp zero-capacity decision with the boundary margin for diagnostics."""
    sigma = largest_generalized_sv(pair)
    return GsvReport(
        sigma_max_gen=sigma,
        capacity_zero=sigma <= 1.0,
        margin=sigma - 1.0,
    )
