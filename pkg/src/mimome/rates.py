"""Rate functionals for the secrecy minimax problem and their gradients.

The upper-bound objective is the conditional mutual information
I(x; y_r | y_e) of a Gaussian input with covariance K against jointly
Gaussian noise whose receiver/eavesdropper cross-covariance is the
contraction Phi.  The achievable rate is the log-det difference of the two
point-to-point channels.  Everything is in nats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelPair
from .linalg import (
    as_complex_matrix,
    check_hermitian,
    hermitian_eig,
    inv_hpd,
    logdet_hpd,
    real_inner,
    spectral_norm,
)

# Below 1 - EPS_SING a singular value of Phi is treated as exactly unity and
# the evaluation routes through the reduced channel.
EPS_SING = 1e-9


class Unbounded:
    """Marker for an infinite objective value (never a float inf)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"


UNBOUNDED = Unbounded()


@dataclass(frozen=True)
class RateBreakdown:
    """Upper/lower rate pair with the auxiliary matrices used to compute it."""

    r_plus: float
    r_minus: float
    gap: float
    theta: np.ndarray
    lambda_schur: np.ndarray


def check_input_covariance(K, P: float, rtol: float = 1e-10) -> np.ndarray:
    """Validate K PSD with trace <= P and return it symmetrized."""
    K = check_hermitian(K)
    w, _ = hermitian_eig(K)
    lam_max = max(w[-1], 0.0) if len(w) else 0.0
    if len(w) and w[0] < -rtol * max(lam_max, 1.0):
        raise ValueError(f"input covariance has negative eigenvalue {w[0]:.3e}")
    tr = float(np.real(np.trace(K)))
    if tr > P * (1.0 + rtol):
        raise ValueError(f"trace {tr:.6g} exceeds power budget {P:.6g}")
    return K


def check_contraction(Phi, rtol: float = 1e-10) -> np.ndarray:
    """Validate sigma_max(Phi) <= 1 and return the matrix."""
    Phi = as_complex_matrix(Phi)
    s = spectral_norm(Phi)
    if s > 1.0 + rtol:
        raise ValueError(f"sigma_max(Phi) = {s:.6g} exceeds 1")
    return Phi


def full_noise_covariance(Phi: np.ndarray) -> np.ndarray:
    """Assemble the joint noise covariance [[I, Phi], [Phi^H, I]]."""
    n_r, n_e = Phi.shape
    top = np.hstack([np.eye(n_r, dtype=np.complex128), Phi])
    bot = np.hstack([Phi.conj().T, np.eye(n_e, dtype=np.complex128)])
    return np.vstack([top, bot])


def lambda_schur(pair: ChannelPair, K, Phi) -> np.ndarray:
    """Conditional covariance of y_r given y_e (Schur complement form)."""
    Hr, He = pair.Hr, pair.He
    a = np.eye(pair.n_r) + Hr @ K @ Hr.conj().T
    b = Phi + Hr @ K @ He.conj().T
    d = np.eye(pair.n_e) + He @ K @ He.conj().T
    lam = a - b @ np.linalg.solve(d, b.conj().T)
    return 0.5 * (lam + lam.conj().T)


def theta_matrix(pair: ChannelPair, K, Phi) -> np.ndarray:
    """Linear MMSE coefficient of y_r given y_e."""
    Hr, He = pair.Hr, pair.He
    d = np.eye(pair.n_e) + He @ K @ He.conj().T
    return np.linalg.solve(d.conj().T, (Hr @ K @ He.conj().T + Phi).conj().T).conj().T


def gamma_matrix(pair: ChannelPair, K, Phi, theta) -> np.ndarray:
    """Covariance of y_r - Theta y_e for a fixed estimation coefficient."""
    Hr, He = pair.Hr, pair.He
    diff = Hr - theta @ He
    g = (np.eye(pair.n_r) + theta @ theta.conj().T
         - theta @ Phi.conj().T - Phi @ theta.conj().T
         + diff @ K @ diff.conj().T)
    return 0.5 * (g + g.conj().T)


def r_minus(pair: ChannelPair, K) -> float:
    """Achievable Gaussian rate: logdet(I + Hr K Hr^H) - logdet(I + He K He^H)."""
    Hr, He = pair.Hr, pair.He
    a = np.eye(pair.n_r) + Hr @ K @ Hr.conj().T
    b = np.eye(pair.n_e) + He @ K @ He.conj().T
    return logdet_hpd(a) - logdet_hpd(b)


def _split_unit_block(Phi: np.ndarray):
    """SVD split of Phi into the unit-singular-value block and the rest.

    Returns (U1, U2, V1, V2, sigma_tail) with the cut at 1 - EPS_SING.
    """
    n_r, n_e = Phi.shape
    u, s, vh = np.linalg.svd(Phi)  # full matrices: U is n_r x n_r, V is n_e x n_e
    v = vh.conj().T
    d = int(np.sum(s >= 1.0 - EPS_SING))
    return u[:, :d], u[:, d:], v[:, :d], v[:, d:], s[d:]


def r_plus_singular(pair: ChannelPair, K, Phi):
    """R_plus when Phi has singular values at (or numerically at) unity.

    Splits off the perfectly-correlated noise directions.  If the channels
    disagree on those directions the objective is unbounded (the receiver can
    cancel the noise exactly); otherwise the rate equals R_plus of the reduced
    channel obtained by projecting the receiver onto the complement.
    """
    Hr = pair.Hr
    u1, u2, v1, v2, _ = _split_unit_block(Phi)
    mismatch = np.linalg.norm(u1.conj().T @ Hr - v1.conj().T @ pair.He)
    if mismatch > 1e-6 * max(np.linalg.norm(Hr), 1e-300):
        return UNBOUNDED
    if u2.shape[1] == 0:
        return 0.0
    reduced = ChannelPair(u2.conj().T @ Hr, pair.He)
    return r_plus(reduced, K, u2.conj().T @ Phi)


def r_plus(pair: ChannelPair, K, Phi):
    """Upper-bound objective I(x; y_r | y_e) in nats.

    Uses logdet Lambda(K) - logdet(I - Phi Phi^H) when Phi is strictly
    contractive; routes through the reduced channel when any singular value
    of Phi reaches unity.  Returns UNBOUNDED in the incompatible singular
    case.
    """
    Phi = as_complex_matrix(Phi)
    if Phi.size and spectral_norm(Phi) >= 1.0 - EPS_SING:
        return r_plus_singular(pair, K, Phi)
    lam = lambda_schur(pair, K, Phi)
    kphi_small = np.eye(pair.n_r) - Phi @ Phi.conj().T
    return logdet_hpd(lam) - logdet_hpd(kphi_small)


def r_plus_joint(pair: ChannelPair, K, Phi) -> float:
    """R_plus from joint covariances, as an independent evaluation route.

    I(x; y_r | y_e) = logdet(K_Phi + Ht K Ht^H) - logdet(I + He K He^H)
                      - logdet(K_Phi).
    """
    kphi = full_noise_covariance(Phi)
    ht = pair.Ht
    joint = kphi + ht @ K @ ht.conj().T
    d = np.eye(pair.n_e) + pair.He @ K @ pair.He.conj().T
    return logdet_hpd(joint) - logdet_hpd(d) - logdet_hpd(kphi)


def rate_breakdown(pair: ChannelPair, K, Phi) -> RateBreakdown:
    """Evaluate both rates and the auxiliary matrices at one point."""
    rp = r_plus(pair, K, Phi)
    rm = r_minus(pair, K)
    if rp is UNBOUNDED:
        raise ValueError("R_plus is unbounded at this point")
    return RateBreakdown(
        r_plus=rp,
        r_minus=rm,
        gap=rp - rm,
        theta=theta_matrix(pair, K, Phi),
        lambda_schur=lambda_schur(pair, K, Phi),
    )


def grad_K(pair: ChannelPair, K, Phi) -> np.ndarray:
    """Gradient of R_plus in K (ascent direction), Phi strictly contractive.

    Ht^H (Ht K Ht^H + K_Phi)^{-1} Ht - He^H (I + He K He^H)^{-1} He.
    """
    ht = pair.Ht
    He = pair.He
    kphi = full_noise_covariance(Phi)
    big = kphi + ht @ K @ ht.conj().T
    term1 = ht.conj().T @ np.linalg.solve(0.5 * (big + big.conj().T), ht)
    d = np.eye(pair.n_e) + He @ K @ He.conj().T
    term2 = He.conj().T @ np.linalg.solve(d, He)
    g = term1 - term2
    return 0.5 * (g + g.conj().T)


def grad_K_mmse(pair: ChannelPair, K, Phi) -> np.ndarray:
    """Alternate closed form (Hr - Theta He)^H Lambda^{-1} (Hr - Theta He)."""
    theta = theta_matrix(pair, K, Phi)
    diff = pair.Hr - theta @ pair.He
    lam = lambda_schur(pair, K, Phi)
    g = diff.conj().T @ np.linalg.solve(lam, diff)
    return 0.5 * (g + g.conj().T)


def grad_Phi(pair: ChannelPair, K, Phi) -> np.ndarray:
    """Gradient of R_plus in Phi under the real inner product Re tr(G^H E).

    Twice the (receiver, eavesdropper) block of
    (K_Phi + Ht K Ht^H)^{-1} - K_Phi^{-1}.
    """
    ht = pair.Ht
    n_r = pair.n_r
    kphi = full_noise_covariance(Phi)
    big = kphi + ht @ K @ ht.conj().T
    dmat = inv_hpd(0.5 * (big + big.conj().T)) - inv_hpd(kphi)
    return 2.0 * dmat[:n_r, n_r:]


def directional_derivative_K(pair: ChannelPair, K, Phi, direction) -> float:
    """<grad_K, E> under the real inner product, for Hermitian E."""
    return real_inner(grad_K(pair, K, Phi), direction)


def directional_derivative_Phi(pair: ChannelPair, K, Phi, direction) -> float:
    """<grad_Phi, E> under the real inner product."""
    return real_inner(grad_Phi(pair, K, Phi), direction)
