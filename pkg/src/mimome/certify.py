"""Optimality certification for candidate saddle points.

A solver run returns a candidate input covariance and noise cross-covariance.
This module verifies the candidate against every first-order optimality
condition the saddle point must satisfy and bundles the residuals into a
machine-readable certificate:

* duality gap between the conditional and difference rate forms,
* least-favorable-noise condition (the cross term that must vanish),
* degradedness of the eavesdropper along every active signaling direction,
* KKT stationarity of the input covariance over the trace ball,
* full column rank of the effective channel on the signaling subspace
  (or the degenerate zero-rate flag when the effective channel vanishes),
* the dual-block elimination identities, probed with a least-squares fit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelPair
from .linalg import hermitian_eig, inv_hpd, logdet_hpd, spectral_norm, svd
from .saddle import duality_gap
from .rates import (
    EPS_SING,
    _split_unit_block,
    gamma_matrix,
    grad_K,
    lambda_schur,
    r_minus,
    theta_matrix,
)

# Default certification tolerances; intentionally looser than the solver's
# convergence tolerance so that a certificate remains meaningful even when
# the solve was run with relaxed settings.
TOL_GAP = 1e-7
TOL_RESIDUAL = 1e-4

# Numerical-rank thresholds for the signaling factor; residual quantities
# are reported at both so threshold sensitivity is visible, not hidden.
RANK_RTOL_LOOSE = 1e-6
RANK_RTOL_TIGHT = 1e-10

ZERO_EFFECTIVE_RTOL = 1e-9


class SingularEliminationWarning(UserWarning):
    """The dual-block elimination is ill-conditioned (contraction nearly unitary)."""


@dataclass(frozen=True)
class Certificate:
    """Residual report for a candidate saddle point."""

    gap_nats: float
    noise_condition_residual: float
    degradedness_residual: float
    lambda0: float
    psi_min_eig: float
    complementary_slackness: float
    rank_S: int
    full_rank_M: bool
    zero_saddle: bool
    passed: bool
    capacity_nats: float = 0.0
    elimination_residuals: tuple = ()
    extra: dict = field(default_factory=dict)

    def as_text(self) -> str:
        lines = [
            f"capacity_nats={self.capacity_nats:.12g}",
            f"gap_nats={self.gap_nats:.6g}",
            f"noise_condition_residual={self.noise_condition_residual:.6g}",
            f"degradedness_residual={self.degradedness_residual:.6g}",
            f"lambda0={self.lambda0:.6g}",
            f"psi_min_eig={self.psi_min_eig:.6g}",
            f"complementary_slackness={self.complementary_slackness:.6g}",
            f"rank_S={self.rank_S}",
            f"full_rank_M={str(self.full_rank_M).lower()}",
            f"zero_saddle={str(self.zero_saddle).lower()}",
            f"passed={str(self.passed).lower()}",
        ]
        return "\n".join(lines)

    CSV_HEADER = ("capacity_nats,gap_nats,noise_condition_residual,"
                  "degradedness_residual,lambda0,psi_min_eig,"
                  "complementary_slackness,rank_S,full_rank_M,zero_saddle,passed")

    def as_csv_row(self) -> str:
        return ",".join([
            f"{self.capacity_nats:.12g}", f"{self.gap_nats:.6g}",
            f"{self.noise_condition_residual:.6g}",
            f"{self.degradedness_residual:.6g}", f"{self.lambda0:.6g}",
            f"{self.psi_min_eig:.6g}", f"{self.complementary_slackness:.6g}",
            str(self.rank_S), str(self.full_rank_M).lower(),
            str(self.zero_saddle).lower(), str(self.passed).lower(),
        ])


def factor_S(K, rank_rtol: float = 1e-8):
    """Full-column-rank factor S with S S^H = K over the numerical rank of K."""
    K = np.asarray(K, dtype=np.complex128)
    w, v = hermitian_eig(K)
    if w.size == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    tau = rank_rtol * max(w.max(), 0.0)
    keep = w > tau
    return v[:, keep] * np.sqrt(w[keep])


def check_noise_condition(pair: ChannelPair, K, Phi) -> float:
    """Relative Frobenius norm of (Hr - Th He) K (Phi^H Hr - He)^H."""
    Hr, He = pair.Hr, pair.He
    theta = theta_matrix(pair, K, Phi)
    resid = (Hr - theta @ He) @ K @ (Phi.conj().T @ Hr - He).conj().T
    scale = max(1.0, np.linalg.norm(Hr) * np.linalg.norm(K) * np.linalg.norm(He))
    return float(np.linalg.norm(resid) / scale)


def check_degradedness(pair: ChannelPair, K, Phi,
                       rank_rtol: float = 1e-8) -> float:
    """Relative residual of He S = Phi^H Hr S on the signaling subspace."""
    S = factor_S(K, rank_rtol)
    if S.shape[1] == 0:
        return 0.0
    lhs = pair.He @ S
    rhs = Phi.conj().T @ pair.Hr @ S
    return float(np.linalg.norm(lhs - rhs) / max(1.0, np.linalg.norm(lhs)))


def _reduced_pair_and_phi(pair: ChannelPair, Phi):
    """Reduced regular instance when the contraction has unit singular values."""
    u1, u2, v1, v2, _ = _split_unit_block(Phi)
    if u2.shape[1] == 0:
        return None
    return ChannelPair(u2.conj().T @ pair.Hr, pair.He), u2.conj().T @ Phi


def check_input_kkt(pair: ChannelPair, K, Phi, P: float) -> dict:
    """KKT stationarity of the input covariance over the trace ball.

    Recovers the trace multiplier as the largest gradient eigenvalue and
    reports the minimum eigenvalue of the complementary PSD multiplier plus
    its slackness with the candidate covariance.  When the contraction has
    unit singular values the gradient is taken on the reduced instance.
    """
    if spectral_norm(Phi) >= 1.0 - EPS_SING:
        reduced = _reduced_pair_and_phi(pair, Phi)
        if reduced is None:
            # fully degenerate: the rate is identically zero, gradient too
            g = np.zeros((pair.n_t, pair.n_t), dtype=np.complex128)
        else:
            g = grad_K(reduced[0], K, reduced[1])
    else:
        g = grad_K(pair, K, Phi)
    w, _ = hermitian_eig(g)
    lambda0 = float(max(w.max(), 0.0)) if w.size else 0.0
    psi = lambda0 * np.eye(pair.n_t) - g
    pw, _ = hermitian_eig(psi)
    psi_min = float(pw.min()) if pw.size else 0.0
    slack = float(abs(np.trace(psi @ K).real))
    return {"lambda0": lambda0, "psi_min_eig": psi_min,
            "complementary_slackness": slack}


def check_rank_M(pair: ChannelPair, K, Phi, rank_rtol: float = 1e-8) -> dict:
    """Rank of the effective channel on the signaling subspace.

    M = (Hr - Th He) S must have full column rank whenever the effective
    channel Hr - Th He is nonzero; when it vanishes the saddle is the
    degenerate zero-rate point and the flag is reported instead.
    """
    theta = theta_matrix(pair, K, Phi)
    eff = pair.Hr - theta @ pair.He
    if np.linalg.norm(eff) <= ZERO_EFFECTIVE_RTOL * max(1.0, np.linalg.norm(pair.Hr)):
        return {"rank_M": 0, "full": False, "zero_saddle": True}
    S = factor_S(K, rank_rtol)
    if S.shape[1] == 0:
        return {"rank_M": 0, "full": True, "zero_saddle": False}
    M = eff @ S
    s = np.linalg.svd(M, compute_uv=False)
    rank = int(np.count_nonzero(s > 1e-8 * s.max())) if s.size else 0
    return {"rank_M": rank, "full": rank == S.shape[1], "zero_saddle": False}


def check_elimination_identities(pair: ChannelPair, K, Phi, Upsilon2=None):
    """Residuals of the two dual-block elimination identities.

    With D = Phi^H Phi - I and E = Phi^H Hr - He the identities read
    E K Hr^H = D U2 (Phi^H + He K Hr^H) and E K He^H = D U2 (I + He K He^H).
    If no dual block U2 is supplied it is fitted by least squares from the
    second identity.  A consistency probe, not a pass/fail gate, when D is
    near-singular.
    """
    Hr, He = pair.Hr, pair.He
    D = Phi.conj().T @ Phi - np.eye(pair.n_e)
    E = Phi.conj().T @ Hr - He
    sing = np.linalg.svd(D, compute_uv=False)
    if sing.size and sing.min() < 1e-8:
        warnings.warn("contraction nearly unitary; dual elimination is "
                      "ill-conditioned", SingularEliminationWarning)
    B2 = np.eye(pair.n_e) + He @ K @ He.conj().T
    B1 = Phi.conj().T + He @ K @ Hr.conj().T
    if Upsilon2 is None:
        # least-squares fit of D @ U2 from the second identity, then of U2
        rhs = E @ K @ He.conj().T
        du2 = np.linalg.lstsq(B2.conj().T, rhs.conj().T, rcond=None)[0].conj().T
        Upsilon2 = np.linalg.lstsq(D, du2, rcond=None)[0]
    r1 = E @ K @ Hr.conj().T - D @ Upsilon2 @ B1
    r2 = E @ K @ He.conj().T - D @ Upsilon2 @ B2
    scale = max(1.0, np.linalg.norm(Hr) * np.linalg.norm(K) * np.linalg.norm(He))
    return (float(np.linalg.norm(r1) / scale), float(np.linalg.norm(r2) / scale))


def _lambda_gamma_consistency(pair: ChannelPair, K, Phi) -> float:
    lam = lambda_schur(pair, K, Phi)
    gam = gamma_matrix(pair, K, Phi, theta_matrix(pair, K, Phi))
    return float(np.linalg.norm(lam - gam) / max(1.0, np.linalg.norm(lam)))


def _entropy_identity(pair: ChannelPair, K, Phi) -> float:
    """|h(y_e|y_r) - logdet(I - Phi^H Phi)| at the candidate (regular path)."""
    Hr, He = pair.Hr, pair.He
    a = np.eye(pair.n_e) + He @ K @ He.conj().T
    b = He @ K @ Hr.conj().T + Phi.conj().T
    c = np.eye(pair.n_r) + Hr @ K @ Hr.conj().T
    cond = a - b @ inv_hpd(c) @ b.conj().T
    h_cond = logdet_hpd(cond)
    h_noise = logdet_hpd(np.eye(pair.n_e) - Phi.conj().T @ Phi)
    return float(abs(h_cond - h_noise))


def certify(pair: ChannelPair, K, Phi, P: float,
            tol_gap: float = TOL_GAP,
            tol_residual: float = TOL_RESIDUAL) -> Certificate:
    """Verify a candidate saddle point and return the certificate."""
    K = np.asarray(K, dtype=np.complex128)
    Phi = np.asarray(Phi, dtype=np.complex128)
    gap = float(duality_gap(pair, K, Phi))
    noise_res = check_noise_condition(pair, K, Phi)
    degr_res = check_degradedness(pair, K, Phi)
    kkt = check_input_kkt(pair, K, Phi, P)
    rankinfo = check_rank_M(pair, K, Phi)
    S = factor_S(K)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SingularEliminationWarning)
        elim = check_elimination_identities(pair, K, Phi)
    extra = {
        "lambda_gamma_residual": _lambda_gamma_consistency(pair, K, Phi),
        "capacity": float(r_minus(pair, K)),
        "rank_S_loose": factor_S(K, RANK_RTOL_LOOSE).shape[1],
        "rank_S_tight": factor_S(K, RANK_RTOL_TIGHT).shape[1],
    }
    if spectral_norm(Phi) < 1.0 - EPS_SING:
        extra["entropy_identity"] = _entropy_identity(pair, K, Phi)
    lam0 = kkt["lambda0"]
    psi_tol = max(tol_residual, 1e-5 * max(lam0, 1.0))
    passed = (
        gap <= max(tol_gap, tol_residual)
        and noise_res <= tol_residual
        and degr_res <= tol_residual
        and kkt["psi_min_eig"] >= -psi_tol
        and kkt["complementary_slackness"] <= tol_residual * max(1.0, P * max(lam0, 1.0))
        and (rankinfo["full"] or rankinfo["zero_saddle"] or rankinfo["rank_M"] == 0)
    )
    return Certificate(
        gap_nats=gap,
        noise_condition_residual=noise_res,
        degradedness_residual=degr_res,
        lambda0=lam0,
        psi_min_eig=kkt["psi_min_eig"],
        complementary_slackness=kkt["complementary_slackness"],
        rank_S=S.shape[1],
        full_rank_M=rankinfo["full"],
        zero_saddle=rankinfo["zero_saddle"],
        passed=passed,
        capacity_nats=extra["capacity"],
        elimination_residuals=elim,
        extra=extra,
    )
