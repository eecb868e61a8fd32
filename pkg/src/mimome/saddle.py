"""Projected extragradient solver for the secrecy minimax problem.

The objective is maximized over the input covariance (PSD cone, trace
budget) and minimized over the noise cross-covariance (unit spectral-norm
ball).  The base iteration is projected extragradient with uniform iterate
averaging.  Because the maximizer set of the objective can be flat in
noise-degraded directions (where the achievable rate strictly decreases),
convergence is declared only through a certified check:

  * an upper bound on the saddle value from the inner concave maximization
    at the current noise point (Frank-Wolfe gap closes the inexactness), and
  * the achievable rate of a polished input covariance (ascent on the
    achievable rate itself, which the reported capacity is always taken
    from).

Instances where plain extragradient converges slowly fall back to a
best-response loop: backtracking proximal descent on the inner-max value as
a function of the noise coupling.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelPair
from .linalg import hermitian_eig, spectral_norm, svd
from .rates import EPS_SING, UNBOUNDED, grad_K, grad_Phi, r_minus, r_plus
from .spectral import zero_capacity_test

# Interior clamp for Phi iterates keeps every singular value strictly below
# the singular-evaluation cut, so gradients stay defined.
PHI_CLAMP = 2.0 * EPS_SING

# Eigen/singular values this close to a clip boundary are snapped to it.
SNAP = 1e-12


class SolveStatus(enum.Enum):
    CONVERGED = "Converged"
    ITERATION_CAP = "IterationCap"
    ZERO_CAPACITY_DETECTED = "ZeroCapacityDetected"


class NumericalBreakdown(RuntimeError):
    """Kernel failures persisted across retries inside the solver."""


@dataclass
class SolverConfig:
    max_iters: int = 20000
    tol_gap: float = 1e-7
    step0: float | None = None  # default 0.5 / ||Ht||_2^2
    averaging: bool = True
    seed: int = 0
    check_every: int = 25
    # extragradient iterations before the best-response fallback kicks in
    extragradient_budget: int = 200
    zero_cap_pretest: bool = True

    def __post_init__(self):
        if self.tol_gap <= 0:
            raise ValueError("tol_gap must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass
class SaddleResult:
    K_bar: np.ndarray
    Phi_bar: np.ndarray
    capacity_nats: float
    iterations: int
    gap_history: list = field(default_factory=list)
    status: SolveStatus = SolveStatus.ITERATION_CAP
    final_gap: float = np.inf

    @property
    def converged(self) -> bool:
        return self.status in (SolveStatus.CONVERGED, SolveStatus.ZERO_CAPACITY_DETECTED)


def _simplex_clip(w: np.ndarray, total: float) -> np.ndarray:
    """Project real eigenvalues onto {w >= 0, sum w <= total} (Euclidean)."""
    clipped = np.maximum(w, 0.0)
    if clipped.sum() <= total:
        out = clipped
    else:
        # uniform-shift projection onto the simplex {w >= 0, sum w == total}
        srt = np.sort(w)[::-1]
        css = np.cumsum(srt) - total
        ks = np.arange(1, len(w) + 1)
        k = ks[srt - css / ks > 0][-1]
        out = np.maximum(w - css[k - 1] / k, 0.0)
    out[np.abs(out) <= SNAP] = 0.0
    return out


def project_input_covariance(M, P: float) -> np.ndarray:
    """Frobenius projection of a Hermitian matrix onto {K >= 0, tr K <= P}."""
    w, v = hermitian_eig(M)
    w = _simplex_clip(w, P)
    k = (v * w) @ v.conj().T
    return 0.5 * (k + k.conj().T)


def project_contraction(Phi, limit: float = 1.0) -> np.ndarray:
    """Frobenius projection onto the spectral-norm ball of radius `limit`."""
    u, s, v = svd(Phi)
    s = np.where(s > limit - SNAP, limit, s)
    return (u * s) @ v.conj().T


def duality_gap(pair: ChannelPair, K, Phi) -> float:
    """R_plus(K, Phi) - R_minus(K); nonnegative up to roundoff."""
    rp = r_plus(pair, K, Phi)
    if rp is UNBOUNDED:
        return np.inf
    return rp - r_minus(pair, K)


def _fw_gap(g: np.ndarray, K: np.ndarray, P: float) -> float:
    """Frank-Wolfe gap of the concave max over {K >= 0, tr K <= P}.

    Upper-bounds the suboptimality of K: the linear maximum over the
    feasible set is P * max(lambda_max(g), 0).
    """
    w, _ = hermitian_eig(g)
    lin_max = P * max(float(w[-1]), 0.0)
    return lin_max - float(np.real(np.trace(g @ K)))


def _pack_herm(S: np.ndarray) -> np.ndarray:
    """Flatten a Hermitian matrix into its free real coordinates."""
    r = S.shape[0]
    iu = np.triu_indices(r, k=1)
    return np.concatenate([np.real(np.diag(S)),
                           np.real(S[iu]), np.imag(S[iu])])


def _unpack_herm(x: np.ndarray, r: int) -> np.ndarray:
    S = np.zeros((r, r), dtype=np.complex128)
    iu = np.triu_indices(r, k=1)
    m = iu[0].size
    S[np.diag_indices(r)] = x[:r]
    S[iu] = x[r:r + m] + 1j * x[r + m:r + 2 * m]
    return S + np.triu(S, k=1).conj().T


def _kkt_polish_inner(pair: ChannelPair, Phi, K, P: float,
                      newton_iters: int = 6):
    """Newton-polish the inner maximizer on its active face.

    Near the maximum the Frank-Wolfe certificate is limited by the
    eigenvalue spread of the gradient over the active subspace of K,
    which shrinks only linearly with the distance to the maximizer.
    Solving the stationarity system (reduced gradient a multiple of the
    identity, trace pinned) on the fixed face drives that spread to
    machine precision and collapses the certified bound.
    """
    w, U = hermitian_eig(K)
    act = w > 1e-7 * max(P, 1.0)
    r = int(np.sum(act))
    if r == 0:
        return K
    Ua = np.ascontiguousarray(U[:, act])
    trace_active = (P - float(np.sum(w[act]))) < 1e-6 * max(P, 1.0)

    def residual(x):
        S = _unpack_herm(x[:-1], r)
        lam = x[-1]
        Kf = Ua @ S @ Ua.conj().T
        gr = Ua.conj().T @ grad_K(pair, Kf, Phi) @ Ua
        out = _pack_herm(gr - lam * np.eye(r))
        tr_res = (float(np.real(np.trace(S))) - P) if trace_active else lam
        return np.append(out, tr_res)

    S0 = Ua.conj().T @ K @ Ua
    g0 = Ua.conj().T @ grad_K(pair, K, Phi) @ Ua
    lam0 = max(float(np.real(np.trace(g0))) / r, 0.0) if trace_active else 0.0
    x = np.append(_pack_herm(S0), lam0)
    n = x.size
    res = residual(x)
    best_x, best_norm = x, float(np.linalg.norm(res))
    h = 1e-7 * max(1.0, P)
    for _ in range(newton_iters):
        if best_norm < 1e-13:
            break
        J = np.empty((n, n))
        for j in range(n):
            xp = x.copy()
            xp[j] += h
            J[:, j] = (residual(xp) - res) / h
        try:
            step = np.linalg.lstsq(J, -res, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        x = x + step
        res = residual(x)
        nrm = float(np.linalg.norm(res))
        if nrm < best_norm:
            best_x, best_norm = x, nrm
        else:
            break
    S = _unpack_herm(best_x[:-1], r)
    K_new = project_input_covariance(Ua @ S @ Ua.conj().T, P)
    return K_new


def _inner_max(pair: ChannelPair, Phi, P: float, K0, tol: float,
               max_iters: int = 400):
    """Maximize R_plus(., Phi) by projected gradient ascent with BB steps.

    Returns (K, value, certified upper bound on the max).
    """
    K = K0
    f = r_plus(pair, K, Phi)
    lips = max(spectral_norm(pair.Ht) ** 2, 1e-12)
    t = 1.0 / lips
    prev_K = prev_g = None
    # best value and tightest certified bound seen anywhere along the run;
    # the bound f_i + fw_i is valid at every iterate, so the running minimum
    # certifies long before the last-iterate gap does
    K_best, f_best, ub = K, f, np.inf

    def polish(K_best, f_best, ub):
        # the Frank-Wolfe certificate saturates once the active gradient
        # eigenvalues degenerate; finish on the active face
        K_pol = _kkt_polish_inner(pair, Phi, K_best, P)
        f_pol = r_plus(pair, K_pol, Phi)
        fw_pol = max(_fw_gap(grad_K(pair, K_pol, Phi), K_pol, P), 0.0)
        ub = min(ub, f_pol + fw_pol)
        if f_pol > f_best:
            K_best, f_best = K_pol, f_pol
        return K_best, f_best, ub

    stall = 0
    for _ in range(max_iters):
        g = grad_K(pair, K, Phi)
        fw = _fw_gap(g, K, P)
        new_ub = min(ub, f + max(fw, 0.0))
        stall = stall + 1 if new_ub > ub - 0.01 * max(ub - f_best, tol) \
            else 0
        ub = new_ub
        if f > f_best:
            K_best, f_best = K, f
        if ub - f_best <= tol:
            break
        if stall >= 25:
            stall = 0
            K_best, f_best, ub = polish(K_best, f_best, ub)
            if ub - f_best <= tol:
                break
        if prev_K is not None:
            dk = (K - prev_K).ravel()
            dg = (g - prev_g).ravel()
            denom = -float(np.real(np.vdot(dk, dg)))
            if denom > 1e-18:
                t = float(np.clip(np.real(np.vdot(dk, dk)) / denom,
                                  1e-3 / lips, 1e8 / lips))
        for _ in range(60):
            K_new = project_input_covariance(K + t * g, P)
            f_new = r_plus(pair, K_new, Phi)
            move = K_new - K
            # ascent variant of the sufficient-increase condition
            if f_new >= f + float(np.real(np.vdot(g, move))) \
                    - 0.5 / t * float(np.linalg.norm(move)) ** 2 - 1e-14:
                break
            t *= 0.5
        prev_K, prev_g = K, g
        K, f = K_new, f_new
    if f > f_best:
        K_best, f_best = K, f
    ub = min(ub, f_best + max(_fw_gap(
        grad_K(pair, K_best, Phi), K_best, P), 0.0))
    if ub - f_best > tol:
        K_best, f_best, ub = polish(K_best, f_best, ub)
    return K_best, f_best, ub


def _polish_r_minus(pair: ChannelPair, K0, P: float, max_iters: int = 300):
    """Ascend the achievable rate from a near-optimal input covariance.

    Moves power out of noise-degraded directions where the minimax objective
    is flat but the achievable rate is not (capacity-zero subspaces).
    """
    def grad_rm(K):
        Hr, He = pair.Hr, pair.He
        a = np.eye(pair.n_r) + Hr @ K @ Hr.conj().T
        b = np.eye(pair.n_e) + He @ K @ He.conj().T
        g = Hr.conj().T @ np.linalg.solve(a, Hr) - He.conj().T @ np.linalg.solve(b, He)
        return 0.5 * (g + g.conj().T)

    K = K0
    f = r_minus(pair, K)
    lips = max(spectral_norm(pair.Ht) ** 2, 1e-12)
    t = 1.0 / lips
    prev_K = prev_g = None
    for _ in range(max_iters):
        g = grad_rm(K)
        if prev_K is not None:
            dk = (K - prev_K).ravel()
            dg = (g - prev_g).ravel()
            denom = -float(np.real(np.vdot(dk, dg)))
            if denom > 1e-18:
                t = float(np.clip(np.real(np.vdot(dk, dk)) / denom,
                                  1e-3 / lips, 1e8 / lips))
            else:
                # locally convex (the rate is nonconcave): grow the step,
                # the sufficient-increase test below caps it
                t = min(t * 4.0, 1e8 / lips)
        for _ in range(60):
            K_new = project_input_covariance(K + t * g, P)
            f_new = r_minus(pair, K_new)
            move = K_new - K
            if f_new >= f + float(np.real(np.vdot(g, move))) \
                    - 0.5 / t * float(np.linalg.norm(move)) ** 2 - 1e-14:
                break
            t *= 0.5
        rel_move = np.linalg.norm(K_new - K) / max(1.0, np.linalg.norm(K))
        prev_K, prev_g = K, g
        K, f = K_new, f_new
        if rel_move <= 1e-12:
            break
    return K, f


def _snap_to_boundary(Phi, tol: float = 1e-4):
    """Snap near-unit singular values of Phi to exactly 1, or None if none."""
    u, s, v = svd(Phi)
    near = s >= 1.0 - tol
    if not near.any():
        return None
    s = np.where(near, 1.0, s)
    return (u * s) @ v.conj().T


class _Checker:
    """Certified convergence check, tracking the best candidate seen.

    For each candidate noise point the criterion is an upper bound on the
    saddle value (inner concave max, Frank-Wolfe-closed) minus the achievable
    rate of a polished input covariance; both sides certify, so a small
    criterion proves near-optimality.  Noise points with unit singular
    values are evaluated through the reduced channel.
    """

    def __init__(self, pair: ChannelPair, P: float, tol_gap: float):
        self.pair = pair
        self.P = P
        self.tol = tol_gap
        self.best_crit = np.inf
        self.best = None  # (K_bar, Phi, spec_gap)
        self.K_warm = (P / pair.n_t) * np.eye(pair.n_t, dtype=np.complex128)
        # best achievable rate seen anywhere: a capacity lower bound that is
        # independent of the noise candidate, so it never regresses
        self.rm_best = -np.inf
        self._tried_degraded = False
        self.K_rm_best = None
        self.history: list[float] = []

    def _upper_bound(self, Phi):
        """(K_inner, ub) with ub >= max_K R_plus(K, Phi), or None if unbounded."""
        pair, P = self.pair, self.P
        if spectral_norm(Phi) >= 1.0 - EPS_SING:
            from .rates import _split_unit_block
            u1, u2, v1, v2, _ = _split_unit_block(Phi)
            mismatch = np.linalg.norm(u1.conj().T @ pair.Hr - v1.conj().T @ pair.He)
            if mismatch > 1e-6 * max(np.linalg.norm(pair.Hr), 1e-300):
                return None
            if u2.shape[1] == 0:
                return np.zeros((pair.n_t, pair.n_t), dtype=np.complex128), 0.0
            reduced = ChannelPair(u2.conj().T @ pair.Hr, pair.He)
            K_in, _, ub = _inner_max(reduced, u2.conj().T @ Phi, P,
                                     self.K_warm, tol=0.05 * self.tol)
            return K_in, ub
        K_in, _, ub = _inner_max(pair, Phi, P, self.K_warm, tol=0.05 * self.tol)
        return K_in, ub

    def _evaluate(self, Phi, update_warm: bool = True) -> None:
        out = self._upper_bound(Phi)
        if out is None:
            return
        K_in, ub = out
        if update_warm:
            self.K_warm = K_in
        K_bar, rm = _polish_r_minus(self.pair, K_in, self.P)
        if rm > self.rm_best:
            self.rm_best, self.K_rm_best = rm, K_bar
        crit = ub - self.rm_best  # >= C - r_minus(best K) >= 0 up to roundoff
        spec_gap = duality_gap(self.pair, self.K_rm_best, Phi)
        # prefer the smallest certified criterion; among iterates already
        # inside tolerance keep the one with the smallest pointwise gap,
        # which tracks proximity to the saddle point itself
        if crit < self.best_crit or (crit <= self.tol
                                     and spec_gap < self.best[2]):
            self.best_crit = min(self.best_crit, crit)
            self.best = (self.K_rm_best,
                         np.array(Phi, dtype=np.complex128, copy=True), spec_gap)

    def _degraded_coupling(self):
        """Coupling solving Hr = Phi He (receiver degraded), if feasible.

        When this coupling is a contraction the instance has zero secrecy
        capacity and evaluating it certifies the upper bound at once.
        """
        Hr, He = self.pair.Hr, self.pair.He
        Phi = Hr @ np.linalg.pinv(He)
        if np.linalg.norm(Phi @ He - Hr) > 1e-9 * max(np.linalg.norm(Hr), 1.0):
            return None
        if spectral_norm(Phi) > 1.0 + 1e-9:
            return None
        return project_contraction(Phi, 1.0)

    def check(self, Phi) -> bool:
        self._evaluate(Phi)
        if self.best_crit > self.tol and not self._tried_degraded:
            self._tried_degraded = True
            degraded = self._degraded_coupling()
            if degraded is not None:
                self._evaluate(degraded, update_warm=False)
        if self.best_crit > self.tol:
            snapped = _snap_to_boundary(Phi)
            if snapped is not None:
                self._evaluate(snapped, update_warm=False)
        if self.best_crit > self.tol:
            # MMSE fixed point: at a degenerate (zero) saddle the least
            # favorable coupling equals the estimation coefficient
            from .rates import theta_matrix
            theta = project_contraction(
                theta_matrix(self.pair, self.K_warm, Phi), 1.0)
            self._evaluate(theta, update_warm=False)
            if self.best_crit > self.tol:
                snapped = _snap_to_boundary(theta, tol=1e-2)
                if snapped is not None:
                    self._evaluate(snapped, update_warm=False)
        self.history.append(max(self.best[2], 0.0))
        return self.best_crit <= self.tol and self.best[2] <= self.tol


def _extragradient_phase(pair, P, cfg, checker, K, Phi, clamp, budget):
    """Spec base iteration: two projected half-steps plus averaging."""
    step = cfg.step0 if cfg.step0 is not None \
        else 0.5 / max(spectral_norm(pair.Ht) ** 2, 1e-12)
    K_avg, Phi_avg, n_avg = K.copy(), Phi.copy(), 1
    rising, prev_gap = 0, np.inf
    it = 0
    while it < budget:
        it += 1
        gK = grad_K(pair, K, Phi)
        gP = grad_Phi(pair, K, Phi)
        K_half = project_input_covariance(K + step * gK, P)
        Phi_half = project_contraction(Phi - step * gP, clamp)
        gK2 = grad_K(pair, K_half, Phi_half)
        gP2 = grad_Phi(pair, K_half, Phi_half)
        K = project_input_covariance(K + step * gK2, P)
        Phi = project_contraction(Phi - step * gP2, clamp)
        if cfg.averaging:
            n_avg += 1
            K_avg += (K - K_avg) / n_avg
            Phi_avg += (Phi - Phi_avg) / n_avg

        if it % cfg.check_every == 0 or it == budget:
            if checker.check(Phi) or (cfg.averaging and checker.check(Phi_avg)):
                return it, True
            gap = duality_gap(pair, K, Phi)
            if gap > prev_gap * (1.0 + 1e-12):
                rising += 1
                if rising * cfg.check_every >= 50:
                    step *= 0.5
                    rising = 0
            else:
                rising = 0
            prev_gap = gap
    return it, False


def _best_response_phase(pair, P, cfg, checker, Phi, clamp, budget):
    """Fallback: proximal descent on the inner-max value as a function of Phi."""
    warm = checker.K_warm if checker.K_warm is not None \
        else (P / pair.n_t) * np.eye(pair.n_t, dtype=np.complex128)
    inner_tol = 0.05 * cfg.tol_gap
    K, f, _ = _inner_max(pair, Phi, P, warm, tol=inner_tol)
    t = 1.0
    it = 0
    prev_Phi = prev_g = None
    while it < budget:
        it += 1
        if checker.check(Phi):
            return it, True
        gP = grad_Phi(pair, K, Phi)
        if prev_Phi is not None:
            # spectral (Barzilai-Borwein) step for the convex outer descent
            dp = (Phi - prev_Phi).ravel()
            dg = (gP - prev_g).ravel()
            denom = float(np.real(np.vdot(dp, dg)))
            if denom > 1e-18:
                t = float(np.clip(np.real(np.vdot(dp, dp)) / denom, 1e-8, 1e8))
        prev_Phi, prev_g = Phi, gP
        gnorm2 = float(np.linalg.norm(gP)) ** 2
        accepted = False
        for _ in range(80):
            Phi_new = project_contraction(Phi - t * gP, clamp)
            move = Phi_new - Phi
            if np.linalg.norm(move) <= SNAP * max(1.0, np.linalg.norm(Phi)):
                break  # stationary for this step size
            K_new, f_new, _ = _inner_max(pair, Phi_new, P, K, tol=inner_tol)
            # sufficient-decrease condition for proximal gradient descent
            if f_new <= f + float(np.real(np.vdot(gP, move))) \
                    + 0.5 / t * float(np.linalg.norm(move)) ** 2 + 1e-14:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            if gnorm2 * t < 1e-30:
                break  # numerically stationary
            t *= 4.0
            continue
        Phi, K, f = Phi_new, K_new, f_new
    return it, checker.check(Phi)


def _refine_phase(pair, P, cfg, checker, Phi, clamp, budget: int = 15):
    """Post-certification descent on Phi to shrink the pointwise gap."""
    inner_tol = 0.05 * cfg.tol_gap
    warm = checker.K_warm if checker.K_warm is not None \
        else (P / pair.n_t) * np.eye(pair.n_t, dtype=np.complex128)
    K, f, _ = _inner_max(pair, Phi, P, warm, tol=inner_tol)
    t = 1.0
    prev_Phi = prev_g = None
    for _ in range(budget):
        if checker.best[2] <= 1e-3 * cfg.tol_gap:
            break
        gP = grad_Phi(pair, K, Phi)
        if prev_Phi is not None:
            dp = (Phi - prev_Phi).ravel()
            dg = (gP - prev_g).ravel()
            denom = float(np.real(np.vdot(dp, dg)))
            if denom > 1e-18:
                t = float(np.clip(np.real(np.vdot(dp, dp)) / denom, 1e-8, 1e8))
        prev_Phi, prev_g = Phi, gP
        accepted = False
        for _ in range(40):
            Phi_new = project_contraction(Phi - t * gP, clamp)
            move = Phi_new - Phi
            if np.linalg.norm(move) <= SNAP * max(1.0, np.linalg.norm(Phi)):
                break
            K_new, f_new, _ = _inner_max(pair, Phi_new, P, K, tol=inner_tol)
            if f_new <= f + float(np.real(np.vdot(gP, move))) \
                    + 0.5 / t * float(np.linalg.norm(move)) ** 2 + 1e-14:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        Phi, K, f = Phi_new, K_new, f_new
        checker._evaluate(Phi)


def solve(pair: ChannelPair, P: float, cfg: SolverConfig | None = None) -> SaddleResult:
    """Solve the secrecy minimax problem.

    The reported capacity is always the achievable rate at the returned
    input covariance, so the output is valid regardless of solver accuracy.
    """
    if P <= 0 or not np.isfinite(P):
        raise ValueError("power budget must be positive and finite")
    cfg = cfg or SolverConfig()
    n_t = pair.n_t

    if cfg.zero_cap_pretest and zero_capacity_test(pair).capacity_zero:
        return SaddleResult(
            K_bar=np.zeros((n_t, n_t), dtype=np.complex128),
            Phi_bar=np.zeros((pair.n_r, pair.n_e), dtype=np.complex128),
            capacity_nats=0.0, iterations=0, gap_history=[0.0],
            status=SolveStatus.ZERO_CAPACITY_DETECTED, final_gap=0.0,
        )

    clamp = 1.0 - PHI_CLAMP
    K0 = (P / n_t) * np.eye(n_t, dtype=np.complex128)
    Phi0 = np.zeros((pair.n_r, pair.n_e), dtype=np.complex128)
    checker = _Checker(pair, P, cfg.tol_gap)

    eg_budget = min(cfg.extragradient_budget, cfg.max_iters)
    it_eg, done = _extragradient_phase(pair, P, cfg, checker, K0, Phi0, clamp, eg_budget)
    it_br = 0
    if not done:
        _, best_phi, _ = checker.best
        it_br, done = _best_response_phase(
            pair, P, cfg, checker, best_phi, clamp,
            budget=max(cfg.max_iters - it_eg, 1),
        )

    if done and checker.best[2] > 1e-3 * cfg.tol_gap:
        # sharpen the returned saddle point: the certificate can close
        # while Phi still carries error of order sqrt(gap), which shows
        # up in downstream stationarity residuals
        _refine_phase(pair, P, cfg, checker, checker.best[1], clamp)

    K_bar, Phi_raw, _ = checker.best
    # certification point: re-project Phi onto the exact unit ball
    Phi_bar = project_contraction(Phi_raw, 1.0)
    final_gap = duality_gap(pair, K_bar, Phi_bar)
    if not np.isfinite(final_gap) or final_gap > checker.best[2] + cfg.tol_gap:
        # unclamped projection is worse (incompatible singular split);
        # keep the interior iterate
        Phi_bar, final_gap = Phi_raw, checker.best[2]

    converged = done and max(final_gap, 0.0) <= cfg.tol_gap
    return SaddleResult(
        K_bar=K_bar,
        Phi_bar=Phi_bar,
        capacity_nats=r_minus(pair, K_bar),
        iterations=it_eg + it_br,
        gap_history=checker.history,
        status=SolveStatus.CONVERGED if converged else SolveStatus.ITERATION_CAP,
        final_gap=float(final_gap),
    )
