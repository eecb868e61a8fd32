"""Dense complex linear-algebra kernels shared by all other modules.

Everything here operates on plain numpy arrays (complex128).  Matrices are
small (at most a few hundred rows), so dense factorizations are always the
right tool.  All logarithms are natural; conversion to bits happens only at
the reporting boundary.
"""

from __future__ import annotations

import numpy as np

# Scale-invariant positive-definiteness threshold: an eigenvalue counts as
# positive only if it exceeds dim * PD_RTOL * lambda_max.
PD_RTOL = 1e-13

HERMITIAN_RTOL = 1e-12


class NotPositiveDefinite(ValueError):
    """Matrix required to be positive definite is not, numerically."""


class ConvergenceFailure(RuntimeError):
    """An iterative eigen/SVD routine failed to converge."""


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a 2-d complex128 array and reject non-finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def check_hermitian(m: np.ndarray, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Validate Hermitian symmetry and return the symmetrized matrix."""
    m = as_complex_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"Hermitian matrix must be square, got {m.shape}")
    scale = max(1.0, np.linalg.norm(m))
    if np.linalg.norm(m - m.conj().T) > rtol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return 0.5 * (m + m.conj().T)


def hermitian_eig(m: np.ndarray):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvectors as columns) with
    M = V diag(w) V^H.
    """
    m = check_hermitian(m)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as e:  # pragma: no cover - LAPACK rarely fails
        raise ConvergenceFailure(str(e)) from e
    return w, v


def logdet_hpd(m: np.ndarray) -> float:
    """log det of a Hermitian positive definite matrix (natural log).

    Raises NotPositiveDefinite when the smallest eigenvalue falls below the
    scale-invariant threshold dim * 1e-13 * lambda_max.
    """
    w, _ = hermitian_eig(m)
    n = len(w)
    lam_max = w[-1] if n else 0.0
    if n == 0:
        return 0.0
    if lam_max <= 0 or w[0] <= n * PD_RTOL * lam_max:
        raise NotPositiveDefinite(
            f"min eigenvalue {w[0]:.3e} below threshold for lambda_max {lam_max:.3e}"
        )
    return float(np.sum(np.log(w)))


def svd(m: np.ndarray):
    """Thin SVD: M = U diag(s) V^H with singular values descending.

    Returns (U, s, V); note V, not V^H, so columns of V are right singular
    vectors.
    """
    m = as_complex_matrix(m)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as e:  # pragma: no cover
        raise ConvergenceFailure(str(e)) from e
    return u, s, vh.conj().T


def schur_complement(a, b, bh, d) -> np.ndarray:
    """Schur complement A - B D^{-1} B^H of the block matrix [[A, B], [B^H, D]].

    D must be Hermitian positive definite; the assembled matrix must be
    Hermitian (so bh == b^H).
    """
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    bh = as_complex_matrix(bh)
    d = check_hermitian(d)
    if np.linalg.norm(bh - b.conj().T) > HERMITIAN_RTOL * max(1.0, np.linalg.norm(b)):
        raise ValueError("off-diagonal blocks are not Hermitian conjugates")
    w, v = hermitian_eig(d)
    lam_max = w[-1] if len(w) else 0.0
    if lam_max <= 0 or w[0] <= len(w) * PD_RTOL * lam_max:
        raise NotPositiveDefinite("lower-right block is not positive definite")
    dinv_bh = v @ ((v.conj().T @ bh) / w[:, None])
    s = a - b @ dinv_bh
    return 0.5 * (s + s.conj().T)


def solve_hpd(m: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve M X = rhs for Hermitian positive definite M via Cholesky."""
    m = check_hermitian(m)
    try:
        c = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as e:
        raise NotPositiveDefinite(str(e)) from e
    y = np.linalg.solve(c, rhs)
    return np.linalg.solve(c.conj().T, y)


def inv_hpd(m: np.ndarray) -> np.ndarray:
    """Inverse of a Hermitian positive definite matrix, re-symmetrized."""
    out = solve_hpd(m, np.eye(m.shape[0], dtype=np.complex128))
    return 0.5 * (out + out.conj().T)


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value."""
    m = as_complex_matrix(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def real_inner(a: np.ndarray, b: np.ndarray) -> float:
    """Real (Frobenius) inner product Re tr(A^H B)."""
    return float(np.real(np.vdot(a, b)))
