"""Tests for the dense Hermitian linear-algebra helpers."""

import numpy as np
import pytest

from mimome.linalg import (
    NotPositiveDefinite,
    check_hermitian,
    hermitian_eig,
    inv_hpd,
    logdet_hpd,
    real_inner,
    schur_complement,
    solve_hpd,
    spectral_norm,
    svd,
)


def random_hpd(rng, n, jitter=1e-3):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a @ a.conj().T + jitter * np.eye(n)


def test_check_hermitian_symmetrizes():
    rng = np.random.default_rng(0)
    a = random_hpd(rng, 4)
    out = check_hermitian(a + 1e-14 * 1j * np.eye(4))
    assert np.allclose(out, out.conj().T)


def test_check_hermitian_rejects_nonhermitian():
    a = np.array([[1.0, 2.0], [3.0, 1.0]], dtype=np.complex128)
    with pytest.raises(ValueError):
        check_hermitian(a)


def test_logdet_hpd_matches_slogdet():
    rng = np.random.default_rng(1)
    for _ in range(20):
        n = rng.integers(1, 6)
        a = random_hpd(rng, int(n))
        sign, ld = np.linalg.slogdet(a)
        assert sign > 0
        assert abs(logdet_hpd(a) - ld) < 1e-10 * max(1.0, abs(ld))


def test_logdet_hpd_identity_is_zero():
    assert logdet_hpd(np.eye(3)) == 0.0


def test_logdet_hpd_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        logdet_hpd(np.diag([1.0, -1.0]).astype(np.complex128))


def test_solve_and_inverse_hpd():
    rng = np.random.default_rng(2)
    for _ in range(10):
        a = random_hpd(rng, 5)
        b = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
        x = solve_hpd(a, b)
        assert np.allclose(a @ x, b, atol=1e-8)
        assert np.allclose(a @ inv_hpd(a), np.eye(5), atol=1e-8)


def test_schur_complement_determinant_identity():
    # det of the block matrix equals det(D) * det(schur complement)
    rng = np.random.default_rng(3)
    for _ in range(10):
        m = random_hpd(rng, 6)
        a, b, d = m[:3, :3], m[:3, 3:], m[3:, 3:]
        s = schur_complement(a, b, b.conj().T, d)
        lhs = np.linalg.slogdet(m)[1]
        rhs = np.linalg.slogdet(d)[1] + np.linalg.slogdet(s)[1]
        assert abs(lhs - rhs) < 1e-9


def test_svd_reconstruction_and_spectral_norm():
    rng = np.random.default_rng(4)
    for _ in range(10):
        a = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
        u, s, v = svd(a)
        assert np.allclose((u * s) @ v.conj().T, a, atol=1e-10)
        assert abs(spectral_norm(a) - s[0]) < 1e-12


def test_hermitian_eig_orders_ascending():
    rng = np.random.default_rng(5)
    a = random_hpd(rng, 5)
    w, v = hermitian_eig(a)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, a, atol=1e-9)


def test_real_inner_is_real_bilinear():
    rng = np.random.default_rng(6)
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    e = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    val = real_inner(g, e)
    assert isinstance(val, float)
    assert abs(real_inner(g, 2.0 * e) - 2.0 * val) < 1e-12
