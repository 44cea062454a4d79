import warnings

import numpy as np
import pytest

from specrange.dilation import (DilationResult, approx_unitary,
                                dilate_contraction, psd_sqrt)
from specrange.finrange import haar_unitary


# ---------------------------------------------------------------------------
# PSD square roots
# ---------------------------------------------------------------------------

def test_psd_sqrt_identity_and_diagonal():
    assert np.allclose(psd_sqrt(np.eye(3)), np.eye(3), atol=1e-14)
    assert np.allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]),
                       atol=1e-14)


def test_psd_sqrt_random_reconstruction():
    rng = np.random.default_rng(0)
    for _ in range(10):
        a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        m = a @ a.conj().T
        r = psd_sqrt(m)
        assert np.abs(r @ r - m).max() <= 1e-10 * max(1.0, np.abs(m).max())


def test_psd_sqrt_clamps_tiny_negative():
    r = psd_sqrt(np.diag([1.0, -1e-13]))
    assert np.allclose(r, np.diag([1.0, 0.0]), atol=1e-6)


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(ValueError):
        psd_sqrt(np.diag([1.0, -1e-6]))
    with pytest.raises(ValueError):
        psd_sqrt(np.array([[0.0, 1.0], [0.0, 0.0]]))


# ---------------------------------------------------------------------------
# Contractions to unitaries
# ---------------------------------------------------------------------------

def test_dilate_zero_scalar():
    dil = dilate_contraction(np.array([[0.0]]))
    assert dil.v.shape == (2, 2)
    assert dil.v[0, 0] == 0.0
    assert np.abs(dil.v.conj().T @ dil.v - np.eye(2)).max() <= 1e-15


def test_dilate_unit_scalar():
    dil = dilate_contraction(np.array([[1.0]]))
    assert dil.v[0, 0] == 1.0
    assert np.abs(dil.q).max() <= 1e-12
    assert np.abs(dil.v.conj().T @ dil.v - np.eye(2)).max() <= 1e-15


def test_dilate_random_contractions():
    rng = np.random.default_rng(1)
    for seed in range(10):
        n = int(rng.integers(2, 9))
        u = 0.9 * haar_unitary(n, seed)
        dil = dilate_contraction(u)
        assert np.linalg.norm(dil.v.conj().T @ dil.v - np.eye(2 * n), 2) <= 1e-12
        assert np.array_equal(dil.u, u)  # corner preserved bitwise
        assert np.abs(dil.u @ dil.u.conj().T + dil.q @ dil.q.conj().T
                      - np.eye(n)).max() <= 1e-12


def test_dilate_rejects_expansions():
    with pytest.raises(ValueError):
        dilate_contraction(np.array([[1.5]]))


def test_dilate_rescales_marginal_norm_with_warning():
    u = np.array([[1.0 + 5e-11]])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        dil = dilate_contraction(u)
    assert any("rescaled" in str(w.message) for w in caught)
    assert abs(dil.v[0, 0] - 1.0) <= 1e-10


# ---------------------------------------------------------------------------
# Strong-approximation surrogate
# ---------------------------------------------------------------------------

def test_approx_identity():
    u_hat, v = approx_unitary(np.eye(16), 4)
    assert np.array_equal(u_hat[:8, :8], np.eye(8))
    assert np.all(u_hat[8:, :] == 0)
    assert np.array_equal(v, np.eye(8))


def test_approx_reproduces_permutation_in_corner():
    perm = np.eye(8)
    perm[[0, 1]] = perm[[1, 0]]  # 2-cycle inside the leading block
    u_hat, v = approx_unitary(perm, 4)
    assert np.array_equal(u_hat[:4, :4], perm[:4, :4])


def test_approx_strong_convergence_on_test_vectors():
    u_big = haar_unitary(64, 3)
    probes = np.eye(64)[:, :8]
    defects = []
    for n in (8, 16, 32):
        u_hat, _ = approx_unitary(u_big, n)
        defects.append(np.linalg.norm((u_hat - u_big) @ probes, axis=0).max())
    assert defects[0] > defects[1] > defects[2]


def test_approx_trace_identity_embedded():
    # values match exactly between the ambient picture and the compressed one
    rng = np.random.default_rng(4)
    big = 64
    u_big = haar_unitary(big, 11)
    c = rng.standard_normal((big, big)) + 1j * rng.standard_normal((big, big))
    t = rng.standard_normal((big, big)) + 1j * rng.standard_normal((big, big))
    for n in (4, 8, 16):
        u_hat, v = approx_unitary(u_big, n)
        lhs = np.trace(c @ u_hat.conj().T @ t @ u_hat)
        rhs = np.trace(c[:2 * n, :2 * n] @ v.conj().T @ t[:2 * n, :2 * n] @ v)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_approx_trace_functional_converges():
    rng = np.random.default_rng(5)
    big = 64
    u_big = haar_unitary(big, 21)
    c = np.zeros((big, big), dtype=complex)
    t = np.zeros((big, big), dtype=complex)
    c[:6, :6] = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    t[:6, :6] = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    target = np.trace(c @ u_big.conj().T @ t @ u_big)
    errs = []
    for n in (8, 16, 32):
        u_hat, _ = approx_unitary(u_big, n)
        errs.append(abs(np.trace(c @ u_hat.conj().T @ t @ u_hat) - target))
    assert errs[0] >= errs[1] >= errs[2]


def test_approx_size_guard():
    with pytest.raises(ValueError):
        approx_unitary(np.eye(8), 5)
    with pytest.raises(ValueError):
        approx_unitary(np.ones((4, 4)), 2)


def test_dilation_result_validates_unitarity():
    with pytest.raises(ValueError):
        DilationResult(np.ones((4, 4)), 2)
