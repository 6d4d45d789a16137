import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dpbound import logdet_ratio, numerical_rank, signal_subspace, whiten_state
from dpbound.errors import BothSingular, NotSquare, QsRankDeficient
from dpbound.spectral import logdet_psd

from conftest import rand_psd


def test_numerical_rank_basics():
    assert numerical_rank(np.eye(3), 1e-9) == 3
    assert numerical_rank(np.diag([1.0, 1e-15]), 1e-9) == 1
    w = np.array([1.0, 2.0, 2.0])
    assert numerical_rank(np.outer(w, w), 1e-9) == 1
    assert numerical_rank(np.zeros((2, 2))) == 0
    with pytest.raises(NotSquare):
        numerical_rank(np.zeros((2, 3)))


def test_numerical_rank_scale_equivariant(rng):
    for _ in range(20):
        M = rand_psd(rng, int(rng.integers(1, 5)), lo=1e-3, hi=1e3)
        c = float(np.exp(rng.uniform(-20, 20)))
        assert numerical_rank(M) == numerical_rank(c * M)


def test_signal_subspace_axis_aligned():
    sub = signal_subspace(np.eye(2), np.diag([3.0, 0.0]))
    assert sub.M0 == 1
    assert np.abs(sub.U[0]) == pytest.approx([1.0, 0.0], abs=1e-12)
    assert sub.spectrum[0] == pytest.approx(3.0)


def test_signal_subspace_miso():
    h = np.array([[0.6, 0.8]])  # 1x2 receive row
    sub = signal_subspace(h, 2.0 * np.eye(2))
    assert sub.M0 == 1
    assert abs(abs(sub.U[0, 0]) - 1.0) < 1e-12


def test_signal_subspace_full_rank():
    sub = signal_subspace(np.eye(2), 5.0 * np.eye(2))
    assert sub.M0 == 2
    assert np.allclose(sub.U @ sub.U.conj().T, np.eye(2), atol=1e-10)


def test_subspace_invariants(rng):
    for _ in range(25):
        n_r, n_t = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        H = rng.standard_normal((n_r, n_t))
        k = int(rng.integers(0, n_t + 1))
        F = rng.standard_normal((n_t, k)) if k else np.zeros((n_t, 1))
        Qx = F @ F.T
        sub = signal_subspace(H, Qx)
        G = H @ Qx @ H.T
        if sub.M0:
            assert np.allclose(sub.U @ sub.U.conj().T, np.eye(sub.M0), atol=1e-10)
            Pr = sub.U.conj().T @ sub.U
            # projector idempotence and span containment
            assert np.linalg.norm(Pr @ Pr - Pr) <= 1e-10
            assert np.linalg.norm(G - Pr @ G @ Pr) <= 1e-8 * (1 + np.linalg.norm(G))


def test_whiten_diagonal():
    w = whiten_state(np.diag([4.0, 1.0]))
    assert np.allclose(w.eigvals, [4.0, 1.0])


def test_whiten_hand_case():
    w = whiten_state(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(w.eigvals, [3.0, 1.0], atol=1e-12)
    Q = w.eigvecs @ np.diag(w.eigvals) @ w.eigvecs.conj().T
    assert np.allclose(Q, [[2.0, 1.0], [1.0, 2.0]], atol=1e-10)
    # eigenvectors are (1,1)/sqrt2 and (1,-1)/sqrt2 up to sign
    assert abs(abs(w.eigvecs[0, 0]) - 1 / math.sqrt(2)) < 1e-12


def test_whiten_degenerate_spectrum():
    c = 2.5
    w = whiten_state(c * np.eye(3))
    assert np.allclose(w.eigvals, c)
    Q = w.eigvecs @ np.diag(w.eigvals) @ w.eigvecs.conj().T
    assert np.allclose(Q, c * np.eye(3), atol=1e-10)


def test_whiten_rejects_rank_deficient():
    with pytest.raises(QsRankDeficient):
        whiten_state(np.diag([1.0, 0.0]))


def test_logdet_ratio_values():
    assert logdet_ratio(np.diag([8.0]), np.diag([2.0])) == pytest.approx(2.0)
    assert logdet_ratio(np.eye(2), np.eye(2)) == pytest.approx(0.0)
    assert logdet_ratio(np.diag([10032.62]), np.diag([10000.0])) == \
        pytest.approx(0.004698412272361452, abs=1e-12)


def test_logdet_ratio_singular_cases():
    assert math.isinf(logdet_ratio(np.eye(2), np.zeros((2, 2))))
    with pytest.raises(BothSingular):
        logdet_ratio(np.zeros((2, 2)), np.zeros((2, 2)))


def test_logdet_chain(rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        A, B, C = (rand_psd(rng, n) for _ in range(3))
        lhs = logdet_ratio(A, B) + logdet_ratio(B, C)
        assert lhs == pytest.approx(logdet_ratio(A, C), abs=1e-9)


@settings(max_examples=100, derandomize=True)
@given(st.floats(0.1, 1e6), st.floats(0.1, 1e6))
def test_logdet_ratio_matches_scalar_logs(a, b):
    assert logdet_ratio([[a]], [[b]]) == pytest.approx(math.log2(a / b), abs=1e-9)


def test_logdet_psd_empty_and_singular():
    assert logdet_psd(np.zeros((0, 0))) == 0.0
    assert logdet_psd(np.diag([1.0, 0.0])) == -math.inf
