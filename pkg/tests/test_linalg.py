import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qxor.errors import NumericalError, ShapeError, ValidationError
from qxor.linalg import (
    TensorLayout,
    canonical_shuffle,
    haar_unitary,
    hermitian_sqrt,
    is_unitary,
    partial_trace_game,
    polar_factor,
    trace_norm,
)


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# -- is_unitary ----------------------------------------------------------------


def test_is_unitary_identity():
    assert is_unitary(np.eye(4), tol=1e-12)


def test_is_unitary_scaled_identity():
    assert not is_unitary(2 * np.eye(2), tol=1e-12)


def test_is_unitary_haar_sample():
    assert is_unitary(haar_unitary(8, seed=5), tol=1e-10)


def test_is_unitary_rejects_non_square():
    with pytest.raises(ShapeError):
        is_unitary(np.zeros((2, 3)))


# -- hermitian_sqrt ------------------------------------------------------------


def test_hermitian_sqrt_identity():
    np.testing.assert_allclose(hermitian_sqrt(np.eye(3)), np.eye(3), atol=1e-14)


def test_hermitian_sqrt_diagonal():
    np.testing.assert_allclose(
        hermitian_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14
    )


def test_hermitian_sqrt_multiply_back():
    # oracle: square the result and compare with the input
    rng = np.random.default_rng(11)
    R = haar_unitary(4, seed=12)
    for diag in (np.full(4, 0.25), rng.uniform(0, 1, 4)):
        P = (R * diag) @ R.conj().T
        P = (P + P.conj().T) / 2
        Q = hermitian_sqrt(P)
        assert np.max(np.abs(Q @ Q - P)) <= 1e-12


def test_hermitian_sqrt_random_psd_dim_16():
    rng = np.random.default_rng(13)
    for _ in range(100):
        dim = int(rng.integers(1, 17))
        A = crandn(rng, dim, dim)
        P = A @ A.conj().T
        P = (P + P.conj().T) / 2
        Q = hermitian_sqrt(P)
        assert np.max(np.abs(Q @ Q - P)) <= 1e-10 * max(1.0, np.linalg.norm(P))


def test_hermitian_sqrt_rejects_negative():
    with pytest.raises(NumericalError):
        hermitian_sqrt(np.diag([1.0, -0.5]))


def test_hermitian_sqrt_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        hermitian_sqrt(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_hermitian_sqrt_clamps_rounding_negatives():
    P = np.diag([1.0, -1e-12])
    Q = hermitian_sqrt(P, tol=1e-9)
    np.testing.assert_allclose(Q, np.diag([1.0, 0.0]), atol=1e-14)


# -- polar_factor --------------------------------------------------------------


def test_polar_factor_identity():
    U = polar_factor(np.eye(3))
    np.testing.assert_allclose(U, np.eye(3), atol=1e-14)
    assert abs(np.trace(U @ np.eye(3)).real - 3) <= 1e-12


def test_polar_factor_sign_case():
    A = -np.eye(2)
    U = polar_factor(A)
    np.testing.assert_allclose(U, -np.eye(2), atol=1e-14)
    assert abs(np.trace(U @ A).real - 2) <= 1e-12


def test_polar_factor_beats_random_search():
    # oracle: 1e6 Haar unitaries give a lower bound on the maximum
    rng = np.random.default_rng(7)
    A = crandn(rng, 3, 3)
    value = np.trace(polar_factor(A) @ A).real
    best_random = -np.inf
    for _ in range(10):
        Z = crandn(rng, 100_000, 3, 3)
        q, r = np.linalg.qr(Z)
        diag = np.einsum("...ii->...i", r)
        q = q * (diag / np.abs(diag))[:, None, :]
        best_random = max(best_random, np.einsum("bij,ji->b", q, A).real.max())
    assert best_random <= value + 1e-6
    assert abs(value - trace_norm(A)) <= 1e-9


def test_polar_factor_attains_trace_norm():
    rng = np.random.default_rng(8)
    for _ in range(100):
        dim = int(rng.integers(1, 7))
        A = crandn(rng, dim, dim)
        U = polar_factor(A)
        assert is_unitary(U, tol=1e-12)
        value = np.trace(U @ A).real
        assert abs(value - trace_norm(A)) <= 1e-9
        for _ in range(10):
            Q = haar_unitary(dim, seed=int(rng.integers(0, 2**31)))
            assert np.trace(Q @ A).real <= value + 1e-9


def test_polar_factor_singular_input_still_unitary():
    A = np.zeros((3, 3), dtype=complex)
    A[0, 0] = 2.0
    U = polar_factor(A)
    assert is_unitary(U, tol=1e-12)
    assert abs(np.trace(U @ A).real - 2.0) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=2**31 - 1))
def test_polar_factor_duality_hypothesis(dim, seed):
    rng = np.random.default_rng(seed)
    A = crandn(rng, dim, dim)
    value = np.trace(polar_factor(A) @ A).real
    assert abs(value - trace_norm(A)) <= 1e-9 * max(1.0, trace_norm(A))


# -- trace_norm ----------------------------------------------------------------


def test_trace_norm_identity():
    assert abs(trace_norm(np.eye(5)) - 5) <= 1e-12


def test_trace_norm_rank_one_projection():
    rng = np.random.default_rng(3)
    phi = crandn(rng, 4)
    phi /= np.linalg.norm(phi)
    assert abs(trace_norm(np.outer(phi, phi.conj())) - 1) <= 1e-12


def test_trace_norm_signed_diagonal():
    assert abs(trace_norm(np.diag([0.5, -0.5])) - 1) <= 1e-12


# -- partial_trace_game --------------------------------------------------------


def test_partial_trace_identity():
    n, d = 3, 4
    np.testing.assert_allclose(partial_trace_game(np.eye(n * d), n, d), n * np.eye(d), atol=1e-14)


def test_partial_trace_product():
    rng = np.random.default_rng(4)
    A = crandn(rng, 3, 3)
    B = crandn(rng, 2, 2)
    got = partial_trace_game(np.kron(A, B), 3, 2)
    np.testing.assert_allclose(got, np.trace(A) * B, atol=1e-13)


def test_partial_trace_index_sum_oracle():
    rng = np.random.default_rng(5)
    n, d = 2, 3
    O = crandn(rng, n * d, n * d)
    got = partial_trace_game(O, n, d)
    oracle = np.zeros((d, d), dtype=complex)
    for g in range(n):
        for a in range(d):
            for b in range(d):
                oracle[a, b] += O[g * d + a, g * d + b]
    assert np.max(np.abs(got - oracle)) <= 1e-14
    assert abs(np.trace(got) - np.trace(O)) <= 1e-13


def test_partial_trace_linear():
    rng = np.random.default_rng(6)
    O1 = crandn(rng, 6, 6)
    O2 = crandn(rng, 6, 6)
    a, b = 0.3 - 1j, 2.0 + 0.5j
    lhs = partial_trace_game(a * O1 + b * O2, 2, 3)
    rhs = a * partial_trace_game(O1, 2, 3) + b * partial_trace_game(O2, 2, 3)
    assert np.max(np.abs(lhs - rhs)) <= 1e-13


def test_partial_trace_rejects_mismatch():
    with pytest.raises(ShapeError):
        partial_trace_game(np.eye(5), 2, 3)


# -- canonical_shuffle ---------------------------------------------------------


def shuffle_permutation(outer, inner, block):
    """Explicit permutation-matrix oracle for the block-level swap."""
    dim = outer * inner * block
    P = np.zeros((dim, dim))
    for o in range(outer):
        for i in range(inner):
            for b in range(block):
                P[i * outer * block + o * block + b, o * inner * block + i * block + b] = 1.0
    return P


def test_canonical_shuffle_identity():
    np.testing.assert_array_equal(canonical_shuffle(np.eye(12), 2, 3, 2), np.eye(12))


def test_canonical_shuffle_involution():
    rng = np.random.default_rng(9)
    A = crandn(rng, 12, 12)
    back = canonical_shuffle(canonical_shuffle(A, 2, 3, 2), 3, 2, 2)
    np.testing.assert_array_equal(back, A)


def test_canonical_shuffle_swaps_kron_factors():
    E12 = np.zeros((2, 2)); E12[0, 1] = 1
    F21 = np.zeros((2, 2)); F21[1, 0] = 1
    got = canonical_shuffle(np.kron(E12, F21), 2, 2, 1)
    np.testing.assert_array_equal(got, np.kron(F21, E12))


def test_canonical_shuffle_permutation_oracle():
    rng = np.random.default_rng(10)
    for outer, inner, block in [(2, 3, 2), (3, 2, 1), (2, 2, 3)]:
        A = crandn(rng, outer * inner * block, outer * inner * block)
        P = shuffle_permutation(outer, inner, block)
        np.testing.assert_allclose(canonical_shuffle(A, outer, inner, block), P @ A @ P.T, atol=1e-14)


def test_canonical_shuffle_preserves_structure():
    rng = np.random.default_rng(12)
    U = haar_unitary(12, seed=21)
    assert is_unitary(canonical_shuffle(U, 2, 3, 2), tol=1e-12)
    H = crandn(rng, 12, 12)
    H = H + H.conj().T
    S = canonical_shuffle(H, 3, 2, 2)
    assert np.max(np.abs(S - S.conj().T)) <= 1e-14


def test_canonical_shuffle_rejects_bad_factorization():
    with pytest.raises(ShapeError):
        canonical_shuffle(np.eye(10), 2, 2, 2)


# -- haar_unitary --------------------------------------------------------------


def test_haar_dim_one_is_phase():
    u = haar_unitary(1, seed=0)
    assert abs(abs(u[0, 0]) - 1) <= 1e-12


def test_haar_deterministic():
    np.testing.assert_array_equal(haar_unitary(4, seed=123), haar_unitary(4, seed=123))


def test_haar_rejects_bad_dim():
    with pytest.raises(ValidationError):
        haar_unitary(0, seed=1)


def test_haar_first_entry_moment():
    # Sampler-independent oracle: |u_11|^2 of a Haar column is Beta(1, d-1)
    # distributed; integrate the density numerically for the expected value.
    d = 4
    x = np.linspace(0.0, 1.0, 200_001)
    density = (d - 1) * (1 - x) ** (d - 2)
    expected = np.trapezoid(x * density, x)
    assert abs(expected - 1 / d) <= 1e-8

    samples = np.array([abs(haar_unitary(d, seed=k)[0, 0]) ** 2 for k in range(10_000)])
    stderr = samples.std(ddof=1) / np.sqrt(samples.size)
    assert abs(samples.mean() - expected) <= 3 * stderr


# -- TensorLayout --------------------------------------------------------------


def test_tensor_layout_matches_kron():
    rng = np.random.default_rng(14)
    n = 3
    B = crandn(rng, n, n)
    C = crandn(rng, n, n)
    A = np.kron(B, C)
    layout = TensorLayout(n)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    assert abs(layout.entry(A, i, j, k, l) - B[i, j] * C[k, l]) <= 1e-14
