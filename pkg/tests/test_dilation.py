import numpy as np
import pytest

from qxor.dilation import (
    EmbeddingWitness,
    _corner_component,
    corner_pattern,
    embed_self_adjoint,
    extract_from_embedding_commuting,
    extract_from_embedding_tensor,
    halmos_dilation,
    observable_dilation_commuting,
    observable_dilation_tensor,
    symmetrize_strategy,
)
from qxor.errors import PatternError, ValidationError
from qxor.game import chsh_game
from qxor.linalg import haar_unitary, is_unitary, operator_norm
from qxor.properties import random_game
from qxor.strategy import (
    TensorStrategy,
    bias_trace,
    check_commuting,
    correlation_commuting,
    correlation_of,
    correlation_tensor,
    is_observable_strategy,
    phase_adjust,
    random_commuting_strategy,
    random_tensor_strategy,
)


def identity_strategy(n):
    return TensorStrategy(n=n, dA=1, dB=1, U=np.eye(n), V=np.eye(n), psi=[1.0])


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# -- observable dilation, tensor model -------------------------------------------


def test_observable_dilation_identity_strategy():
    out = observable_dilation_tensor(identity_strategy(2))
    assert is_observable_strategy(out, tol=1e-12)
    np.testing.assert_allclose(correlation_tensor(out).X, np.eye(4), atol=1e-13)


def test_observable_dilation_preserves_hermitian_correlation():
    s = symmetrize_strategy(random_tensor_strategy(2, 2, 2, seed=1))
    X = correlation_tensor(s).X
    assert np.max(np.abs(X - X.conj().T)) <= 1e-12
    out = observable_dilation_tensor(s)
    assert np.max(np.abs(correlation_tensor(out).X - X)) <= 1e-11


def test_observable_dilation_averages_general_correlation():
    for seed in range(5):
        s = random_tensor_strategy(2, 2, 3, seed=seed)
        X = correlation_tensor(s).X
        out = observable_dilation_tensor(s)
        assert out.dA == 2 * s.dA and out.dB == 2 * s.dB
        assert is_observable_strategy(out, tol=1e-12)
        assert is_unitary(out.U, tol=1e-12) and is_unitary(out.V, tol=1e-12)
        assert np.max(np.abs(correlation_tensor(out).X - (X + X.conj().T) / 2)) <= 1e-11


def test_observable_dilation_block_structure():
    s = random_tensor_strategy(2, 2, 2, seed=6)
    out = observable_dilation_tensor(s)
    U = np.asarray(s.U)
    Uo = np.asarray(out.U)
    d = 2
    for i in range(2):
        for j in range(2):
            block = Uo[i * 2 * d : (i + 1) * 2 * d, j * 2 * d : (j + 1) * 2 * d]
            np.testing.assert_array_equal(block[:d, :d], np.zeros((d, d)))
            np.testing.assert_array_equal(block[d:, d:], np.zeros((d, d)))
            np.testing.assert_array_equal(block[:d, d:], U[i * d : (i + 1) * d, j * d : (j + 1) * d])
            np.testing.assert_array_equal(
                block[d:, :d], U[j * d : (j + 1) * d, i * d : (i + 1) * d].conj().T
            )


# -- observable dilation, commuting model ----------------------------------------


def test_observable_dilation_commuting_identity():
    s = random_commuting_strategy(2, 1, 1, seed=2)
    ident = type(s)(n=2, d=1, U=np.eye(2), V=np.eye(2), psi=[1.0])
    out = observable_dilation_commuting(ident)
    np.testing.assert_allclose(correlation_commuting(out).X, np.eye(4), atol=1e-13)


def test_observable_dilation_commuting_diagonal_blocks():
    from helpers import diagonal_commuting_strategy

    s = diagonal_commuting_strategy(2, 3, seed=3)
    X = correlation_commuting(s).X
    out = observable_dilation_commuting(s)
    assert np.max(np.abs(correlation_commuting(out).X - (X + X.conj().T) / 2)) <= 1e-11


def test_observable_dilation_commuting_random_product():
    for seed in range(10):
        s = random_commuting_strategy(2, 2, 2, seed=seed)
        X = correlation_commuting(s).X
        out = observable_dilation_commuting(s)
        assert out.d == 4 * s.d
        assert is_observable_strategy(out, tol=1e-10)
        assert check_commuting(out) <= 1e-10
        assert np.max(np.abs(correlation_commuting(out).X - (X + X.conj().T) / 2)) <= 1e-11


# -- symmetrize -------------------------------------------------------------------


def test_symmetrize_fixes_hermitian():
    s = symmetrize_strategy(random_tensor_strategy(2, 2, 2, seed=4))
    X = correlation_tensor(s).X
    Y = correlation_tensor(symmetrize_strategy(s)).X
    assert np.max(np.abs(Y - X)) <= 1e-12


def test_symmetrize_bias_is_real_part():
    rng = np.random.default_rng(5)
    for _ in range(10):
        game = random_game(2, rng)
        s = random_tensor_strategy(2, 2, 2, seed=int(rng.integers(0, 2**31)))
        b = bias_trace(game, correlation_tensor(s))
        b_sym = bias_trace(game, correlation_tensor(symmetrize_strategy(s)))
        assert abs(b_sym - b.real) <= 1e-12


def test_symmetrize_after_phase_adjust_attains_modulus():
    rng = np.random.default_rng(6)
    for _ in range(10):
        game = random_game(2, rng)
        s = random_tensor_strategy(2, 2, 2, seed=int(rng.integers(0, 2**31)))
        b = bias_trace(game, correlation_tensor(s))
        best = bias_trace(game, correlation_tensor(symmetrize_strategy(phase_adjust(s, game))))
        assert abs(best - abs(b)) <= 1e-10
        assert abs(best.imag) <= 1e-12


# -- corner embedding -------------------------------------------------------------


def test_embed_identity_strategy_corner():
    s = identity_strategy(2)
    embedded, witness = embed_self_adjoint(s)
    assert embedded.n == 4
    np.testing.assert_allclose(witness.corner(), np.eye(4), atol=1e-13)
    assert witness.off_pattern() <= 1e-13
    witness.check()


def test_embed_random_tensor_witness():
    for seed in range(5):
        s = random_tensor_strategy(2, 2, 2, seed=seed)
        X = correlation_tensor(s).X
        embedded, witness = embed_self_adjoint(s)
        assert witness.off_pattern() <= 1e-11
        assert np.max(np.abs(witness.corner() - X)) <= 1e-12
        W = witness.embedded.X
        assert np.max(np.abs(W - W.conj().T)) <= 1e-12
        _, X_adj, _ = corner_pattern(W, s.n)
        assert np.max(np.abs(X_adj - X.conj().T)) <= 1e-12


def test_embed_single_component_has_middle_blocks():
    # without the phase-averaged second copy, the middle blocks equal
    # Z[(i,j),(k,l)] = <(U_ij (x) V_lk*) psi, psi> and are generically nonzero
    s = random_tensor_strategy(2, 2, 2, seed=7)
    half = _corner_component(s, phased=False)
    W = correlation_tensor(half).X
    blocks = (
        W.reshape(2, 2, 2, 2, 2, 2, 2, 2)
        .transpose(0, 2, 4, 6, 1, 3, 5, 7)
        .reshape(2, 2, 2, 2, 4, 4)
    )
    Z = blocks[0, 1, 1, 0]
    U4 = np.asarray(s.U).reshape(2, 2, 2, 2).transpose(0, 2, 1, 3)
    V4 = np.asarray(s.V).reshape(2, 2, 2, 2).transpose(0, 2, 1, 3)
    oracle = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    op = np.kron(U4[i, j], V4[l, k].conj().T)
                    oracle[i * 2 + k, j * 2 + l] = np.vdot(s.psi, op @ s.psi)
    assert np.max(np.abs(Z - oracle)) <= 1e-12
    assert np.max(np.abs(Z)) > 1e-3  # demonstrates why the averaging is needed
    Z_adj = blocks[1, 0, 0, 1]
    assert np.max(np.abs(Z_adj - oracle.conj().T)) <= 1e-12


def test_embed_commuting_strategy():
    s = random_commuting_strategy(2, 2, 2, seed=8)
    embedded, witness = embed_self_adjoint(s)
    assert embedded.n == 4
    assert check_commuting(embedded) <= 1e-12
    assert witness.off_pattern() <= 1e-11


# -- halmos_dilation ---------------------------------------------------------------


def test_halmos_zero_contraction():
    n, d = 2, 2
    S = np.zeros((n * d, n * d), dtype=complex)
    U = halmos_dilation(S, n, d)
    for i in range(n):
        for j in range(n):
            block = U[i * 2 * d : (i + 1) * 2 * d, j * 2 * d : (j + 1) * 2 * d]
            expected = np.zeros((2 * d, 2 * d), dtype=complex)
            if i == j:
                expected[:d, d:] = np.eye(d)
                expected[d:, :d] = np.eye(d)
            np.testing.assert_allclose(block, expected, atol=1e-14)


def test_halmos_unitary_contraction_has_zero_defects():
    n, d = 2, 2
    S = haar_unitary(n * d, seed=9)
    U = halmos_dilation(S, n, d)
    assert is_unitary(U, tol=1e-9)
    for i in range(n):
        for j in range(n):
            block = U[i * 2 * d : (i + 1) * 2 * d, j * 2 * d : (j + 1) * 2 * d]
            Sij = S[i * d : (i + 1) * d, j * d : (j + 1) * d]
            Sji = S[j * d : (j + 1) * d, i * d : (i + 1) * d]
            np.testing.assert_array_equal(block[:d, :d], Sij)
            np.testing.assert_allclose(block[:d, d:], 0, atol=1e-9)
            np.testing.assert_allclose(block[d:, :d], 0, atol=1e-9)
            np.testing.assert_allclose(block[d:, d:], -Sji.conj().T, atol=1e-14)


def test_halmos_scalar_half():
    U = halmos_dilation(np.array([[0.5]]), 1, 1)
    expected = np.array([[0.5, np.sqrt(3) / 2], [np.sqrt(3) / 2, -0.5]])
    np.testing.assert_allclose(U, expected, atol=1e-14)


def test_halmos_corner_blocks_reproduce_contraction():
    rng = np.random.default_rng(10)
    for _ in range(20):
        n, d = 2, int(rng.integers(1, 4))
        A = crandn(rng, n * d, n * d)
        S = A / (operator_norm(A) * float(rng.uniform(1.0, 3.0)))
        U = halmos_dilation(S, n, d)
        assert is_unitary(U, tol=1e-9)
        corner = U.reshape(n, 2 * d, n, 2 * d)[:, :d, :, :d].reshape(n * d, n * d)
        np.testing.assert_array_equal(corner, S)


def test_halmos_rejects_expansion():
    with pytest.raises(ValidationError, match="contraction"):
        halmos_dilation(2 * np.eye(2), 2, 1)


# -- extraction and round trips ------------------------------------------------------


def test_roundtrip_tensor_random():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(2, 4))
        dA, dB = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        s = random_tensor_strategy(n, dA, dB, seed=int(rng.integers(0, 2**31)))
        X = correlation_tensor(s).X
        embedded, _ = embed_self_adjoint(s)
        recovered = extract_from_embedding_tensor(embedded)
        assert recovered.n == n
        assert np.max(np.abs(correlation_tensor(recovered).X - X)) <= 1e-10


def test_roundtrip_identity_strategy():
    embedded, _ = embed_self_adjoint(identity_strategy(2))
    recovered = extract_from_embedding_tensor(embedded)
    np.testing.assert_allclose(correlation_tensor(recovered).X, np.eye(4), atol=1e-12)


def test_extraction_exact_when_contraction_unitary():
    # the embedding's extracted quarter is unitary, so the defect blocks vanish
    s = random_tensor_strategy(2, 2, 2, seed=12)
    embedded, _ = embed_self_adjoint(s)
    n, dA = 2, embedded.dA
    S = np.asarray(embedded.U)[: n * dA, n * dA :]
    assert np.max(np.abs(S.conj().T @ S - np.eye(n * dA))) <= 1e-12
    recovered = extract_from_embedding_tensor(embedded)
    d = dA
    blocks = np.asarray(recovered.U).reshape(n, 2 * d, n, 2 * d)
    assert np.max(np.abs(blocks[:, :d, :, d:])) == 0.0  # zero defect blocks
    assert np.max(np.abs(blocks[:, d:, :, :d])) == 0.0
    assert np.max(np.abs(correlation_tensor(recovered).X - correlation_tensor(s).X)) <= 1e-12


def test_extract_rejects_non_embedding():
    s = random_tensor_strategy(2, 2, 2, seed=13)  # size 2 = 2n with n=1, wrong pattern
    with pytest.raises(PatternError, match="pattern"):
        extract_from_embedding_tensor(s)


def test_extract_rejects_odd_size():
    from qxor.errors import ShapeError

    with pytest.raises(ShapeError):
        extract_from_embedding_tensor(random_tensor_strategy(3, 1, 1, seed=14))


def test_roundtrip_commuting_random():
    rng = np.random.default_rng(15)
    for _ in range(15):
        dA, dB = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        s = random_commuting_strategy(2, dA, dB, seed=int(rng.integers(0, 2**31)))
        X = correlation_commuting(s).X
        embedded, _ = embed_self_adjoint(s)
        recovered = extract_from_embedding_commuting(embedded)
        assert recovered.d == 4 * embedded.d
        assert np.max(np.abs(correlation_commuting(recovered).X - X)) <= 1e-9
        assert check_commuting(recovered) <= 1e-9


def test_roundtrip_commuting_identity():
    ident = random_commuting_strategy(2, 1, 1, seed=16)
    ident = type(ident)(n=2, d=1, U=np.eye(2), V=np.eye(2), psi=[1.0])
    embedded, _ = embed_self_adjoint(ident)
    recovered = extract_from_embedding_commuting(embedded)
    np.testing.assert_allclose(correlation_commuting(recovered).X, np.eye(4), atol=1e-12)


def test_commuting_extraction_output_commutes():
    # 50 random inputs: the two-stage construction stays inside the commutant
    rng = np.random.default_rng(17)
    for _ in range(50):
        dA, dB = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        s = random_commuting_strategy(2, dA, dB, seed=int(rng.integers(0, 2**31)))
        embedded, _ = embed_self_adjoint(s)
        recovered = extract_from_embedding_commuting(embedded)
        assert check_commuting(recovered) <= 1e-9


# -- witness object ------------------------------------------------------------------


def test_witness_check_raises_on_violation():
    s = random_tensor_strategy(2, 2, 2, seed=18)
    X = correlation_tensor(s)
    bad = EmbeddingWitness(original=X, embedded=correlation_of(_corner_component(s, False)))
    with pytest.raises(PatternError):
        bad.check(tol=1e-8)


def test_dilations_against_chsh_bias():
    # symmetrized optimal-phase strategies keep the full CHSH bias
    game = chsh_game()
    s = random_tensor_strategy(2, 2, 2, seed=19)
    b = bias_trace(game, correlation_tensor(s))
    sym = symmetrize_strategy(phase_adjust(s, game))
    b_sym = bias_trace(game, correlation_tensor(sym))
    assert abs(b_sym - abs(b)) <= 1e-10
