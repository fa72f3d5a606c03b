"""Checked matrix transforms between strategy classes.

Every transform here enlarges a strategy's local space by an explicit block
construction and is verified against its defining property:

* observable dilations replace arbitrary unitaries by self-adjoint ones while
  averaging the correlation with its adjoint, ``X -> (X + X*) / 2``;
* symmetrization realizes the same average by a convex combination;
* the corner embedding turns any size-``n`` correlation ``X`` into a
  self-adjoint size-``2n`` correlation ``W`` whose only nonzero super-blocks
  are ``X`` (top-right corner) and ``X*`` (bottom-left corner);
* the Halmos dilation extends a block contraction to a block unitary, which
  recovers a size-``n`` strategy from any strategy realizing a corner
  pattern.

Doubled local spaces are ordered with the new doubling index leading inside
each local factor, so each dilated block is literally the displayed
2x2 (or 4x4) operator matrix over the original space.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import PatternError, ShapeError, ValidationError
from .linalg import (
    DEFAULT_TOL,
    canonical_shuffle,
    hermitian_sqrt,
    operator_norm,
    require_square,
)
from .strategy import (
    CommutingStrategy,
    Correlation,
    Strategy,
    TensorStrategy,
    adjoint_strategy,
    convex_combine,
    correlation_of,
)

# Correlations accepted as embeddings may come from optimization, not exact
# construction, so the pattern check is looser than the working precision.
CORNER_PATTERN_TOL = 1e-8

# Eigenvalues of I - S*S below this floor are treated as exact zeros when
# forming defect operators; keeps Halmos dilations unitary at 1e-9 even when
# the contraction is itself numerically unitary.
DEFECT_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class EmbeddingWitness:
    """Original correlation plus the size-doubled corner-pattern correlation."""

    original: Correlation
    embedded: Correlation

    def corner(self) -> np.ndarray:
        X, _, _ = corner_pattern(self.embedded.X, self.original.n)
        return X

    def off_pattern(self) -> float:
        _, _, off = corner_pattern(self.embedded.X, self.original.n)
        return off

    def check(self, tol: float = CORNER_PATTERN_TOL) -> None:
        off = self.off_pattern()
        if off > tol:
            raise PatternError(f"embedded correlation has off-pattern mass {off:.3e} > {tol:.1e}")


def corner_pattern(W: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Split a size-``2n`` correlation into its corner super-blocks.

    Returns ``(X, X_adj, off)``: the top-right corner block, the bottom-left
    corner block, and the largest entry outside the two corners.
    """
    dim = require_square(W, "correlation")
    if dim != (2 * n) ** 2:
        raise ShapeError(f"correlation of a size-{2 * n} strategy must be {(2 * n) ** 2} x {(2 * n) ** 2}")
    blocks = (
        np.asarray(W, dtype=complex)
        .reshape(2, n, 2, n, 2, n, 2, n)
        .transpose(0, 2, 4, 6, 1, 3, 5, 7)
        .reshape(2, 2, 2, 2, n * n, n * n)
    )
    X = blocks[0, 0, 1, 1].copy()
    X_adj = blocks[1, 1, 0, 0].copy()
    mask = np.ones((2, 2, 2, 2), dtype=bool)
    mask[0, 0, 1, 1] = False
    mask[1, 1, 0, 0] = False
    off = float(np.max(np.abs(blocks[mask]))) if mask.any() else 0.0
    return X, X_adj, off


def _zeros_like(A: np.ndarray) -> np.ndarray:
    return np.zeros_like(np.asarray(A, dtype=complex))


def observable_dilation_tensor(s: TensorStrategy, tol: float = DEFAULT_TOL) -> TensorStrategy:
    """Self-adjoint unitary strategy with correlation ``(X + X*) / 2``.

    Each local space is doubled and block ``(i, j)`` becomes
    ``[[0, U_ij], [U_ji*, 0]]``; the state ``(psi, 0, 0, psi)/sqrt(2)`` pairs
    the two copies.  Hermitian correlations are preserved exactly.
    """
    s.validate(tol)
    U = canonical_shuffle(np.block([[_zeros_like(s.U), s.U], [s.U.conj().T, _zeros_like(s.U)]]), 2, s.n, s.dA)
    V = canonical_shuffle(np.block([[_zeros_like(s.V), s.V], [s.V.conj().T, _zeros_like(s.V)]]), 2, s.n, s.dB)
    Psi = np.zeros((2 * s.dA, 2 * s.dB), dtype=complex)
    Psi[: s.dA, : s.dB] = s.psi.reshape(s.dA, s.dB) / np.sqrt(2)
    Psi[s.dA :, s.dB :] = s.psi.reshape(s.dA, s.dB) / np.sqrt(2)
    return TensorStrategy(n=s.n, dA=2 * s.dA, dB=2 * s.dB, U=U, V=V, psi=Psi.reshape(-1))


def _slots(*positions: tuple[int, int]) -> np.ndarray:
    P = np.zeros((4, 4))
    for r, c in positions:
        P[r, c] = 1.0
    return P


# Placement patterns for the 4x4 commuting-model dilation: Alice occupies the
# (1,2)/(3,4) slots, Bob the (1,3)/(2,4) slots, so the products meet only in
# the anti-diagonal corners and commute.
_ALICE_FWD = _slots((0, 1), (2, 3))
_ALICE_BWD = _slots((1, 0), (3, 2))
_BOB_FWD = _slots((0, 2), (1, 3))
_BOB_BWD = _slots((2, 0), (3, 1))


def observable_dilation_commuting(s: CommutingStrategy, tol: float = DEFAULT_TOL) -> CommutingStrategy:
    """Commuting analogue of the observable dilation (dimension x4).

    Blocks become 4x4 operator matrices placed so that Alice and Bob entries
    still commute; the output passes the observable and commutation checks
    and has correlation ``(X + X*) / 2``.
    """
    s.validate(tol)
    U = canonical_shuffle(np.kron(_ALICE_FWD, s.U) + np.kron(_ALICE_BWD, s.U.conj().T), 4, s.n, s.d)
    V = canonical_shuffle(np.kron(_BOB_FWD, s.V) + np.kron(_BOB_BWD, s.V.conj().T), 4, s.n, s.d)
    psi = np.zeros(4 * s.d, dtype=complex)
    psi[: s.d] = s.psi / np.sqrt(2)
    psi[3 * s.d :] = s.psi / np.sqrt(2)
    return CommutingStrategy(n=s.n, d=4 * s.d, U=U, V=V, psi=psi)


def symmetrize_strategy(s: Strategy) -> Strategy:
    """Average a strategy with its adjoint: correlation ``(X + X*) / 2``.

    Against a self-adjoint game the bias becomes ``Re`` of the original bias.
    """
    return convex_combine(s, adjoint_strategy(s), 0.5)


def _corner_component(s: Strategy, phased: bool) -> Strategy:
    """One summand of the corner embedding: ``[[0, U], [U*, 0]]`` at size 2n.

    With ``phased=True`` Alice gets ``iU`` and Bob ``-iV``; averaging the two
    components cancels the middle blocks of the embedded correlation.
    """
    u = 1j * np.asarray(s.U) if phased else np.asarray(s.U)
    v = -1j * np.asarray(s.V) if phased else np.asarray(s.V)
    U = np.block([[_zeros_like(u), u], [u.conj().T, _zeros_like(u)]])
    V = np.block([[_zeros_like(v), v], [v.conj().T, _zeros_like(v)]])
    return replace(s, n=2 * s.n, U=U, V=V)


def embed_self_adjoint(s: Strategy, tol: float = DEFAULT_TOL) -> tuple[Strategy, EmbeddingWitness]:
    """Embed a size-``n`` strategy as a self-adjoint size-``2n`` one.

    The embedded correlation ``W`` carries ``X`` and ``X*`` in opposite
    corners and is zero elsewhere, so ``W = W*``.  Returns the embedded
    strategy together with a witness holding both correlations.
    """
    original = correlation_of(s, tol)
    embedded = convex_combine(_corner_component(s, False), _corner_component(s, True), 0.5)
    witness = EmbeddingWitness(original=original, embedded=correlation_of(embedded, tol))
    return embedded, witness


def halmos_dilation(S: np.ndarray, n: int, block_dim: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Extend an ``n x n``-block contraction to an ``n x n``-block unitary.

    Block ``(i, j)`` of the result is::

        [ S_ij                sqrt(I - S S*)_ij ]
        [ sqrt(I - S* S)_ij   -(S_ji)*          ]

    i.e. the canonical shuffle of the 2x2 Halmos dilation of ``S``.  The
    (1, 1) sub-blocks reproduce ``S`` bit for bit, and both defect operators
    vanish when ``S`` is unitary.
    """
    dim = require_square(S, "contraction")
    if n < 1 or block_dim < 1 or dim != n * block_dim:
        raise ShapeError(f"contraction of dimension {dim} does not factor as {n} x {block_dim}")
    norm = operator_norm(S)
    if norm > 1 + tol:
        raise ValidationError(f"operator norm {norm:.12g} exceeds 1; not a contraction")
    S = np.asarray(S, dtype=complex)
    eye = np.eye(dim)
    psd_tol = 2 * tol + 1e-12  # |S| <= 1 + tol lets I - S*S dip slightly below 0
    defect_left = hermitian_sqrt(eye - S @ S.conj().T, tol=psd_tol, floor=DEFECT_FLOOR)
    defect_right = hermitian_sqrt(eye - S.conj().T @ S, tol=psd_tol, floor=DEFECT_FLOOR)
    big = np.block([[S, defect_left], [defect_right, -S.conj().T]])
    return canonical_shuffle(big, 2, n, block_dim)


def _split_halves(A: np.ndarray, half: int) -> np.ndarray:
    """Top-right quarter of a matrix split at ``half``."""
    return np.asarray(A, dtype=complex)[:half, half:]


def _checked_corner(s2n: Strategy, tol: float, pattern_tol: float) -> tuple[int, np.ndarray]:
    if s2n.n % 2 != 0:
        raise ShapeError(f"embedding strategies have even size, got n = {s2n.n}")
    n = s2n.n // 2
    W = correlation_of(s2n, tol)
    X, _, off = corner_pattern(W.X, n)
    if off > pattern_tol:
        raise PatternError(
            f"correlation is not an embedding: off-pattern mass {off:.3e} > {pattern_tol:.1e}"
        )
    return n, X


def extract_from_embedding_tensor(
    s2n: TensorStrategy,
    tol: float = DEFAULT_TOL,
    pattern_tol: float = CORNER_PATTERN_TOL,
) -> TensorStrategy:
    """Recover a size-``n`` strategy from a corner-pattern size-``2n`` one.

    Reads off the contractions ``S = (U_{i, j+n})`` and ``T = (V_{k, l+n})``,
    dilates each to a unitary, and starts from the state ``(psi, 0, 0, 0)``;
    the resulting correlation equals the corner block ``X`` of the input.
    """
    n, _ = _checked_corner(s2n, tol, pattern_tol)
    S = _split_halves(s2n.U, n * s2n.dA)
    T = _split_halves(s2n.V, n * s2n.dB)
    U = halmos_dilation(S, n, s2n.dA, tol)
    V = halmos_dilation(T, n, s2n.dB, tol)
    Psi = np.zeros((2 * s2n.dA, 2 * s2n.dB), dtype=complex)
    Psi[: s2n.dA, : s2n.dB] = s2n.psi.reshape(s2n.dA, s2n.dB)
    return TensorStrategy(n=n, dA=2 * s2n.dA, dB=2 * s2n.dB, U=U, V=V, psi=Psi.reshape(-1))


def extract_from_embedding_commuting(
    s2n: CommutingStrategy,
    tol: float = DEFAULT_TOL,
    pattern_tol: float = CORNER_PATTERN_TOL,
) -> CommutingStrategy:
    """Commuting-model extraction from a corner-pattern strategy.

    Two-stage construction (dimension x4): Bob's contraction ``T`` is Halmos
    dilated to ``D``; Alice's ``S`` is doubled to ``diag(S_ij, S_ij)`` and
    then Halmos dilated against ``diag(D_kl, D_kl)``.  Functions of ``T``
    stay in the commutant of the ``S`` entries, so the output still commutes.
    """
    n, _ = _checked_corner(s2n, tol, pattern_tol)
    d = s2n.d
    S = _split_halves(s2n.U, n * d)
    T = _split_halves(s2n.V, n * d)
    D = halmos_dilation(T, n, d, tol)
    C = canonical_shuffle(np.kron(np.eye(2), S), 2, n, d)
    U = halmos_dilation(C, n, 2 * d, tol)
    V = canonical_shuffle(np.kron(np.eye(2), D), 2, n, 2 * d)
    psi = np.zeros(4 * d, dtype=complex)
    psi[:d] = s2n.psi
    return CommutingStrategy(n=n, d=4 * d, U=U, V=V, psi=psi)


def extract_from_embedding(s2n: Strategy, tol: float = DEFAULT_TOL, pattern_tol: float = CORNER_PATTERN_TOL) -> Strategy:
    """Model dispatch for the corner-pattern extraction."""
    if isinstance(s2n, TensorStrategy):
        return extract_from_embedding_tensor(s2n, tol, pattern_tol)
    if isinstance(s2n, CommutingStrategy):
        return extract_from_embedding_commuting(s2n, tol, pattern_tol)
    raise TypeError(f"not a strategy: {type(s2n).__name__}")
