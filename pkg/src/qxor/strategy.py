"""Strategies in the tensor and finite-dimensional commuting models.

A strategy is a pair of block unitaries ``U = (U_ij)``, ``V = (V_kl)``
(``n x n`` blocks over the local spaces) together with a unit state.  Its
correlation is the ``n^2 x n^2`` matrix of inner products

    tensor model:     X[(i, j), (k, l)] = <(U_ij (x) V_kl) psi, psi>
    commuting model:  X[(i, j), (k, l)] = <U_ij V_kl psi, psi>

laid out per :class:`qxor.linalg.TensorLayout`.  Biases are linear in the
correlation: the value of a strategy against a game ``M`` is ``Tr(M @ X)``.

The commuting model is represented on a single finite-dimensional space with
an explicit entrywise commutation check; closure-model (qa) membership is
witnessed only by sequences of tensor strategies, e.g. optimizer output.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import jsonio
from .errors import CommutationError, ParseError, ShapeError, ValidationError
from .game import QuantumXorGame
from .linalg import (
    DEFAULT_TOL,
    from_blocks,
    haar_from_rng,
    partial_trace_game,
    to_blocks,
    unit_vector_from_rng,
)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TensorStrategy:
    """Finite-dimensional tensor-model strategy ``(U, V, psi)``.

    ``U`` is ``(n dA) x (n dA)`` viewed as ``n x n`` blocks of size ``dA``,
    ``V`` is ``(n dB) x (n dB)``, and ``psi`` is a unit vector in
    C^(dA dB) with the A factor leading.
    """

    n: int
    dA: int
    dB: int
    U: np.ndarray
    V: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        if self.n < 1 or self.dA < 1 or self.dB < 1:
            raise ShapeError("n, dA, dB must all be >= 1")
        U = _freeze(self.U)
        V = _freeze(self.V)
        psi = _freeze(np.asarray(self.psi, dtype=complex).reshape(-1))
        if U.shape != (self.n * self.dA,) * 2:
            raise ShapeError(f"U must be {self.n * self.dA} x {self.n * self.dA}, got {U.shape}")
        if V.shape != (self.n * self.dB,) * 2:
            raise ShapeError(f"V must be {self.n * self.dB} x {self.n * self.dB}, got {V.shape}")
        if psi.shape != (self.dA * self.dB,):
            raise ShapeError(f"psi must have length {self.dA * self.dB}, got {psi.shape[0]}")
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "psi", psi)

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        _check_unitary(self.U, tol, "U")
        _check_unitary(self.V, tol, "V")
        _check_unit(self.psi, tol)


@dataclass(frozen=True, eq=False)
class CommutingStrategy:
    """Commuting-model strategy on one space C^d.

    Blocks of ``U`` must commute entrywise with blocks of ``V``; for unitary
    big matrices this extends automatically to their adjoints.
    """

    n: int
    d: int
    U: np.ndarray
    V: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ShapeError("n and d must be >= 1")
        U = _freeze(self.U)
        V = _freeze(self.V)
        psi = _freeze(np.asarray(self.psi, dtype=complex).reshape(-1))
        if U.shape != (self.n * self.d,) * 2 or V.shape != (self.n * self.d,) * 2:
            raise ShapeError(f"U and V must be {self.n * self.d} x {self.n * self.d}")
        if psi.shape != (self.d,):
            raise ShapeError(f"psi must have length {self.d}, got {psi.shape[0]}")
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "psi", psi)

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        _check_unitary(self.U, tol, "U")
        _check_unitary(self.V, tol, "V")
        _check_unit(self.psi, tol)
        violation = check_commuting(self)
        if violation > tol:
            raise CommutationError(
                f"blocks do not commute: max violation {violation:.3e} > {tol:.1e}"
            )


Strategy = TensorStrategy | CommutingStrategy


@dataclass(frozen=True, eq=False)
class Correlation:
    """The n^2 x n^2 matrix of strategy inner products."""

    n: int
    X: np.ndarray

    def __post_init__(self):
        X = _freeze(self.X)
        if X.shape != (self.n * self.n,) * 2:
            raise ShapeError(f"correlation must be {self.n ** 2} x {self.n ** 2}, got {X.shape}")
        object.__setattr__(self, "X", X)


def _check_unitary(A: np.ndarray, tol: float, name: str) -> None:
    defect = float(np.max(np.abs(A.conj().T @ A - np.eye(A.shape[0]))))
    if defect > tol:
        raise ValidationError(f"{name} is not unitary: max |A*A - I| = {defect:.3e}")


def _check_unit(psi: np.ndarray, tol: float) -> None:
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1) > tol:
        raise ValidationError(f"state norm {norm:.12g} is not 1")


def correlation_tensor(s: TensorStrategy, tol: float = DEFAULT_TOL) -> Correlation:
    """Correlation ``X[(i, j), (k, l)] = <(U_ij (x) V_kl) psi, psi>``."""
    s.validate(tol)
    U4 = to_blocks(s.U, s.n)
    V4 = to_blocks(s.V, s.n)
    Psi = s.psi.reshape(s.dA, s.dB)
    X4 = np.einsum("ab,ijac,klbd,cd->ikjl", Psi.conj(), U4, V4, Psi, optimize=True)
    return Correlation(n=s.n, X=X4.reshape(s.n * s.n, s.n * s.n))


def correlation_commuting(s: CommutingStrategy, tol: float = DEFAULT_TOL) -> Correlation:
    """Correlation ``X[(i, j), (k, l)] = <U_ij V_kl psi, psi>``."""
    s.validate(tol)
    U4 = to_blocks(s.U, s.n)
    V4 = to_blocks(s.V, s.n)
    X4 = np.einsum("a,ijab,klbc,c->ikjl", s.psi.conj(), U4, V4, s.psi, optimize=True)
    return Correlation(n=s.n, X=X4.reshape(s.n * s.n, s.n * s.n))


def correlation_of(s: Strategy, tol: float = DEFAULT_TOL) -> Correlation:
    """Dispatch to the model-appropriate correlation map."""
    if isinstance(s, TensorStrategy):
        return correlation_tensor(s, tol)
    if isinstance(s, CommutingStrategy):
        return correlation_commuting(s, tol)
    raise TypeError(f"not a strategy: {type(s).__name__}")


def check_commuting(s: CommutingStrategy) -> float:
    """Max entrywise violation of ``U_ij V_kl = V_kl U_ij`` over all blocks."""
    U4 = to_blocks(s.U, s.n)
    V4 = to_blocks(s.V, s.n)
    UV = np.einsum("ijab,klbc->ijklac", U4, V4, optimize=True)
    VU = np.einsum("klab,ijbc->ijklac", V4, U4, optimize=True)
    return float(np.max(np.abs(UV - VU)))


def bias_trace(game: QuantumXorGame, corr: Correlation) -> complex:
    """Strategy value ``Tr(M @ X)`` (complex in general)."""
    if game.n != corr.n:
        raise ShapeError(f"game size {game.n} does not match correlation size {corr.n}")
    return complex(np.trace(game.M @ corr.X))


def bias_direct(game: QuantumXorGame, s: TensorStrategy, tol: float = DEFAULT_TOL) -> complex:
    """Strategy value computed from the inflated game operator.

    Builds the full block operator with ``((i, k), (j, l))`` block
    ``U_ij (x) V_kl``, multiplies by ``M (x) I``, traces out the game
    register, and evaluates on the state.  Agrees with
    ``bias_trace(game, correlation_tensor(s))``; the two paths are kept
    independent as a cross-check.
    """
    s.validate(tol)
    if game.n != s.n:
        raise ShapeError(f"game size {game.n} does not match strategy size {s.n}")
    n, dA, dB = s.n, s.dA, s.dB
    d_env = dA * dB
    big = np.kron(s.U, s.V)
    big = (
        big.reshape(n, dA, n, dB, n, dA, n, dB)
        .transpose(0, 2, 1, 3, 4, 6, 5, 7)
        .reshape(n * n * d_env, n * n * d_env)
    )
    inflated = np.kron(game.M, np.eye(d_env))
    collapsed = partial_trace_game(big @ inflated, n * n, d_env)
    return complex(np.vdot(s.psi, collapsed @ s.psi))


def success_probability(bias: float, tol: float = DEFAULT_TOL) -> float:
    """Winning probability ``(1 + bias) / 2`` for a real bias in [-1, 1]."""
    b = float(bias)
    if b < -1 - tol or b > 1 + tol:
        raise ValidationError(f"bias {b} outside [-1, 1]")
    return (1 + min(max(b, -1.0), 1.0)) / 2


def random_tensor_strategy(n: int, dA: int, dB: int, seed) -> TensorStrategy:
    """Haar-random unitaries and a uniformly random state, seeded."""
    rng = np.random.default_rng(seed)
    return TensorStrategy(
        n=n,
        dA=dA,
        dB=dB,
        U=haar_from_rng(n * dA, rng),
        V=haar_from_rng(n * dB, rng),
        psi=unit_vector_from_rng(dA * dB, rng),
    )


def random_commuting_strategy(n: int, dA: int, dB: int, seed) -> CommutingStrategy:
    """Random commuting strategy with product-structured blocks.

    Alice blocks act as ``A_ij (x) I`` and Bob blocks as ``I (x) B_kl`` on
    C^(dA dB), so the commutation is exact by construction.
    """
    rng = np.random.default_rng(seed)
    A = haar_from_rng(n * dA, rng)
    B = haar_from_rng(n * dB, rng)
    U = np.kron(A, np.eye(dB))
    B4 = to_blocks(B, n)
    V4 = np.einsum("klbd,ac->klabcd", B4, np.eye(dA)).reshape(n, n, dA * dB, dA * dB)
    return CommutingStrategy(
        n=n,
        d=dA * dB,
        U=U,
        V=from_blocks(V4),
        psi=unit_vector_from_rng(dA * dB, rng),
    )


def scale_by_phase(s: Strategy, lam: complex, tol: float = DEFAULT_TOL) -> Strategy:
    """Multiply Alice's unitary by a unit-modulus scalar; X becomes ``lam X``."""
    lam = complex(lam)
    if abs(abs(lam) - 1) > tol:
        raise ValidationError(f"phase must have modulus 1, got |lam| = {abs(lam):.12g}")
    return replace(s, U=lam * np.asarray(s.U))


def phase_adjust(s: Strategy, game: QuantumXorGame, tol: float = DEFAULT_TOL) -> Strategy:
    """Rotate Alice's unitary so the bias against ``game`` is real and >= 0.

    Uses ``lam = conj(b) / |b|``; when the bias vanishes the strategy is
    returned unchanged.
    """
    b = bias_trace(game, correlation_of(s, tol))
    if abs(b) == 0.0:
        return s
    return scale_by_phase(s, b.conjugate() / abs(b), tol)


def adjoint_strategy(s: Strategy) -> Strategy:
    """Replace ``U`` and ``V`` by their adjoints; the correlation becomes X*."""
    return replace(s, U=np.asarray(s.U).conj().T, V=np.asarray(s.V).conj().T)


def _block_direct_sum(A1: np.ndarray, A2: np.ndarray, n: int) -> np.ndarray:
    """Blockwise direct sum: block (i, j) of the result is ``A1_ij (+) A2_ij``."""
    b1 = to_blocks(A1, n)
    b2 = to_blocks(A2, n)
    d1, d2 = b1.shape[2], b2.shape[2]
    out = np.zeros((n, n, d1 + d2, d1 + d2), dtype=complex)
    out[:, :, :d1, :d1] = b1
    out[:, :, d1:, d1:] = b2
    return from_blocks(out)


def convex_combine(s1: Strategy, s2: Strategy, lam: float) -> Strategy:
    """Realize ``lam X1 + (1 - lam) X2`` by blockwise direct sums.

    The combined state puts weight ``sqrt(lam)`` on the first summand and
    ``sqrt(1 - lam)`` on the second, embedded so cross components vanish.
    """
    if type(s1) is not type(s2):
        raise ValidationError("strategies must be of the same model")
    if s1.n != s2.n:
        raise ShapeError(f"game sizes differ: {s1.n} vs {s2.n}")
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f"weight must lie in [0, 1], got {lam}")
    a, b = np.sqrt(lam), np.sqrt(1 - lam)
    U = _block_direct_sum(s1.U, s2.U, s1.n)
    V = _block_direct_sum(s1.V, s2.V, s1.n)
    if isinstance(s1, TensorStrategy):
        Psi = np.zeros((s1.dA + s2.dA, s1.dB + s2.dB), dtype=complex)
        Psi[: s1.dA, : s1.dB] = a * s1.psi.reshape(s1.dA, s1.dB)
        Psi[s1.dA :, s1.dB :] = b * s2.psi.reshape(s2.dA, s2.dB)
        return TensorStrategy(
            n=s1.n, dA=s1.dA + s2.dA, dB=s1.dB + s2.dB, U=U, V=V, psi=Psi.reshape(-1)
        )
    psi = np.concatenate([a * s1.psi, b * s2.psi])
    return CommutingStrategy(n=s1.n, d=s1.d + s2.d, U=U, V=V, psi=psi)


def is_observable_strategy(s: Strategy, tol: float = DEFAULT_TOL) -> bool:
    """True iff both big matrices are self-adjoint (observables)."""
    U = np.asarray(s.U)
    V = np.asarray(s.V)
    defect = max(float(np.max(np.abs(U - U.conj().T))), float(np.max(np.abs(V - V.conj().T))))
    return defect <= tol


# -- JSON wire format ---------------------------------------------------------
#
# {"model": "tensor"|"commuting", "n": int,
#  "dA": int, "dB": int            (tensor)   |   "d": int   (commuting),
#  "U": [[[re, im], ...], ...], "V": ..., "psi": [[re, im], ...]}


def strategy_to_dict(s: Strategy) -> dict:
    data = {
        "model": "tensor" if isinstance(s, TensorStrategy) else "commuting",
        "n": s.n,
        "U": jsonio.matrix_to_pairs(s.U),
        "V": jsonio.matrix_to_pairs(s.V),
        "psi": jsonio.vector_to_pairs(s.psi),
    }
    if isinstance(s, TensorStrategy):
        data["dA"] = s.dA
        data["dB"] = s.dB
    else:
        data["d"] = s.d
    return data


def strategy_from_dict(data: dict) -> Strategy:
    model = jsonio.require_key(data, "model", "strategy")
    n = jsonio.require_key(data, "n", "strategy")
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError(f"strategy: 'n' must be an integer, got {n!r}")
    U = jsonio.pairs_to_matrix(jsonio.require_key(data, "U", "strategy"), "strategy U")
    V = jsonio.pairs_to_matrix(jsonio.require_key(data, "V", "strategy"), "strategy V")
    psi = jsonio.pairs_to_vector(jsonio.require_key(data, "psi", "strategy"), "strategy psi")
    try:
        if model == "tensor":
            dA = jsonio.require_key(data, "dA", "tensor strategy")
            dB = jsonio.require_key(data, "dB", "tensor strategy")
            return TensorStrategy(n=n, dA=dA, dB=dB, U=U, V=V, psi=psi)
        if model == "commuting":
            d = jsonio.require_key(data, "d", "commuting strategy")
            return CommutingStrategy(n=n, d=d, U=U, V=V, psi=psi)
    except ShapeError as exc:
        raise ParseError(f"strategy: {exc}") from exc
    raise ParseError(f"strategy: unknown model {model!r}")


def load_strategy(path) -> Strategy:
    return strategy_from_dict(jsonio.load_json(path))


def save_strategy(s: Strategy, path) -> None:
    jsonio.dump_json(strategy_to_dict(s), path)
