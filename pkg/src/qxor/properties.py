"""Registered property suite behind ``qxor verify``.

Each property draws random instances from its own seeded stream, measures
its worst-case violation, and compares it against a fixed threshold.  The
suite covers the library end to end: the linear-algebra kernels, game
construction, correlation identities, every dilation, and the optimizer's
monotonicity/soundness guarantees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import dilation as _dilation
from .dilation import (
    embed_self_adjoint,
    halmos_dilation,
    observable_dilation_commuting,
    observable_dilation_tensor,
    symmetrize_strategy,
)
from .game import Outcome, OutcomeSpec, QuantumXorGame, game_from_classical_xor, game_from_outcomes
from .linalg import (
    canonical_shuffle,
    haar_from_rng,
    hermitian_sqrt,
    operator_norm,
    partial_trace_game,
    polar_factor,
    trace_norm,
)
from .optimize import SeesawConfig, monotonicity_violation, seesaw
from .strategy import (
    adjoint_strategy,
    bias_direct,
    bias_trace,
    check_commuting,
    convex_combine,
    correlation_commuting,
    correlation_of,
    correlation_tensor,
    phase_adjust,
    random_commuting_strategy,
    random_tensor_strategy,
    scale_by_phase,
)


@dataclass(frozen=True)
class VerifyContext:
    n: int = 2
    max_dim: int = 3
    trials: int = 100
    seed: int = 42


@dataclass(frozen=True)
class PropertyResult:
    name: str
    worst: float
    threshold: float
    trials: int

    @property
    def passed(self) -> bool:
        return self.worst <= self.threshold


def random_game(n: int, rng: np.random.Generator, strict: bool = True) -> QuantumXorGame:
    """Random game from a Haar basis, a random simplex point, and random bits."""
    basis = haar_from_rng(n * n, rng)
    probs = rng.dirichlet(np.ones(n * n))
    bits = rng.integers(0, 2, size=n * n)
    outcomes = tuple(
        Outcome(state=basis[:, i], p=float(probs[i]), c=int(bits[i])) for i in range(n * n)
    )
    game = game_from_outcomes(OutcomeSpec(n=n, outcomes=outcomes))
    if strict:
        return game
    scale = rng.uniform(0.2, 1.0)
    return QuantumXorGame(n=n, M=scale * game.M, strict=False)


def _dims(ctx: VerifyContext, rng: np.random.Generator) -> tuple[int, int]:
    return int(rng.integers(1, ctx.max_dim + 1)), int(rng.integers(1, ctx.max_dim + 1))


def _seeded(rng: np.random.Generator):
    return int(rng.integers(0, 2**31))


def _prop_polar_factor(ctx, rng):
    worst = 0.0
    for _ in range(ctx.trials):
        dim = int(rng.integers(1, 2 * ctx.max_dim + 1))
        A = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        U = polar_factor(A)
        value = np.trace(U @ A).real
        worst = max(worst, abs(value - trace_norm(A)))
        for _ in range(20):
            Q = haar_from_rng(dim, rng)
            worst = max(worst, np.trace(Q @ A).real - value)
    return worst


def _prop_hermitian_sqrt(ctx, rng):
    worst = 0.0
    for _ in range(ctx.trials):
        dim = int(rng.integers(1, 17))
        R = haar_from_rng(dim, rng)
        P = (R * rng.uniform(0.0, 1.0, size=dim)) @ R.conj().T
        P = (P + P.conj().T) / 2
        Q = hermitian_sqrt(P)
        worst = max(worst, float(np.max(np.abs(Q @ Q - P))))
    return worst


def _prop_partial_trace(ctx, rng):
    worst = 0.0
    for _ in range(ctx.trials):
        n_game = int(rng.integers(1, 4))
        d_env = int(rng.integers(1, 4))
        dim = n_game * d_env
        O1 = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        O2 = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        lhs = partial_trace_game(a * O1 + b * O2, n_game, d_env)
        rhs = a * partial_trace_game(O1, n_game, d_env) + b * partial_trace_game(O2, n_game, d_env)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        worst = max(worst, abs(np.trace(partial_trace_game(O1, n_game, d_env)) - np.trace(O1)))
    return worst


def _prop_canonical_shuffle(ctx, rng):
    worst = 0.0
    for _ in range(ctx.trials):
        outer, inner, block = (int(rng.integers(1, 4)) for _ in range(3))
        dim = outer * inner * block
        A = haar_from_rng(dim, rng)
        shuffled = canonical_shuffle(A, outer, inner, block)
        worst = max(worst, float(np.max(np.abs(shuffled.conj().T @ shuffled - np.eye(dim)))))
        H = A + A.conj().T
        sh = canonical_shuffle(H, outer, inner, block)
        worst = max(worst, float(np.max(np.abs(sh - sh.conj().T))))
        back = canonical_shuffle(shuffled, inner, outer, block)
        worst = max(worst, float(np.max(np.abs(back - A))))
    return worst


def _prop_game_trace_norm(ctx, rng):
    worst = 0.0
    for _ in range(ctx.trials):
        game = random_game(ctx.n, rng)
        worst = max(worst, abs(trace_norm(game.M) - 1.0))
    return worst


def _prop_game_permutation(ctx, rng):
    worst = 0.0
    for _ in range(max(1, ctx.trials // 4)):
        basis = haar_from_rng(ctx.n**2, rng)
        probs = rng.dirichlet(np.ones(ctx.n**2))
        bits = rng.integers(0, 2, size=ctx.n**2)
        outcomes = [Outcome(basis[:, i], float(probs[i]), int(bits[i])) for i in range(ctx.n**2)]
        M1 = game_from_outcomes(OutcomeSpec(ctx.n, tuple(outcomes))).M
        perm = rng.permutation(len(outcomes))
        M2 = game_from_outcomes(OutcomeSpec(ctx.n, tuple(outcomes[i] for i in perm))).M
        worst = max(worst, float(np.max(np.abs(M1 - M2))))
    return worst


def _prop_classical_diagonal(ctx, rng):
    worst = 0.0
    for _ in range(ctx.trials):
        size = int(rng.integers(1, 4))
        R = rng.uniform(-1, 1, size=(size, size))
        game = game_from_classical_xor(R, normalize=True)
        off = game.M - np.diag(np.diagonal(game.M))
        worst = max(worst, float(np.max(np.abs(off))))
    return worst


def _prop_correlation_bounds(ctx, rng):
    worst = 0.0
    for _ in range(ctx.trials):
        dA, dB = _dims(ctx, rng)
        s = random_tensor_strategy(ctx.n, dA, dB, _seeded(rng))
        X = correlation_tensor(s).X
        worst = max(worst, float(np.max(np.abs(X))) - 1.0, operator_norm(X) - 1.0)
    return worst


def _prop_adjoint_correlation(ctx, rng):
    worst = 0.0
    for _ in range(ctx.trials):
        dA, dB = _dims(ctx, rng)
        s = random_tensor_strategy(ctx.n, dA, dB, _seeded(rng))
        X = correlation_tensor(s).X
        Xa = correlation_tensor(adjoint_strategy(s)).X
        worst = max(worst, float(np.max(np.abs(Xa - X.conj().T))))
    return worst


def _prop_phase_scaling(ctx, rng):
    worst = 0.0
    for _ in range(ctx.trials):
        dA, dB = _dims(ctx, rng)
        s = random_tensor_strategy(ctx.n, dA, dB, _seeded(rng))
        lam = np.exp(1j * rng.uniform(0, 2 * np.pi))
        X = correlation_tensor(s).X
        Xs = correlation_tensor(scale_by_phase(s, lam)).X
        worst = max(worst, float(np.max(np.abs(Xs - lam * X))))
    return worst


def _prop_convex_combination(ctx, rng):
    worst = 0.0
    for _ in range(max(1, ctx.trials // 2)):
        dA, dB = _dims(ctx, rng)
        s1 = random_tensor_strategy(ctx.n, dA, dB, _seeded(rng))
        s2 = random_tensor_strategy(ctx.n, dA, dB, _seeded(rng))
        lam = float(rng.uniform(0, 1))
        X = correlation_tensor(convex_combine(s1, s2, lam)).X
        expect = lam * correlation_tensor(s1).X + (1 - lam) * correlation_tensor(s2).X
        worst = max(worst, float(np.max(np.abs(X - expect))))
    return worst


def _prop_bias_dual_paths(ctx, rng):
    worst = 0.0
    for _ in range(ctx.trials):
        dA, dB = _dims(ctx, rng)
        game = random_game(ctx.n, rng)
        s = random_tensor_strategy(ctx.n, dA, dB, _seeded(rng))
        b1 = bias_trace(game, correlation_tensor(s))
        b2 = bias_direct(game, s)
        worst = max(worst, abs(b1 - b2))
    return worst


def _prop_commuting_product(ctx, rng):
    worst = 0.0
    for _ in range(ctx.trials):
        dA, dB = _dims(ctx, rng)
        seed = _seeded(rng)
        sc = random_commuting_strategy(ctx.n, dA, dB, seed)
        st = random_tensor_strategy(ctx.n, dA, dB, seed)  # same U, V, psi stream
        Xc = correlation_commuting(sc).X
        Xt = correlation_tensor(st).X
        worst = max(worst, float(np.max(np.abs(Xc - Xt))))
    return worst


def _prop_bias_bound(ctx, rng):
    worst = 0.0
    for _ in range(ctx.trials):
        dA, dB = _dims(ctx, rng)
        game = random_game(ctx.n, rng, strict=bool(rng.integers(0, 2)))
        s = random_tensor_strategy(ctx.n, dA, dB, _seeded(rng))
        worst = max(worst, abs(bias_trace(game, correlation_tensor(s))) - 1.0)
    return worst


def _observable_defect(s) -> float:
    U, V = np.asarray(s.U), np.asarray(s.V)
    defect = max(float(np.max(np.abs(U - U.conj().T))), float(np.max(np.abs(V - V.conj().T))))
    eye_u = np.eye(U.shape[0])
    eye_v = np.eye(V.shape[0])
    defect = max(defect, float(np.max(np.abs(U.conj().T @ U - eye_u))))
    return max(defect, float(np.max(np.abs(V.conj().T @ V - eye_v))))


def _prop_observable_dilation_unitary(ctx, rng):
    worst = 0.0
    for _ in range(max(1, ctx.trials // 2)):
        dA, dB = _dims(ctx, rng)
        st = random_tensor_strategy(ctx.n, dA, dB, _seeded(rng))
        worst = max(worst, _observable_defect(observable_dilation_tensor(st)))
        sc = random_commuting_strategy(ctx.n, min(dA, 2), min(dB, 2), _seeded(rng))
        worst = max(worst, _observable_defect(observable_dilation_commuting(sc)))
    return worst


def _prop_observable_dilation_correlation(ctx, rng):
    worst = 0.0
    for _ in range(max(1, ctx.trials // 2)):
        dA, dB = _dims(ctx, rng)
        st = random_tensor_strategy(ctx.n, dA, dB, _seeded(rng))
        X = correlation_tensor(st).X
        Xd = correlation_tensor(observable_dilation_tensor(st)).X
        worst = max(worst, float(np.max(np.abs(Xd - (X + X.conj().T) / 2))))
        sc = random_commuting_strategy(ctx.n, min(dA, 2), min(dB, 2), _seeded(rng))
        Xc = correlation_commuting(sc).X
        Xcd = correlation_commuting(observable_dilation_commuting(sc)).X
        worst = max(worst, float(np.max(np.abs(Xcd - (Xc + Xc.conj().T) / 2))))
    return worst


def _prop_observable_dilation_commutation(ctx, rng):
    worst = 0.0
    for _ in range(max(1, ctx.trials // 2)):
        dA, dB = _dims(ctx, rng)
        sc = random_commuting_strategy(ctx.n, min(dA, 2), min(dB, 2), _seeded(rng))
        worst = max(worst, check_commuting(observable_dilation_commuting(sc)))
    return worst


def _prop_symmetrize_bias(ctx, rng):
    worst = 0.0
    for _ in range(ctx.trials):
        dA, dB = _dims(ctx, rng)
        game = random_game(ctx.n, rng)
        s = random_tensor_strategy(ctx.n, dA, dB, _seeded(rng))
        b = bias_trace(game, correlation_tensor(s))
        b_sym = bias_trace(game, correlation_tensor(symmetrize_strategy(s)))
        worst = max(worst, abs(b_sym - b.real))
        b_opt = bias_trace(game, correlation_tensor(symmetrize_strategy(phase_adjust(s, game))))
        worst = max(worst, abs(b_opt - abs(b)))
    return worst


def _prop_embedding_pattern(ctx, rng):
    worst = 0.0
    for _ in range(max(1, ctx.trials // 2)):
        dA, dB = _dims(ctx, rng)
        s = random_tensor_strategy(ctx.n, dA, dB, _seeded(rng))
        _, witness = embed_self_adjoint(s)
        worst = max(worst, witness.off_pattern())
        W = witness.embedded.X
        worst = max(worst, float(np.max(np.abs(W - W.conj().T))))
        worst = max(worst, float(np.max(np.abs(witness.corner() - witness.original.X))))
    return worst


def _prop_roundtrip_tensor(ctx, rng):
    worst = 0.0
    for _ in range(max(2, ctx.trials // 4)):
        dA, dB = _dims(ctx, rng)
        s = random_tensor_strategy(ctx.n, dA, dB, _seeded(rng))
        embedded, _ = embed_self_adjoint(s)
        recovered = _dilation.extract_from_embedding_tensor(embedded)
        X = correlation_tensor(s).X
        Xr = correlation_tensor(recovered).X
        worst = max(worst, float(np.max(np.abs(Xr - X))))
    return worst


def _prop_roundtrip_commuting(ctx, rng):
    worst = 0.0
    for _ in range(max(2, ctx.trials // 4)):
        dA = int(rng.integers(1, 3))
        dB = int(rng.integers(1, 3))
        s = random_commuting_strategy(ctx.n, dA, dB, _seeded(rng))
        embedded, _ = embed_self_adjoint(s)
        recovered = _dilation.extract_from_embedding_commuting(embedded)
        X = correlation_commuting(s).X
        Xr = correlation_commuting(recovered).X
        worst = max(worst, float(np.max(np.abs(Xr - X))))
        worst = max(worst, check_commuting(recovered))
    return worst


def _prop_halmos(ctx, rng):
    worst = 0.0
    for trial in range(ctx.trials):
        n = ctx.n
        d = int(rng.integers(1, ctx.max_dim + 1))
        dim = n * d
        if trial % 3 == 0:
            S = haar_from_rng(dim, rng)  # unitary contraction: defects must vanish
        else:
            A = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            S = A * (rng.uniform(0.1, 1.0) / operator_norm(A))
        U = halmos_dilation(S, n, d)
        worst = max(worst, float(np.max(np.abs(U.conj().T @ U - np.eye(2 * dim)))))
        corner = U.reshape(n, 2 * d, n, 2 * d)[:, :d, :, :d].reshape(dim, dim)
        worst = max(worst, float(np.max(np.abs(corner - S))))
    return worst


def _seesaw_result(ctx):
    game = game_from_classical_xor(np.array([[1.0, 1.0], [1.0, -1.0]]) / 4.0)
    config = SeesawConfig(dA=2, dB=2, restarts=4, max_sweeps=60, tol=1e-10, seed=ctx.seed)
    return game, seesaw(game, config)


def _prop_seesaw_monotone(ctx, rng):
    _, result = _seesaw_result(ctx)
    return max(monotonicity_violation(t) for t in result.traces)


def _prop_seesaw_soundness(ctx, rng):
    game, result = _seesaw_result(ctx)
    b = bias_trace(game, correlation_of(result.best_strategy))
    return max(abs(b.real - result.best_bias), abs(b.imag))


def _prop_seesaw_bound(ctx, rng):
    _, result = _seesaw_result(ctx)
    return result.best_bias - 1.0


REGISTRY: list[tuple[str, float, Callable]] = [
    ("polar-factor-optimality", 1e-9, _prop_polar_factor),
    ("hermitian-sqrt-square", 1e-10, _prop_hermitian_sqrt),
    ("partial-trace-linear", 1e-12, _prop_partial_trace),
    ("canonical-shuffle-preserves", 1e-12, _prop_canonical_shuffle),
    ("game-trace-norm", 1e-10, _prop_game_trace_norm),
    ("game-outcome-permutation", 1e-10, _prop_game_permutation),
    ("classical-game-diagonal", 1e-12, _prop_classical_diagonal),
    ("correlation-bounds", 1e-9, _prop_correlation_bounds),
    ("adjoint-correlation", 1e-12, _prop_adjoint_correlation),
    ("phase-scaling", 1e-12, _prop_phase_scaling),
    ("convex-combination", 1e-12, _prop_convex_combination),
    ("bias-dual-paths", 1e-10, _prop_bias_dual_paths),
    ("commuting-product-tensor", 1e-12, _prop_commuting_product),
    ("bias-hoelder-bound", 1e-9, _prop_bias_bound),
    ("observable-dilation-unitary", 1e-9, _prop_observable_dilation_unitary),
    ("observable-dilation-correlation", 1e-11, _prop_observable_dilation_correlation),
    ("observable-dilation-commutation", 1e-10, _prop_observable_dilation_commutation),
    ("symmetrize-bias", 1e-10, _prop_symmetrize_bias),
    ("embedding-pattern", 1e-11, _prop_embedding_pattern),
    ("embedding-roundtrip-tensor", 1e-10, _prop_roundtrip_tensor),
    ("embedding-roundtrip-commuting", 1e-9, _prop_roundtrip_commuting),
    ("halmos-dilation-unitary", 1e-9, _prop_halmos),
    ("seesaw-monotone", 1e-12, _prop_seesaw_monotone),
    ("seesaw-soundness", 1e-10, _prop_seesaw_soundness),
    ("seesaw-bound", 1e-9, _prop_seesaw_bound),
]


def run_verify(ctx: VerifyContext) -> list[PropertyResult]:
    """Run every registered property; deterministic for a fixed context."""
    results = []
    for index, (name, threshold, func) in enumerate(REGISTRY):
        rng = np.random.default_rng([ctx.seed, index])
        worst = float(func(ctx, rng))
        results.append(PropertyResult(name=name, worst=worst, threshold=threshold, trials=ctx.trials))
    return results
