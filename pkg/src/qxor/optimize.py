"""See-saw maximization of ``Re Tr(M X)`` over tensor strategies.

The bias is linear in each of Alice's unitary, Bob's unitary, and (after
collapsing the game register) quadratic in the state, so each of the three
coordinates has a closed-form maximizer: a polar factor for the players and
a top eigenvector for the state.  Sweeping them in a fixed order yields a
nondecreasing bias sequence; restarts from independent random strategies
mitigate local optima.  Reported values are certified lower bounds on the
entanglement bias (equivalently its closure value): every best bias is
re-derivable by evaluating the returned strategy.

Trace CSV contract: columns ``restart,sweep,stage,bias_re,bias_im`` with
stages ``init``/``alice``/``bob``/``state``, followed by one summary row
``summary,<best restart>,best,<best bias>,0.0``.
"""

from __future__ import annotations

import csv
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from time import perf_counter

import numpy as np

from .errors import ValidationError
from .game import QuantumXorGame
from .linalg import DEFAULT_TOL, from_blocks, polar_factor, to_blocks
from .strategy import (
    TensorStrategy,
    bias_trace,
    correlation_tensor,
    phase_adjust,
    random_tensor_strategy,
)


@dataclass(frozen=True)
class SeesawConfig:
    """Knobs for one optimization run."""

    dA: int
    dB: int
    restarts: int = 50
    max_sweeps: int = 500
    tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.dA < 1 or self.dB < 1:
            raise ValidationError("local dimensions must be >= 1")
        if self.restarts < 1 or self.max_sweeps < 1:
            raise ValidationError("restarts and max_sweeps must be >= 1")
        if not self.tol > 0:
            raise ValidationError("tol must be positive")


@dataclass(frozen=True)
class TraceRecord:
    sweep: int
    stage: str
    bias: complex


@dataclass
class OptTrace:
    """Per-restart record: the bias after every update, plus the final state."""

    restart: int
    records: list[TraceRecord]
    final_strategy: TensorStrategy
    final_bias: float
    sweeps: int
    converged: bool
    wall_time: float


@dataclass(frozen=True)
class SeesawResult:
    best_bias: float
    best_strategy: TensorStrategy
    traces: tuple[OptTrace, ...]


@dataclass(frozen=True)
class LadderEntry:
    dim: int
    best_bias: float


def _game_blocks(game: QuantumXorGame) -> np.ndarray:
    n = game.n
    return np.asarray(game.M, dtype=complex).reshape(n, n, n, n)


def assemble_update_matrix(game: QuantumXorGame, s: TensorStrategy, fixed_side: str) -> np.ndarray:
    """Linear form of the bias in the free player's unitary.

    Returns ``A`` with ``Tr(M X(U)) = sum_{r,c} U[r, c] A[c, r]`` when Bob is
    fixed (and the analogous identity in ``V`` when Alice is fixed), so the
    bias is ``Tr(U @ A)`` and the maximizing unitary is the polar factor of
    ``A``.
    """
    if fixed_side not in ("alice", "bob"):
        raise ValidationError(f"fixed_side must be 'alice' or 'bob', got {fixed_side!r}")
    M4 = _game_blocks(game)
    Psi = s.psi.reshape(s.dA, s.dB)
    U4 = to_blocks(s.U, s.n)
    V4 = to_blocks(s.V, s.n)
    if fixed_side == "bob":
        A4 = np.einsum("ikjl,ab,lkbd,cd->ijca", M4, Psi.conj(), V4, Psi, optimize=True)
    else:
        A4 = np.einsum("ikjl,ab,jiac,cd->kldb", M4, Psi.conj(), U4, Psi, optimize=True)
    return from_blocks(A4)


def update_player(game: QuantumXorGame, s: TensorStrategy, side: str) -> TensorStrategy:
    """Closed-form update of one player's unitary; ``Re`` bias cannot drop."""
    if side not in ("alice", "bob"):
        raise ValidationError(f"side must be 'alice' or 'bob', got {side!r}")
    target = assemble_update_matrix(game, s, fixed_side="bob" if side == "alice" else "alice")
    best = polar_factor(target)
    return replace(s, U=best) if side == "alice" else replace(s, V=best)


def collapsed_game_operator(game: QuantumXorGame, s: TensorStrategy) -> np.ndarray:
    """The ``dA dB`` operator ``K`` with ``<K psi, psi> = Tr(M X)``."""
    M4 = _game_blocks(game)
    U4 = to_blocks(s.U, s.n)
    V4 = to_blocks(s.V, s.n)
    K4 = np.einsum("pqik,ipac,kqbd->abcd", M4, U4, V4, optimize=True)
    d = s.dA * s.dB
    return K4.reshape(d, d)


def update_state(game: QuantumXorGame, s: TensorStrategy) -> TensorStrategy:
    """Replace the state by the top eigenvector of the collapsed operator.

    Uses the Hermitian part of ``K``, so ``Re`` of the bias cannot decrease.
    Eigenvalue ties are broken by the eigendecomposition's output order.
    """
    K = collapsed_game_operator(game, s)
    H = (K + K.conj().T) / 2
    _, vecs = np.linalg.eigh(H)
    return replace(s, psi=vecs[:, -1])


def _current_bias(game: QuantumXorGame, s: TensorStrategy) -> complex:
    return bias_trace(game, correlation_tensor(s))


def _run_restart(game: QuantumXorGame, config: SeesawConfig, restart: int) -> OptTrace:
    start = perf_counter()
    s = random_tensor_strategy(game.n, config.dA, config.dB, seed=[config.seed, restart])
    records = [TraceRecord(0, "init", _current_bias(game, s))]
    converged = False
    sweeps = 0
    for sweep in range(1, config.max_sweeps + 1):
        sweeps = sweep
        s = phase_adjust(s, game)
        before = abs(records[-1].bias)
        s = update_player(game, s, "alice")
        records.append(TraceRecord(sweep, "alice", _current_bias(game, s)))
        s = update_player(game, s, "bob")
        records.append(TraceRecord(sweep, "bob", _current_bias(game, s)))
        s = update_state(game, s)
        after = _current_bias(game, s)
        records.append(TraceRecord(sweep, "state", after))
        if after.real - before < config.tol:
            converged = True
            break
    s = phase_adjust(s, game)
    final = _current_bias(game, s).real
    return OptTrace(
        restart=restart,
        records=records,
        final_strategy=s,
        final_bias=final,
        sweeps=sweeps,
        converged=converged,
        wall_time=perf_counter() - start,
    )


def seesaw(game: QuantumXorGame, config: SeesawConfig, max_workers: int = 1) -> SeesawResult:
    """Alternating maximization with restarts.

    Each restart draws its starting strategy from a stream derived from
    ``(seed, restart)``, so serial and parallel runs produce identical
    results.  The returned strategy is phase-adjusted: its bias is real,
    nonnegative, and equals ``best_bias``.
    """
    indices = range(config.restarts)
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            traces = list(pool.map(lambda r: _run_restart(game, config, r), indices))
    else:
        traces = [_run_restart(game, config, r) for r in indices]
    best = max(traces, key=lambda t: t.final_bias)
    return SeesawResult(best_bias=best.final_bias, best_strategy=best.final_strategy, traces=tuple(traces))


def dimension_ladder(game: QuantumXorGame, dims, config: SeesawConfig, max_workers: int = 1) -> list[LadderEntry]:
    """Run the see-saw at each square dimension ``dA = dB = d``.

    Reported biases should be nondecreasing in ``d``; a drop is reported as a
    warning (it indicates under-restarting), never an error.
    """
    dims = [int(d) for d in dims]
    if not dims:
        raise ValidationError("dimension list is empty")
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValidationError(f"dimension list must be strictly increasing, got {dims}")
    entries = []
    for d in dims:
        result = seesaw(game, replace(config, dA=d, dB=d), max_workers=max_workers)
        entries.append(LadderEntry(dim=d, best_bias=result.best_bias))
    for prev, cur in zip(entries, entries[1:]):
        if cur.best_bias < prev.best_bias - 1e-9:
            warnings.warn(
                f"bias at d={cur.dim} ({cur.best_bias:.9f}) is below d={prev.dim} "
                f"({prev.best_bias:.9f}); consider more restarts",
                stacklevel=2,
            )
    return entries


def monotonicity_violation(trace: OptTrace) -> float:
    """Largest drop of ``Re`` bias between consecutive records (0 if none)."""
    values = [rec.bias.real for rec in trace.records]
    drops = [prev - cur for prev, cur in zip(values, values[1:])]
    return max(drops, default=0.0)


def write_trace_csv(result: SeesawResult, path) -> None:
    """Emit the documented ``restart,sweep,stage,bias_re,bias_im`` trace."""
    best_restart = max(result.traces, key=lambda t: t.final_bias).restart
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["restart", "sweep", "stage", "bias_re", "bias_im"])
        for trace in result.traces:
            for rec in trace.records:
                writer.writerow(
                    [trace.restart, rec.sweep, rec.stage, repr(rec.bias.real), repr(rec.bias.imag)]
                )
        writer.writerow(["summary", best_restart, "best", repr(result.best_bias), repr(0.0)])


def write_ladder_csv(entries: list[LadderEntry], path) -> None:
    """Ladder table CSV: columns ``dim,best_bias``."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dim", "best_bias"])
        for entry in entries:
            writer.writerow([entry.dim, repr(entry.best_bias)])
