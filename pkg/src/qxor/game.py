"""Quantum XOR games and the matrices that define them.

A size-``n`` game is a self-adjoint matrix ``M`` on the n^2-dimensional
question space with trace norm 1 (strict) or at most 1 (non-strict).  Games
can be built from referee data (question states with probabilities and
parity bits), from a classical XOR game table, or validated directly from a
matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jsonio
from .errors import ParseError, ShapeError, ValidationError
from .linalg import as_cmatrix, trace_norm

# User-visible game data is checked more loosely than internal arithmetic.
DATA_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Outcome:
    """One referee outcome: a question state, its probability, and the parity bit."""

    state: np.ndarray
    p: float
    c: int

    def __post_init__(self):
        object.__setattr__(self, "state", np.asarray(self.state, dtype=complex).reshape(-1))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "c", int(self.c))


@dataclass(frozen=True, eq=False)
class OutcomeSpec:
    """Referee data for a size-``n`` game.

    States must be unit vectors in C^(n^2), pairwise orthogonal, with
    probabilities summing to 1.  Fewer than n^2 outcomes are allowed; the
    missing basis states are read as probability zero.
    """

    n: int
    outcomes: tuple[Outcome, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))

    def validate(self, tol: float = DATA_TOL) -> None:
        if self.n < 1:
            raise ValidationError(f"game size must be >= 1, got {self.n}")
        if not self.outcomes:
            raise ValidationError("outcome list is empty")
        dim = self.n * self.n
        for idx, out in enumerate(self.outcomes):
            if out.state.shape != (dim,):
                raise ShapeError(
                    f"outcome {idx}: state has length {out.state.shape[0]}, expected {dim}"
                )
            if out.c not in (0, 1):
                raise ValidationError(f"outcome {idx}: bit must be 0 or 1, got {out.c}")
            if out.p < -tol or out.p > 1 + tol:
                raise ValidationError(f"outcome {idx}: probability {out.p} outside [0, 1]")
            norm = float(np.linalg.norm(out.state))
            if abs(norm - 1) > tol:
                raise ValidationError(f"outcome {idx}: state norm {norm:.12g} is not 1")
        total = sum(out.p for out in self.outcomes)
        if abs(total - 1) > tol:
            raise ValidationError(f"probabilities sum to {total:.12g}, expected 1")
        states = np.array([out.state for out in self.outcomes])
        gram = states @ states.conj().T
        off = gram - np.diag(np.diagonal(gram))
        worst = float(np.max(np.abs(off))) if off.size else 0.0
        if worst > tol:
            raise ValidationError(f"states are not pairwise orthogonal: max overlap {worst:.3e}")


@dataclass(frozen=True, eq=False)
class QuantumXorGame:
    """A validated game: size ``n`` and its self-adjoint matrix ``M``.

    ``strict`` records whether the trace norm is exactly 1 or merely <= 1.
    """

    n: int
    M: np.ndarray
    strict: bool = True

    def __post_init__(self):
        M = np.array(self.M, dtype=complex)
        M.setflags(write=False)
        object.__setattr__(self, "M", M)


def validate_game(M, n: int, strict: bool = True, tol: float = DATA_TOL) -> QuantumXorGame:
    """Check self-adjointness and the trace-norm condition; return the game."""
    M = as_cmatrix(M, "game matrix")
    if n < 1:
        raise ValidationError(f"game size must be >= 1, got {n}")
    if M.shape != (n * n, n * n):
        raise ShapeError(f"game matrix must be {n * n} x {n * n}, got {M.shape}")
    herm = float(np.max(np.abs(M - M.conj().T)))
    if herm > tol:
        raise ValidationError(f"matrix is not self-adjoint: max |M - M*| = {herm:.3e}")
    tn = trace_norm(M)
    if strict:
        if abs(tn - 1) > tol:
            raise ValidationError(f"trace-norm violation: |M|_1 = {tn:.12g}, strict games require 1")
    elif tn > 1 + tol:
        raise ValidationError(f"trace-norm violation: |M|_1 = {tn:.12g} exceeds 1")
    return QuantumXorGame(n=n, M=M, strict=strict)


def game_from_outcomes(spec: OutcomeSpec, tol: float = DATA_TOL) -> QuantumXorGame:
    """Build ``M = sum_i (-1)^c_i p_i phi_i phi_i*`` from referee data."""
    spec.validate(tol)
    dim = spec.n * spec.n
    M = np.zeros((dim, dim), dtype=complex)
    for out in spec.outcomes:
        sign = -1.0 if out.c else 1.0
        M += sign * out.p * np.outer(out.state, out.state.conj())
    return validate_game(M, spec.n, strict=True, tol=tol)


def game_from_classical_xor(R, normalize: bool = False, tol: float = DATA_TOL) -> QuantumXorGame:
    """Embed a classical XOR game table as a quantum XOR game.

    ``R`` is a real square matrix with entries in [-1, 1]; question pair
    ``(s, t)`` is asked with probability ``|R[s, t]|`` and the answers must
    agree iff ``R[s, t] >= 0``.  The resulting matrix is diagonal:
    ``M = sum_{s,t} R[s, t] (e_s e_s*) (x) (e_t e_t*)``.
    """
    R = np.asarray(R, dtype=float)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ShapeError(f"classical game table must be square, got shape {R.shape}")
    if float(np.max(np.abs(R))) > 1 + tol:
        raise ValidationError("table entries must lie in [-1, 1]")
    total = float(np.sum(np.abs(R)))
    if total <= tol:
        raise ValidationError("classical game table is zero")
    if normalize:
        R = R / total
    elif abs(total - 1) > tol:
        raise ValidationError(f"absolute entries sum to {total:.12g}, expected 1 (or pass normalize=True)")
    n = R.shape[0]
    M = np.diag(R.reshape(-1).astype(complex))
    return validate_game(M, n, strict=True, tol=tol)


def chsh_game() -> QuantumXorGame:
    """The CHSH game: uniform questions, answers must agree except on (2, 2)."""
    R = np.array([[1.0, 1.0], [1.0, -1.0]]) / 4.0
    return game_from_classical_xor(R)


# -- JSON wire format ---------------------------------------------------------
#
# {"n": int, "strict": bool, "matrix": [[[re, im], ...], ...]}          (row-major n^2 x n^2)
# {"n": int, "strict": bool, "outcomes": [{"state": [[re, im], ...], "p": float, "c": 0|1}, ...]}
#
# Exactly one of "outcomes"/"matrix" must be present.


def game_to_dict(game: QuantumXorGame) -> dict:
    return {"n": game.n, "strict": game.strict, "matrix": jsonio.matrix_to_pairs(game.M)}


def outcome_spec_to_dict(spec: OutcomeSpec, strict: bool = True) -> dict:
    return {
        "n": spec.n,
        "strict": strict,
        "outcomes": [
            {"state": jsonio.vector_to_pairs(out.state), "p": out.p, "c": out.c}
            for out in spec.outcomes
        ],
    }


def game_from_dict(data: dict, tol: float = DATA_TOL) -> QuantumXorGame:
    n = jsonio.require_key(data, "n", "game")
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError(f"game: 'n' must be an integer, got {n!r}")
    strict = data.get("strict", True)
    if not isinstance(strict, bool):
        raise ParseError(f"game: 'strict' must be a boolean, got {strict!r}")
    has_outcomes = "outcomes" in data
    has_matrix = "matrix" in data
    if has_outcomes == has_matrix:
        raise ParseError("game: exactly one of 'outcomes' or 'matrix' must be present")
    if has_matrix:
        M = jsonio.pairs_to_matrix(data["matrix"], "game matrix")
        return validate_game(M, n, strict=strict, tol=tol)
    raw = data["outcomes"]
    if not isinstance(raw, list) or not raw:
        raise ParseError("game: 'outcomes' must be a non-empty list")
    outcomes = []
    for idx, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise ParseError(f"game: outcome {idx} must be an object")
        state = jsonio.pairs_to_vector(jsonio.require_key(entry, "state", f"outcome {idx}"), f"outcome {idx} state")
        p = jsonio.require_key(entry, "p", f"outcome {idx}")
        c = jsonio.require_key(entry, "c", f"outcome {idx}")
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            raise ParseError(f"outcome {idx}: 'p' must be a number")
        if isinstance(c, bool) or c not in (0, 1):
            raise ParseError(f"outcome {idx}: 'c' must be 0 or 1")
        outcomes.append(Outcome(state=state, p=float(p), c=int(c)))
    game = game_from_outcomes(OutcomeSpec(n=n, outcomes=tuple(outcomes)), tol=tol)
    return QuantumXorGame(n=game.n, M=game.M, strict=strict)


def load_game(path, tol: float = DATA_TOL) -> QuantumXorGame:
    return game_from_dict(jsonio.load_json(path), tol=tol)


def save_game(game: QuantumXorGame, path) -> None:
    jsonio.dump_json(game_to_dict(game), path)
