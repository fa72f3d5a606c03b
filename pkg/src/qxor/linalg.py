"""Dense complex linear algebra shared by every other module.

Conventions
-----------
All matrices are ``numpy.ndarray`` of ``complex128`` in row-major order.
A matrix ``A`` indexed by pairs of pairs ``((i, j), (k, l))`` with
``i, j, k, l in {0, ..., n-1}`` is stored with

    A[(i, j), (k, l)]  ->  A[i * n + k,  j * n + l]

i.e. the row index merges the two "row" labels ``(i, k)`` and the column
index merges ``(j, l)``.  (In 1-based terms: ``row = (i-1) n + k``,
``col = (j-1) n + l``.)  This is the ``numpy.kron`` convention,
``kron(B, C)[i*n + k, j*n + l] == B[i, j] * C[k, l]``, and it makes the
pairing of a game matrix with a correlation literally ``Tr(M @ X)``.

Every tolerance is an explicit argument; the project-wide default for
entrywise comparisons is ``DEFAULT_TOL = 1e-9``.  All functions here are
pure and safe to call concurrently; random sampling is confined to an
explicit seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ShapeError, ValidationError

DEFAULT_TOL = 1e-9


def as_cmatrix(A, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex array and reject non-finite entries."""
    arr = np.asarray(A, dtype=complex)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.size == 0:
        raise ShapeError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def require_square(A: np.ndarray, name: str = "matrix") -> int:
    """Return the side length of ``A``, raising unless it is square."""
    arr = as_cmatrix(A, name)
    rows, cols = arr.shape
    if rows != cols:
        raise ShapeError(f"{name} must be square, got shape {arr.shape}")
    return rows


@dataclass(frozen=True)
class TensorLayout:
    """Fixed flattening of pair-of-pairs indices for size-``n`` objects.

    The convention (0-based) is ``row = i * n + k`` and ``col = j * n + l``,
    fixed project-wide; see the module docstring.
    """

    n: int

    def row(self, i: int, k: int) -> int:
        return i * self.n + k

    def col(self, j: int, l: int) -> int:
        return j * self.n + l

    def entry(self, A: np.ndarray, i: int, j: int, k: int, l: int) -> complex:
        """Entry ``A[(i, j), (k, l)]`` of an n^2 x n^2 matrix."""
        return A[self.row(i, k), self.col(j, l)]


def to_blocks(A: np.ndarray, n: int) -> np.ndarray:
    """View an ``(n d) x (n d)`` matrix as an ``(n, n, d, d)`` block array.

    ``to_blocks(A, n)[i, j]`` is the ``d x d`` block in block row ``i``,
    block column ``j``.
    """
    dim = require_square(A, "block matrix")
    if n < 1 or dim % n != 0:
        raise ShapeError(f"dimension {dim} is not divisible into {n} blocks")
    d = dim // n
    return np.asarray(A, dtype=complex).reshape(n, d, n, d).transpose(0, 2, 1, 3)


def from_blocks(blocks: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_blocks`: assemble an ``(n, n, d, d)`` array."""
    blocks = np.asarray(blocks, dtype=complex)
    if blocks.ndim != 4 or blocks.shape[0] != blocks.shape[1] or blocks.shape[2] != blocks.shape[3]:
        raise ShapeError(f"expected an (n, n, d, d) block array, got shape {blocks.shape}")
    n, _, d, _ = blocks.shape
    return blocks.transpose(0, 2, 1, 3).reshape(n * d, n * d)


def is_unitary(A: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``max |A* A - I| <= tol``."""
    dim = require_square(A, "unitary candidate")
    defect = A.conj().T @ A - np.eye(dim)
    return bool(np.max(np.abs(defect)) <= tol)


def hermitian_sqrt(P: np.ndarray, tol: float = DEFAULT_TOL, floor: float = 0.0) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Parameters
    ----------
    P : ndarray
        Hermitian within ``tol``, with eigenvalues ``>= -tol``.
    tol : float
        Hermiticity slack and the most negative eigenvalue tolerated.
    floor : float
        Eigenvalues below ``floor`` (but above ``-tol``) are clamped to 0.
        The default 0.0 clamps only the rounding-induced negatives; dilation
        code passes a small positive floor so that defect operators of
        numerically unitary contractions vanish exactly.

    Returns
    -------
    ndarray
        Hermitian ``Q`` with ``Q @ Q`` equal to the clamped ``P``.
    """
    dim = require_square(P, "matrix")
    herm_defect = float(np.max(np.abs(P - P.conj().T)))
    if herm_defect > tol:
        raise ValidationError(f"matrix is not Hermitian: max |P - P*| = {herm_defect:.3e} > {tol:.1e}")
    w, v = np.linalg.eigh((P + P.conj().T) / 2)
    if w[0] < -tol:
        raise NumericalError(
            f"matrix is not positive semidefinite: min eigenvalue {w[0]:.3e} < -{tol:.1e}"
        )
    w = np.where(w < max(floor, 0.0), 0.0, w)
    Q = (v * np.sqrt(w)) @ v.conj().T
    return (Q + Q.conj().T) / 2


def polar_factor(A: np.ndarray) -> np.ndarray:
    """Unitary ``U`` maximizing ``Re Tr(U @ A)`` over all unitaries.

    The attained value is the sum of singular values of ``A``.  For singular
    ``A`` the null-space completion is the one induced by the full SVD
    factors.
    """
    require_square(A, "matrix")
    u, _, vh = np.linalg.svd(A)
    return (u @ vh).conj().T


def trace_norm(A: np.ndarray) -> float:
    """Sum of singular values."""
    require_square(A, "matrix")
    return float(np.linalg.svd(A, compute_uv=False).sum())


def operator_norm(A: np.ndarray) -> float:
    """Largest singular value."""
    as_cmatrix(A)
    return float(np.linalg.norm(A, 2))


def partial_trace_game(O: np.ndarray, n_game: int, d_env: int) -> np.ndarray:
    """Trace out the leading ``n_game``-dimensional tensor factor.

    ``O`` acts on a space of dimension ``n_game * d_env`` with the game
    register leading; the result is the ``d_env x d_env`` matrix
    ``sum_g O[(g, a), (g, b)]``.  The total trace is preserved.
    """
    dim = require_square(O, "operator")
    if n_game < 1 or d_env < 1 or dim != n_game * d_env:
        raise ShapeError(f"operator of dimension {dim} does not factor as {n_game} x {d_env}")
    O4 = np.asarray(O, dtype=complex).reshape(n_game, d_env, n_game, d_env)
    return np.einsum("gagb->ab", O4)


def canonical_shuffle(A: np.ndarray, outer_blocks: int, inner_blocks: int, block_dim: int) -> np.ndarray:
    """Swap the outer and inner block levels of a doubly blocked matrix.

    ``A`` is read as ``outer x outer`` blocks of ``inner x inner`` blocks of
    size ``block_dim``; the result has the two levels exchanged.  The
    reindexing is a permutation similarity, so it preserves unitarity and
    self-adjointness, and applying it twice with swapped arguments is the
    identity.
    """
    dim = require_square(A, "matrix")
    if outer_blocks < 1 or inner_blocks < 1 or block_dim < 1:
        raise ShapeError("block counts and block dimension must be positive")
    if dim != outer_blocks * inner_blocks * block_dim:
        raise ShapeError(
            f"dimension {dim} does not factor as {outer_blocks} * {inner_blocks} * {block_dim}"
        )
    o, i, b = outer_blocks, inner_blocks, block_dim
    T = np.asarray(A, dtype=complex).reshape(o, i, b, o, i, b)
    return T.transpose(1, 0, 2, 4, 3, 5).reshape(dim, dim)


def haar_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed random unitary, deterministic for a fixed seed.

    Samples a matrix of independent standard complex Gaussians, takes its QR
    factorization, and normalizes the phases of the triangular factor's
    diagonal.
    """
    if dim < 1:
        raise ValidationError(f"dimension must be >= 1, got {dim}")
    return haar_from_rng(dim, np.random.default_rng(seed))


def haar_from_rng(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Draw one Haar unitary from an existing generator stream."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def unit_vector_from_rng(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random unit vector in C^dim."""
    if dim < 1:
        raise ValidationError(f"dimension must be >= 1, got {dim}")
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
