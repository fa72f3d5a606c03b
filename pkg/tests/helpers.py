"""Shared construction helpers for the test suite."""

import numpy as np

from qxor.linalg import canonical_shuffle, haar_unitary
from qxor.strategy import CommutingStrategy


def diagonal_commuting_strategy(n, d, seed):
    """Commuting strategy whose blocks are all diagonal (exact commutation)."""
    rng = np.random.default_rng(seed)

    def build():
        big = np.zeros((n * d, n * d), dtype=complex)
        for a in range(d):
            W = haar_unitary(n, seed=int(rng.integers(0, 2**31)))
            big[a * n : (a + 1) * n, a * n : (a + 1) * n] = W
        return canonical_shuffle(big, d, n, 1)

    U = build()
    V = build()
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    psi /= np.linalg.norm(psi)
    return CommutingStrategy(n=n, d=d, U=U, V=V, psi=psi)
