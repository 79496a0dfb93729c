import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


def random_unitary(rng, n):
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_rotation(rng, n):
    """Haar-ish element of SO(n)."""
    Q, R = np.linalg.qr(rng.normal(size=(n, n)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_gl(rng, n, max_cond=1e3):
    while True:
        M = rng.normal(size=(n, n))
        if np.linalg.cond(M) <= max_cond:
            return M


def su_from_frequencies(rng, k, scale=1.0):
    U = random_unitary(rng, len(k))
    return U @ np.diag(1j * scale * np.asarray(k, dtype=float)) @ U.conj().T


def so_from_blocks(rng, blocks, zeros, proper=True):
    from knotsub.linalg import block_matrix

    Q = random_rotation(rng, 2 * len(blocks) + zeros)
    if not proper:
        Q[0] = -Q[0]
    return Q.T @ block_matrix(blocks, zeros) @ Q
