"""Independent reference implementations used only by the tests.

The bare-basis oracle builds the master equation from raw operators on
``(|00>|0>, |10>|0>, |01>|0>, |00>|1>)`` with no excitation phases, forms the
full 16x16 Liouvillian by vectorization and propagates with scipy's expm.
Results are mapped into the phase-bearing basis with ``T = diag(1, 1, e^{i phi}, 1)``.
"""

import numpy as np
from scipy.linalg import expm

G, E1, E2, C = 0, 1, 2, 3


def _ket(i):
    v = np.zeros(4, dtype=complex)
    v[i] = 1.0
    return v


def _op(i, j):
    return np.outer(_ket(i), _ket(j))


# lowering operators restricted to the single-excitation manifold
SIGMA1 = _op(G, E1)
SIGMA2 = _op(G, E2)
A = _op(G, C)


def bare_liouvillian(g1, g2, omega12, gamma12, gamma, kappa, delta=0.0):
    """Vectorized (row-major) Lindblad generator in the bare basis."""
    sig = [SIGMA1, SIGMA2]
    gmat = [[gamma, gamma12], [gamma12, gamma]]
    H = delta * (SIGMA1.conj().T @ SIGMA1 + SIGMA2.conj().T @ SIGMA2)
    H = H + g1 * (SIGMA1.conj().T @ A + A.conj().T @ SIGMA1)
    H = H + g2 * (SIGMA2.conj().T @ A + A.conj().T @ SIGMA2)
    H = H + omega12 * (SIGMA1.conj().T @ SIGMA2 + SIGMA2.conj().T @ SIGMA1)
    eye = np.eye(4)

    def left(X):
        return np.kron(X, eye)

    def right(X):
        return np.kron(eye, X.T)

    L = -1j * (left(H) - right(H))
    for i in range(2):
        for j in range(2):
            sd_s = sig[i].conj().T @ sig[j]
            L -= gmat[i][j] * (right(sd_s) + left(sd_s)
                               - 2 * np.kron(sig[j], sig[i].conj()))
    nd = A.conj().T @ A
    L -= kappa * (right(nd) + left(nd) - 2 * np.kron(A, A.conj()))
    return L


def phase_transform(phi):
    return np.diag([1.0, 1.0, np.exp(1j * phi), 1.0])


def bare_evolve(rho_phase0, t, g1, g2, omega12, gamma12, gamma, kappa, phi, delta=0.0):
    """Propagate a phase-basis density matrix with the bare-basis oracle."""
    T = phase_transform(phi)
    rho_bare = T @ rho_phase0 @ T.conj().T
    L = bare_liouvillian(g1, g2, omega12, gamma12, gamma, kappa, delta)
    out = (expm(t * L) @ rho_bare.reshape(-1)).reshape(4, 4)
    return T.conj().T @ out @ T


def lossless_hamiltonian_phase(g, phi):
    """Equal-coupling lossless Hamiltonian in the phase basis."""
    e = np.exp(1j * phi)
    H = np.zeros((4, 4), dtype=complex)
    H[E1, C] = H[C, E1] = g
    H[E2, C] = g * np.conj(e)
    H[C, E2] = g * e
    return H


def random_density(rng, dim=4):
    X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = X @ X.conj().T
    return rho / np.trace(rho).real


def projector_population(rho, vec):
    vec = np.asarray(vec, dtype=complex)
    P = np.outer(vec, vec.conj())
    return float(np.trace(P @ rho).real)
