"""Shared test helpers: random rotations, dense two-qubit builders, SU(2)."""

import math

import numpy as np

from stoqcheck import EdgeData, Hamiltonian, Rotation3

SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PAULIS = ("X", "Y", "Z")


def random_rotation(rng):
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    return Rotation3.from_axis_angle(axis, rng.uniform(0.0, math.pi))


def random_su2(rng):
    """Haar-ish random SU(2) via a random unit quaternion."""
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    a, b, c, d = q
    return np.array([[a + 1j * b, c + 1j * d],
                     [-c + 1j * d, a - 1j * b]])


def su2_to_so3(u):
    """Adjoint action on the Pauli axes: O[i][j] = Tr(s_i U s_j U^dag) / 2."""
    m = np.zeros((3, 3))
    for i, pi in enumerate(PAULIS):
        for j, pj in enumerate(PAULIS):
            m[i, j] = np.real(np.trace(SIGMA[pi] @ u @ SIGMA[pj] @ u.conj().T)) / 2.0
    return Rotation3(m)


def dense_2q(e):
    """Dense 4x4 matrix of an edge's coupling data."""
    out = np.zeros((4, 4), dtype=complex)
    for i, pu in enumerate(PAULIS):
        for j, pv in enumerate(PAULIS):
            out += e.beta[i, j] * np.kron(SIGMA[pu], SIGMA[pv])
        out += e.s_vec[i] * np.kron(SIGMA[pu], SIGMA["I"])
        out += e.p_vec[i] * np.kron(SIGMA["I"], SIGMA[pu])
    return out


def dense_is_z(m, tol=1e-9):
    if np.abs(np.imag(m)).max() > tol:
        return False
    r = np.real(m)
    if np.abs(r - r.T).max() > tol:
        return False
    return (r - np.diag(np.diag(r))).max() <= tol


def random_edge(rng, scale=2.0, real=False):
    beta = rng.uniform(-scale, scale, (3, 3))
    s = rng.uniform(-scale, scale, 3)
    p = rng.uniform(-scale, scale, 3)
    if real:
        beta = np.diag(np.diag(beta))
        s[1] = 0.0
        p[1] = 0.0
    return EdgeData(beta, s, p)


def xyz_hamiltonian(n, edges):
    """Hamiltonian from (u, v, (wx, wy, wz)) triples."""
    terms = []
    for (u, v, w) in edges:
        for c, pp in zip(w, PAULIS):
            if c:
                terms.append((float(c), ((pp, u), (pp, v))))
    return Hamiltonian.from_terms(n, terms)
