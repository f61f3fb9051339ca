"""Sparse 2-local qubit Hamiltonians and their SO(3) / signed-permutation calculus.

A two-qubit interaction is carried by a 3x3 real coupling matrix (rows are the
X, Y, Z axes of the first qubit, columns those of the second) together with the
two 1-local coefficient vectors.  Single-qubit unitaries act on these objects
as a pair of SO(3) rotations; single-qubit Cliffords act as the 24 signed
permutations with determinant +1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

PAULIS = ("X", "Y", "Z")
AXIS = {"X": 0, "Y": 1, "Z": 2}

# Module-wide absolute tolerance for zero tests, rank decisions and boundary
# comparisons.  Coefficients are treated as exact inputs; this only guards
# float parsing, so boundary inequalities count as satisfied within it.
TOLERANCE = 1e-9

# Orthogonality/determinant tolerance for rotation matrices.
ROTATION_TOL = 1e-12


class ModelError(ValueError):
    """The Hamiltonian violates a structural requirement of the operation."""


class SearchCapError(ValueError):
    """The instance exceeds the size cap of a brute-force search."""


def _check_pauli(p):
    if p not in AXIS:
        raise ValueError(f"unknown Pauli label {p!r}")


class Hamiltonian:
    """A 2-local n-qubit Hamiltonian as sparse real coefficient maps.

    ``one_local`` maps ``(qubit, pauli)`` to a coefficient and ``two_local``
    maps ``(u, v, pauli_u, pauli_v)`` with ``u < v``; a coefficient given with
    ``u > v`` is stored transposed.  The identity component is dropped (it only
    shifts the spectrum), duplicate keys are summed, exact zeros are removed.
    """

    def __init__(self, n_qubits, one_local=None, two_local=None):
        if n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        self.n_qubits = int(n_qubits)
        self.one_local = {}
        self.two_local = {}
        for (q, p), c in (one_local or {}).items():
            self._add_one(q, p, c)
        for (u, v, pu, pv), c in (two_local or {}).items():
            self._add_two(u, v, pu, pv, c)

    @classmethod
    def from_terms(cls, n_qubits, terms):
        """Build from an iterable of ``(coeff, ops)`` with ops like
        ``[("X", 0)]`` or ``[("X", 0), ("Z", 1)]``."""
        h = cls(n_qubits)
        for coeff, ops in terms:
            if len(ops) == 1:
                (p, q), = ops
                h._add_one(q, p, coeff)
            elif len(ops) == 2:
                (pu, u), (pv, v) = ops
                h._add_two(u, v, pu, pv, coeff)
            else:
                raise ValueError("terms must be 1- or 2-local")
        return h

    def _check_vertex(self, q):
        if not (0 <= q < self.n_qubits):
            raise ValueError(f"qubit index {q} out of range [0, {self.n_qubits})")

    def _add_one(self, q, p, c):
        self._check_vertex(q)
        _check_pauli(p)
        if not np.isfinite(c):
            raise ValueError("coefficients must be finite")
        key = (q, p)
        new = self.one_local.get(key, 0.0) + float(c)
        if new == 0.0:
            self.one_local.pop(key, None)
        else:
            self.one_local[key] = new

    def _add_two(self, u, v, pu, pv, c):
        self._check_vertex(u)
        self._check_vertex(v)
        _check_pauli(pu)
        _check_pauli(pv)
        if u == v:
            raise ValueError("two-local term needs distinct qubits")
        if not np.isfinite(c):
            raise ValueError("coefficients must be finite")
        if u > v:
            u, v, pu, pv = v, u, pv, pu
        key = (u, v, pu, pv)
        new = self.two_local.get(key, 0.0) + float(c)
        if new == 0.0:
            self.two_local.pop(key, None)
        else:
            self.two_local[key] = new

    def coefficient(self, *ops):
        """Coefficient of a product of Paulis, e.g. ``coefficient(("X", 0), ("Z", 1))``."""
        if len(ops) == 1:
            p, q = ops[0]
            return self.one_local.get((q, p), 0.0)
        (pu, u), (pv, v) = ops
        if u > v:
            u, v, pu, pv = v, u, pv, pu
        return self.two_local.get((u, v, pu, pv), 0.0)

    def one_local_vector(self, q):
        """The (X, Y, Z) coefficient vector of qubit ``q``."""
        self._check_vertex(q)
        return np.array([self.one_local.get((q, p), 0.0) for p in PAULIS])

    def edge_beta(self, u, v):
        """The 3x3 coupling matrix of the (u, v) pair, rows indexed by u."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise ValueError("edge needs distinct qubits")
        beta = np.zeros((3, 3))
        for i, pu in enumerate(PAULIS):
            for j, pv in enumerate(PAULIS):
                if u < v:
                    beta[i, j] = self.two_local.get((u, v, pu, pv), 0.0)
                else:
                    beta[i, j] = self.two_local.get((v, u, pv, pu), 0.0)
        return beta

    def edges(self):
        """Sorted list of qubit pairs carrying a two-local term."""
        return sorted({(u, v) for (u, v, _, _) in self.two_local})

    def terms(self):
        """Iterate ``(coeff, ops)`` pairs in insertion order."""
        for (q, p), c in self.one_local.items():
            yield c, ((p, q),)
        for (u, v, pu, pv), c in self.two_local.items():
            yield c, ((pu, u), (pv, v))

    def __eq__(self, other):
        return (isinstance(other, Hamiltonian)
                and self.n_qubits == other.n_qubits
                and self.one_local == other.one_local
                and self.two_local == other.two_local)

    def __repr__(self):
        n_terms = len(self.one_local) + len(self.two_local)
        return f"Hamiltonian(n_qubits={self.n_qubits}, terms={n_terms})"


@dataclass(frozen=True, eq=False)
class EdgeData:
    """The 3x3 coupling matrix plus the two 1-local vectors of a qubit pair."""

    beta: np.ndarray
    s_vec: np.ndarray
    p_vec: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "beta", np.array(self.beta, dtype=float))
        object.__setattr__(self, "s_vec", np.array(self.s_vec, dtype=float))
        object.__setattr__(self, "p_vec", np.array(self.p_vec, dtype=float))
        if self.beta.shape != (3, 3) or self.s_vec.shape != (3,) or self.p_vec.shape != (3,):
            raise ValueError("EdgeData needs a 3x3 matrix and two 3-vectors")
        if not (np.isfinite(self.beta).all() and np.isfinite(self.s_vec).all()
                and np.isfinite(self.p_vec).all()):
            raise ValueError("EdgeData entries must be finite")

    def rank(self, tol=TOLERANCE):
        """Rank of the coupling matrix with the module-wide tolerance."""
        return int(np.sum(np.linalg.svd(self.beta, compute_uv=False) > tol))


@dataclass(frozen=True, eq=False)
class Rotation3:
    """An element of SO(3)."""

    m: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m", np.array(self.m, dtype=float))
        if self.m.shape != (3, 3):
            raise ValueError("rotation must be 3x3")
        if np.abs(self.m.T @ self.m - np.eye(3)).max() > ROTATION_TOL:
            raise ValueError("matrix is not orthogonal")
        if abs(np.linalg.det(self.m) - 1.0) > ROTATION_TOL:
            raise ValueError("matrix is not special orthogonal (det != +1)")

    @classmethod
    def identity(cls):
        return cls(np.eye(3))

    @classmethod
    def from_axis_angle(cls, axis, angle):
        axis = np.asarray(axis, dtype=float)
        n = np.linalg.norm(axis)
        if n == 0:
            raise ValueError("axis must be nonzero")
        x, y, z = axis / n
        k = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
        m = np.eye(3) + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)
        return cls(m)

    def __matmul__(self, other):
        return Rotation3(self.m @ other.m)

    def transpose(self):
        return Rotation3(self.m.T)


def rotation_taking(a, b):
    """A rotation mapping unit direction ``a`` onto unit direction ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    c = float(a @ b)
    v = np.cross(a, b)
    n = np.linalg.norm(v)
    if n > 1e-12:
        return Rotation3.from_axis_angle(v, np.arctan2(n, c))
    if c > 0:
        return Rotation3.identity()
    # antipodal pair: rotate by pi about any perpendicular axis
    perp = np.cross(a, [1.0, 0.0, 0.0])
    if np.linalg.norm(perp) < 1e-8:
        perp = np.cross(a, [0.0, 1.0, 0.0])
    return Rotation3.from_axis_angle(perp, np.pi)


def _perm_parity(perm):
    inv = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


@dataclass(frozen=True)
class SignedPermutation:
    """A permutation of the three Pauli axes with per-axis signs.

    ``perm`` holds the images of axes (0, 1, 2); ``signs`` is indexed by the
    target axis, so the matrix has ``M[perm[m], m] = signs[perm[m]]``.
    """

    perm: tuple
    signs: tuple

    def __post_init__(self):
        if sorted(self.perm) != [0, 1, 2]:
            raise ValueError("perm must be a bijection on {0, 1, 2}")
        if len(self.signs) != 3 or any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be three entries of +-1")

    @classmethod
    def identity(cls):
        return cls((0, 1, 2), (1, 1, 1))

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m)
        perm = [0, 0, 0]
        signs = [1, 1, 1]
        for col in range(3):
            rows = np.nonzero(m[:, col])[0]
            if len(rows) != 1:
                raise ValueError("not a signed permutation matrix")
            r = int(rows[0])
            perm[col] = r
            signs[r] = 1 if m[r, col] > 0 else -1
        if sorted(perm) != [0, 1, 2]:
            raise ValueError("not a signed permutation matrix")
        return cls(tuple(perm), tuple(signs))

    def matrix(self):
        m = np.zeros((3, 3))
        for src in range(3):
            m[self.perm[src], src] = self.signs[self.perm[src]]
        return m

    @property
    def det(self):
        return _perm_parity(self.perm) * self.signs[0] * self.signs[1] * self.signs[2]

    def rotation(self):
        """The SO(3) element realised by this signed permutation (det must be +1)."""
        return Rotation3(self.matrix())

    def __matmul__(self, other):
        return SignedPermutation.from_matrix(self.matrix() @ other.matrix())


def all_signed_permutations():
    """All 48 signed permutations in canonical order (perm, then signs)."""
    out = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            out.append(SignedPermutation(perm, signs))
    return out


def clifford_rotations():
    """The 24 determinant +1 signed permutations, canonical order.

    These are exactly the adjoint actions of the single-qubit Clifford group
    on the Pauli axes.
    """
    return [sp for sp in all_signed_permutations() if sp.det == 1]


def extract_edge_data(h, u, v):
    """The coupling matrix of (u, v) together with the current 1-local vectors."""
    if u == v:
        raise ValueError("edge needs distinct qubits")
    return EdgeData(h.edge_beta(u, v), h.one_local_vector(u), h.one_local_vector(v))


def apply_rotations(e, o1, o2):
    """Transform edge data by a pair of SO(3) rotations (o1 on the row qubit)."""
    return EdgeData(o1.m @ e.beta @ o2.m.T, o1.m @ e.s_vec, o2.m @ e.p_vec)


def apply_signed_permutations(beta, pu, pv, tol=TOLERANCE):
    """Conjugate a diagonal coupling matrix by a pair of signed permutations."""
    beta = np.asarray(beta, dtype=float)
    off = beta - np.diag(np.diag(beta))
    if np.abs(off).max() > tol:
        raise ValueError("coupling matrix must be diagonal")
    return pu.matrix() @ beta @ pv.matrix().T


def is_z_matrix_2q(e, tol=TOLERANCE):
    """Whether the dense 4x4 matrix of this edge is a symmetric Z-matrix.

    Requires every coefficient with a single Y factor to vanish and the three
    off-diagonal sign conditions to hold, boundaries counting within ``tol``.
    """
    b, s, p = e.beta, e.s_vec, e.p_vec
    real = max(abs(b[0, 1]), abs(b[1, 0]), abs(b[2, 1]), abs(b[1, 2]),
               abs(s[1]), abs(p[1])) <= tol
    if not real:
        return False
    return (b[0, 0] <= -abs(b[1, 1]) + tol
            and p[0] <= -abs(b[2, 0]) + tol
            and s[0] <= -abs(b[0, 2]) + tol)


def is_real_fixed_basis(h, tol=TOLERANCE):
    """Whether every stored term has an even number of Y factors (within tol)."""
    for (q, p), c in h.one_local.items():
        if p == "Y" and abs(c) > tol:
            return False
    for (u, v, pu, pv), c in h.two_local.items():
        if (pu == "Y") != (pv == "Y") and abs(c) > tol:
            return False
    return True
