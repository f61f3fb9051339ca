"""Brute-force ground truth: exhaustive Clifford search, dense matrix
checks, the signed-permutation reduction of diagonal-preserving rotation
pairs, and seeded instance generators."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

import numpy as np

from .pauli import (
    PAULIS,
    TOLERANCE,
    EdgeData,
    Hamiltonian,
    Rotation3,
    SearchCapError,
    SignedPermutation,
    clifford_rotations,
)

_PAULI_MAT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
# iK = Y; a term with k Y factors is i^k times the real Kronecker product
_REAL_MAT = {
    "I": np.eye(2),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "Y": np.array([[0.0, -1.0], [1.0, 0.0]]),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]]),
}


@dataclass(frozen=True, eq=False)
class DenseHamiltonian:
    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        if np.abs(self.matrix - self.matrix.conj().T).max() > 1e-10:
            raise ValueError("dense Hamiltonian is not Hermitian")


def _kron_term(n, ops, real):
    mats = [_REAL_MAT if real else _PAULI_MAT] * n
    factors = [(_REAL_MAT if real else _PAULI_MAT)["I"]] * n
    for p, q in ops:
        factors[q] = (_REAL_MAT if real else _PAULI_MAT)[p]
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def dense_matrix(h):
    """Dense 2^n x 2^n matrix; real dtype when every term has even Y count."""
    from .pauli import is_real_fixed_basis
    real = is_real_fixed_basis(h, 0.0)
    dim = 2 ** h.n_qubits
    out = np.zeros((dim, dim)) if real else np.zeros((dim, dim), dtype=complex)
    for coeff, ops in h.terms():
        y_count = sum(1 for p, _ in ops if p == "Y")
        if real:
            sign = -1.0 if y_count % 4 == 2 else 1.0
            out += coeff * sign * _kron_term(h.n_qubits, ops, True)
        else:
            out += coeff * _kron_term(h.n_qubits, ops, False)
    return out


def dense_hamiltonian(h):
    return DenseHamiltonian(2 ** h.n_qubits, dense_matrix(h))


def is_symmetric_z_matrix(m, tol=1e-12):
    """Real within tol, symmetric, off-diagonal entries <= tol."""
    if np.abs(np.imag(m)).max() > tol:
        return False
    r = np.real(m)
    if np.abs(r - r.T).max() > tol:
        return False
    off = r - np.diag(np.diag(r))
    return off.max() <= tol


def _vertex_matrix(assignment, v):
    a = assignment.get(v) if assignment else None
    if a is None:
        return np.eye(3)
    if isinstance(a, SignedPermutation):
        return a.matrix()
    if isinstance(a, Rotation3):
        return a.m
    return np.asarray(a, dtype=float)


def transform_hamiltonian(h, assignment=None):
    """Coefficient-level local basis change (3x3 matrix per vertex)."""
    mats = {v: _vertex_matrix(assignment, v) for v in range(h.n_qubits)}
    one = {}
    for v in range(h.n_qubits):
        vec = mats[v] @ h.one_local_vector(v)
        for i, p in enumerate(PAULIS):
            if vec[i] != 0.0:
                one[(v, p)] = one.get((v, p), 0.0) + vec[i]
    two = {}
    for (u, v) in h.edges():
        beta = mats[u] @ h.edge_beta(u, v) @ mats[v].T
        for i, pu in enumerate(PAULIS):
            for j, pv in enumerate(PAULIS):
                if beta[i, j] != 0.0:
                    key = (u, v, pu, pv)
                    two[key] = two.get(key, 0.0) + beta[i, j]
    return Hamiltonian(h.n_qubits, one, two)


def dense_z_check(h, assignment=None, tol=1e-12, cap=12):
    """Build the dense transformed matrix and test the Z-matrix conditions."""
    if h.n_qubits > cap:
        raise SearchCapError(f"dense check capped at {cap} qubits")
    return is_symmetric_z_matrix(dense_matrix(transform_hamiltonian(h, assignment)), tol)


# --------------------------------------------------------------------------
# exhaustive searches over single-qubit Cliffords
# --------------------------------------------------------------------------

def _is_xyz(h):
    return not h.one_local and all(pu == pv for (_, _, pu, pv) in h.two_local)


_CLIFFS = clifford_rotations()
_EDGE_MASK_CACHE = {}


def _edge_masks(w, tol):
    """For each left Clifford index, the bitmask of right indices keeping the
    diagonal weight diagonal with a dominant non-positive first entry."""
    key = (w, tol)
    cached = _EDGE_MASK_CACHE.get(key)
    if cached is not None:
        return cached
    nz = [m for m in range(3) if abs(w[m]) > tol]
    masks = []
    for cu in _CLIFFS:
        mask = 0
        for j, cv in enumerate(_CLIFFS):
            ok = True
            b11 = b22 = 0.0
            for m in nz:
                tu, tv = cu.perm[m], cv.perm[m]
                if tu != tv:
                    ok = False
                    break
                val = cu.signs[tu] * cv.signs[tv] * w[m]
                if tu == 0:
                    b11 = val
                elif tu == 1:
                    b22 = val
            if ok and b11 <= -abs(b22) + tol:
                mask |= 1 << j
        masks.append(mask)
    _EDGE_MASK_CACHE[key] = masks
    return masks


def _xyz_clifford_dfs(h, tol):
    """Lexicographically-first assignment of determinant +1 signed
    permutations making every edge weight diagonal and non-positive-first,
    or None.  Vertices are assigned in id order with per-edge bitmask
    propagation, so the first complete assignment is the smallest."""
    n = h.n_qubits
    weights = {}
    for (u, v, pu, pv), c in h.two_local.items():
        w = weights.setdefault((u, v), [0.0, 0.0, 0.0])
        w["XYZ".index(pu)] += c
    constraints = {v: [] for v in range(n)}
    for (u, v), w in weights.items():
        constraints[v].append((u, _edge_masks(tuple(w), tol)))

    full = (1 << 24) - 1
    choice = [-1] * n

    def dfs(v):
        if v == n:
            return True
        mask = full
        for u, masks in constraints[v]:
            mask &= masks[choice[u]]
            if not mask:
                return False
        while mask:
            i = (mask & -mask).bit_length() - 1
            choice[v] = i
            if dfs(v + 1):
                return True
            mask &= mask - 1
        choice[v] = -1
        return False

    if dfs(0):
        return {u: _CLIFFS[choice[u]] for u in range(n)}
    return None


def search_pauli_permutations(h, cap=12, tol=TOLERANCE):
    """First axis-permutation assignment (6^n search, id order) giving every
    term an even Y count, or None."""
    if h.n_qubits > cap:
        raise SearchCapError(f"permutation search capped at {cap} qubits")
    perms = tuple(itertools.permutations(range(3)))
    n = h.n_qubits
    one_at = {v: [] for v in range(n)}
    two_at = {v: [] for v in range(n)}
    for (q, p), c in h.one_local.items():
        if abs(c) > tol:
            one_at[q].append("XYZ".index(p))
    for (u, v, pu, pv), c in h.two_local.items():
        if abs(c) > tol:
            two_at[max(u, v)].append((u, "XYZ".index(pu), v, "XYZ".index(pv)))

    choice = [None] * n

    def ok(v):
        for ax in one_at[v]:
            if choice[v][ax] == 1:
                return False
        for (a, pa, b, pb) in two_at[v]:
            if (choice[a][pa] == 1) != (choice[b][pb] == 1):
                return False
        return True

    def dfs(v):
        if v == n:
            return True
        for perm in perms:
            choice[v] = perm
            if ok(v) and dfs(v + 1):
                return True
        choice[v] = None
        return False

    if dfs(0):
        return {v: SignedPermutation(choice[v], (1, 1, 1)) for v in range(n)}
    return None


def brute_force_clifford(h, mode="z_matrix", cap=6, tol=TOLERANCE):
    """Exhaustive ground-truth search over per-qubit Clifford actions.

    ``z_matrix`` searches the 24^n determinant +1 signed permutations for an
    assignment making the transformed Hamiltonian a symmetric Z-matrix;
    ``realness`` searches the 6^n axis permutations for an even-Y assignment.
    Pure XYZ inputs use fast per-edge mask propagation; other Hamiltonians
    fall back to dense checks and are capped much lower.
    """
    if mode == "realness":
        return search_pauli_permutations(h, cap=max(cap, 12), tol=tol)
    if mode != "z_matrix":
        raise ValueError(f"unknown mode {mode!r}")
    if h.n_qubits > cap:
        raise SearchCapError(f"Clifford search capped at {cap} qubits")
    if _is_xyz(h):
        return _xyz_clifford_dfs(h, tol)
    if h.n_qubits > 3:
        raise SearchCapError("dense Clifford search capped at 3 qubits for "
                             "non-XYZ Hamiltonians")
    for combo in itertools.product(range(24), repeat=h.n_qubits):
        assignment = {v: _CLIFFS[c] for v, c in enumerate(combo)}
        if dense_z_check(h, assignment, tol=tol):
            return assignment
    return None


# --------------------------------------------------------------------------
# signed-permutation reduction of diagonal-preserving rotations
# --------------------------------------------------------------------------

# determinant monomials of a 3x3 matrix in lexicographic order of their
# entry positions; each is a choice of one column per row
_MONOMIALS = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))


def pi_reduction(o, tol=1e-12):
    """Signed permutation carried by the lowest nonzero determinant monomial.

    For special orthogonal input some monomial is always nonzero; if the
    input pair (O_L, O_R) maps a diagonal matrix to a diagonal matrix, the
    reduced pair performs the same mapping.
    """
    m = o.m if isinstance(o, Rotation3) else np.asarray(o, dtype=float)
    for cols in _MONOMIALS:
        prod = m[0, cols[0]] * m[1, cols[1]] * m[2, cols[2]]
        if abs(prod) > tol:
            out = np.zeros((3, 3))
            for r in range(3):
                out[r, cols[r]] = 1.0 if m[r, cols[r]] > 0 else -1.0
            return SignedPermutation.from_matrix(out)
    raise ValueError("no nonzero determinant monomial; input is not a rotation")


def random_diagonal_preserving_pair(rng):
    """A rotation pair (O_L, O_R) and a diagonal matrix with O_L b O_R^T
    diagonal, built from a degenerate weight whose stabiliser contains a
    continuous rotation, framed by Cliffords sharing a permutation part."""
    a = rng.choice([-2.0, -1.0, 1.0, 2.0])
    pattern = rng.randrange(3)
    if pattern == 0:
        diag = (a, a, rng.choice([-1.0, 0.0, 1.0, 3.0]))
    elif pattern == 1:
        diag = (a, a, a)
    else:
        diag = (a, a, 0.0)
    theta = rng.uniform(0.0, 2.0 * math.pi)
    c, s = math.cos(theta), math.sin(theta)
    r12 = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    flip = rng.randrange(2)
    r12_r = r12 if not flip else r12 @ np.diag([-1.0, -1.0, 1.0])
    cl = _CLIFFS[rng.randrange(24)]
    same_perm = [sp for sp in _CLIFFS if sp.perm == cl.perm]
    cr = same_perm[rng.randrange(len(same_perm))]
    o_l = Rotation3(cl.matrix() @ r12)
    o_r = Rotation3(cr.matrix() @ r12_r)
    return o_l, o_r, np.diag(diag)


# --------------------------------------------------------------------------
# seeded instance generation and continuous-rotation minimisers
# --------------------------------------------------------------------------

def random_xyz(n, density, coeff_set, seed):
    """Seeded random XYZ Hamiltonian; each pair joins with the given
    probability, weights drawn uniformly from coeff_set^3 minus zero, and at
    least one edge is guaranteed."""
    if n < 2:
        raise ValueError("need at least two qubits")
    coeffs = sorted(set(float(c) for c in coeff_set))
    if not coeffs:
        raise ValueError("empty coefficient set")
    pool = [w for w in itertools.product(coeffs, repeat=3) if any(w)]
    if not pool:
        raise ValueError("coefficient set admits only the zero weight")
    rng = random.Random(seed)
    terms = []
    chosen = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                chosen.append((u, v))
    if not chosen:
        u = rng.randrange(n - 1)
        v = rng.randrange(u + 1, n)
        chosen.append((u, v))
    for (u, v) in chosen:
        w = pool[rng.randrange(len(pool))]
        for i, p in enumerate(PAULIS):
            if w[i] != 0.0:
                terms.append((w[i], ((p, u), (p, v))))
    return Hamiltonian.from_terms(n, terms)


def y_residual_min(e, restarts=50, seed=0, iters=300):
    """Minimum over rotation pairs of the norm of the odd-Y coefficients.

    The residual depends only on the two unit vectors the rotations send to
    the Y axis, so the search runs as projected gradient descent on a pair
    of spheres, restarted from the singular directions and random points.
    """
    beta = e.beta
    a = beta @ beta.T
    b = beta.T @ beta
    s, p = e.s_vec, e.p_vec

    def value(u, v):
        ubv = float(u @ beta @ v)
        return (float(u @ a @ u) + float(v @ b @ v) - 2.0 * ubv * ubv
                + float(u @ s) ** 2 + float(v @ p) ** 2)

    def grads(u, v):
        ubv = float(u @ beta @ v)
        gu = 2.0 * (a @ u) - 4.0 * ubv * (beta @ v) + 2.0 * float(u @ s) * s
        gv = 2.0 * (b @ v) - 4.0 * ubv * (beta.T @ u) + 2.0 * float(v @ p) * p
        return gu, gv

    uu, _, vvt = np.linalg.svd(beta)
    starts = [(uu[:, i], vvt.T[:, j]) for i in range(3) for j in range(3)]
    rng = np.random.default_rng(seed)
    while len(starts) < max(restarts, 9):
        u = rng.normal(size=3)
        v = rng.normal(size=3)
        starts.append((u / np.linalg.norm(u), v / np.linalg.norm(v)))

    best = math.inf
    for u0, v0 in starts[:max(restarts, 9)]:
        u, v = u0.copy(), v0.copy()
        lr = 0.1
        f = value(u, v)
        for _ in range(iters):
            gu, gv = grads(u, v)
            gu = gu - (gu @ u) * u
            gv = gv - (gv @ v) * v
            gn = math.sqrt(float(gu @ gu + gv @ gv))
            if gn < 1e-14:
                break
            nu = u - lr * gu
            nv = v - lr * gv
            nu /= np.linalg.norm(nu)
            nv /= np.linalg.norm(nv)
            nf = value(nu, nv)
            if nf < f:
                u, v, f = nu, nv, nf
                lr = min(lr * 1.3, 1.0)
            else:
                lr *= 0.5
                if lr < 1e-12:
                    break
        best = min(best, f)
        if best <= 1e-24:
            break
    return math.sqrt(max(best, 0.0))


def _rodrigues(r):
    theta = np.linalg.norm(r)
    if theta < 1e-12:
        return np.eye(3)
    x, y, z = r / theta
    k = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return np.eye(3) + math.sin(theta) * k + (1.0 - math.cos(theta)) * (k @ k)


def continuous_zmatrix_min(h, restarts=50, seed=0):
    """Minimum penalty over per-qubit SO(3) rotations for an XYZ model:
    squared off-diagonal leakage plus squared violation of the dominant
    non-positive first-slot condition, summed over edges."""
    from scipy.optimize import minimize

    weights = {}
    for (u, v, pu, pv), c in h.two_local.items():
        w = weights.setdefault((u, v), np.zeros(3))
        w["XYZ".index(pu)] += c
    n = h.n_qubits
    edges = [(u, v, np.diag(w)) for (u, v), w in weights.items()]

    def penalty(x):
        mats = [_rodrigues(x[3 * i:3 * i + 3]) for i in range(n)]
        total = 0.0
        for u, v, wd in edges:
            m = mats[u] @ wd @ mats[v].T
            off = m - np.diag(np.diag(m))
            total += float(np.sum(off * off))
            total += max(0.0, m[0, 0] + abs(m[1, 1])) ** 2
        return total

    rng = np.random.default_rng(seed)
    best = math.inf
    for _ in range(restarts):
        x0 = rng.uniform(-math.pi, math.pi, size=3 * n)
        res = minimize(penalty, x0, method="L-BFGS-B")
        best = min(best, float(res.fun))
        if best < 1e-14:
            break
    return best
