"""Fixed-basis membership in the cone of 2-local symmetric Z-matrices.

The greedy strategy is exact here: per edge, the minimal 1-local -X budget
needed to absorb the edge's XZ/ZX couplings is a closed form, the budgets
decouple across edges, and using as little of each vertex's budget as
possible per edge is optimal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .pauli import TOLERANCE, EdgeData, Hamiltonian, is_real_fixed_basis
from .two_qubit import decide_stoquastic_2q


@dataclass(frozen=True)
class Decomposition:
    """Per-edge Z-matrix terms plus non-positive 1-local leftovers.

    ``leftovers`` maps each vertex to its residual {pauli: coefficient};
    X residuals are exact rationals (floats are exact rationals, and the
    budget bookkeeping must re-sum to the input without rounding).
    """

    terms: list
    leftovers: dict

    def resum(self):
        """Exact coefficient map of terms + leftovers, for audits."""
        total = {}

        def add(key, val):
            total[key] = total.get(key, Fraction(0)) + val
            if total[key] == 0:
                del total[key]

        for (u, v), e in self.terms:
            for i, pu in enumerate("XYZ"):
                for j, pv in enumerate("XYZ"):
                    if e.beta[i, j] != 0.0:
                        add((u, v, pu, pv), Fraction(e.beta[i, j]))
            for i, pp in enumerate("XYZ"):
                if e.s_vec[i] != 0.0:
                    add((u, pp), Fraction(e.s_vec[i]))
                if e.p_vec[i] != 0.0:
                    add((v, pp), Fraction(e.p_vec[i]))
        for v, paulis in self.leftovers.items():
            for pp, c in paulis.items():
                if c != 0:
                    add((v, pp), c if isinstance(c, Fraction) else Fraction(c))
        return total


@dataclass(frozen=True)
class Rejection:
    reason: str
    edge: tuple | None = None
    vertex: int | None = None


def cone_membership(h, tol=TOLERANCE):
    """Decompose into per-edge symmetric Z-matrices or reject.

    A real input can only belong to the cone when every 1-local X
    coefficient is non-positive; those coefficients are the budgets the
    edges draw from.  Each edge demands exactly |a_XZ| from its row vertex
    and |a_ZX| from its column vertex, and needs a_XX <= -|a_YY| outright.
    """
    if not is_real_fixed_basis(h, tol):
        for (q, p), c in h.one_local.items():
            if p == "Y" and abs(c) > tol:
                return Rejection("odd-Y 1-local term present", vertex=q)
        for (u, v, pu, pv), c in h.two_local.items():
            if (pu == "Y") != (pv == "Y") and abs(c) > tol:
                return Rejection("odd-Y coupling present", edge=(u, v))

    budget = {}
    for v in range(h.n_qubits):
        x = h.one_local.get((v, "X"), 0.0)
        if x > tol:
            return Rejection("positive 1-local X coefficient", vertex=v)
        budget[v] = -Fraction(x)

    terms = []
    z_taken = set()
    for (u, v) in h.edges():
        beta = h.edge_beta(u, v)
        if beta[0, 0] > -abs(beta[1, 1]) + tol:
            return Rejection("XX coupling exceeds -|YY| on edge", edge=(u, v))
        demand_u = Fraction(abs(beta[0, 2]))
        demand_v = Fraction(abs(beta[2, 0]))
        # boundary deficits within the module tolerance count as satisfied,
        # so a leftover may come out positive by at most tol
        budget[u] -= demand_u
        if budget[u] < -tol:
            return Rejection("X budget exhausted", edge=(u, v), vertex=u)
        budget[v] -= demand_v
        if budget[v] < -tol:
            return Rejection("X budget exhausted", edge=(u, v), vertex=v)
        s = np.array([-float(demand_u) if demand_u else 0.0, 0.0,
                      0.0 if u in z_taken else h.one_local.get((u, "Z"), 0.0)])
        p = np.array([-float(demand_v) if demand_v else 0.0, 0.0,
                      0.0 if v in z_taken else h.one_local.get((v, "Z"), 0.0)])
        z_taken.update((u, v))
        terms.append(((u, v), EdgeData(beta, s, p)))

    leftovers = {}
    for v in range(h.n_qubits):
        left = {}
        if h.one_local.get((v, "X"), 0.0) != 0.0 or budget[v] != 0:
            left["X"] = -budget[v]
        if v not in z_taken:
            z = h.one_local.get((v, "Z"), 0.0)
            if z != 0.0:
                left["Z"] = Fraction(z)
        if left:
            leftovers[v] = left
    return Decomposition(terms, leftovers)


@dataclass(frozen=True)
class BipartiteVerdict:
    applicable: bool
    stoquastic: bool | None
    caveat: str
    coloring: dict | None


def two_coloring(n, edges):
    """BFS 2-coloring; None when an odd cycle exists."""
    color = {}
    adj = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    for root in sorted(adj):
        if root in color:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    for v in range(n):
        color.setdefault(v, 0)
    return color


def uniform_bipartite_stoquastic(h_edge, edges, tol=TOLERANCE):
    """Lift the two-qubit decision to a graph carrying the same pair term
    on every edge, oriented across a bipartition.

    Only applicable on bipartite graphs.  A positive answer is conclusive;
    a negative one only rules out basis changes acting identically on all
    qubits of a partition class.
    """
    n = max((max(u, v) for u, v in edges), default=-1) + 1
    color = two_coloring(n, edges)
    if color is None:
        return BipartiteVerdict(False, None, "graph is not bipartite", None)
    decision = decide_stoquastic_2q(h_edge, tol)
    caveat = ("positive verdicts lift edge-by-edge; a negative verdict only "
              "excludes basis changes acting identically within each "
              "partition class")
    return BipartiteVerdict(True, decision.stoquastic, caveat, color)


def uniform_edge_data(h):
    """The common pair term of a Hamiltonian whose edges are all identical.

    Raises when any edge differs (couplings or endpoint 1-local vectors).
    """
    edges = h.edges()
    if not edges:
        raise ValueError("Hamiltonian has no two-local terms")
    ref = None
    for (u, v) in edges:
        e = EdgeData(h.edge_beta(u, v), h.one_local_vector(u), h.one_local_vector(v))
        if ref is None:
            ref = e
        elif not (np.array_equal(ref.beta, e.beta)
                  and np.array_equal(ref.s_vec, e.s_vec)
                  and np.array_equal(ref.p_vec, e.p_vec)):
            raise ValueError(f"edge {(u, v)} differs from the common pair term")
    return ref
