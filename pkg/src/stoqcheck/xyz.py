"""Constructive stoquasticity decision for XYZ Heisenberg Hamiltonians.

Single-qubit Cliffords act on the diagonal edge weights as signed
permutations of the axes.  The pipeline quotients out clusters rigidly
locked by rank>1 edges, reduces the permutation choice on the remaining
labelled multigraph to an exactly-satisfiable Ising instance, and then
fixes the per-qubit signs with one more Ising solve per partitioned
component.  Accepted instances return a verified per-qubit assignment.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .pauli import TOLERANCE, Hamiltonian, ModelError, SignedPermutation

PERMS = tuple(itertools.permutations(range(3)))


def _parity(perm):
    inv = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def _inv_image(perm, slot):
    return perm.index(slot)


@dataclass(frozen=True)
class WeightedInteractionGraph:
    """Qubit graph with a diagonal (XX, YY, ZZ) weight per edge."""

    n: int
    edges: dict  # (u, v) with u < v -> (wx, wy, wz)


def build_graph(h):
    """Interaction graph of a pure XYZ model; anything else is a model error."""
    if h.one_local:
        (q, p), _ = next(iter(h.one_local.items()))
        raise ModelError(f"1-local term {p}@{q} present; not an XYZ model")
    edges = {}
    for (u, v, pu, pv), c in h.two_local.items():
        if pu != pv:
            raise ModelError(f"off-diagonal coupling {pu}@{u} {pv}@{v}; "
                             "not an XYZ model")
        w = edges.setdefault((u, v), [0.0, 0.0, 0.0])
        w["XYZ".index(pu)] += c
    return WeightedInteractionGraph(
        h.n_qubits, {e: tuple(w) for e, w in edges.items() if any(w)})


def weight_rank(w, tol=TOLERANCE):
    return sum(1 for x in w if abs(x) > tol)


@dataclass(frozen=True)
class RankComponent:
    """Vertices locked together by rank>1 edges, with the axis permutations
    that keep every internal weight's first slot dominant in magnitude."""

    id: int
    vertices: frozenset
    admissible: tuple  # sorted tuple of permutations


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def rank_components(g, tol=TOLERANCE):
    """Union-find over rank>1 edges; every vertex lands in exactly one
    component, singletons included."""
    uf = _UnionFind(g.n)
    for (u, v), w in g.edges.items():
        if weight_rank(w, tol) > 1:
            uf.union(u, v)
    members = {}
    for v in range(g.n):
        members.setdefault(uf.find(v), []).append(v)
    comps = []
    for cid, root in enumerate(sorted(members)):
        verts = frozenset(members[root])
        internal = [w for (a, b), w in g.edges.items()
                    if a in verts and b in verts and weight_rank(w, tol) > 1]
        admissible = tuple(
            perm for perm in PERMS
            if all(w[_inv_image(perm, 0)] ** 2 >= w[_inv_image(perm, 1)] ** 2
                   for w in internal))
        comps.append(RankComponent(cid, verts, admissible))
    return comps


@dataclass(frozen=True)
class QuotientEdge:
    a: int
    b: int
    label: int          # axis index 0..2 of the only nonzero weight entry
    source: tuple       # originating interaction edge


@dataclass(frozen=True)
class QuotientGraph:
    components: tuple
    comp_of: dict       # vertex -> component id
    edges: tuple        # QuotientEdge, parallel edges and self-loops allowed


def build_quotient(g, comps, tol=TOLERANCE):
    comp_of = {v: c.id for c in comps for v in c.vertices}
    q_edges = []
    for (u, v), w in sorted(g.edges.items()):
        if weight_rank(w, tol) != 1:
            continue
        label = max(range(3), key=lambda i: abs(w[i]))
        a, b = comp_of[u], comp_of[v]
        q_edges.append(QuotientEdge(min(a, b), max(a, b), label, (u, v)))
    return QuotientGraph(tuple(comps), comp_of, tuple(q_edges))


def quotient_labels(q):
    """Incident label set per quotient vertex (self-loops count once)."""
    labels = {c.id: set() for c in q.components}
    for e in q.edges:
        labels[e.a].add(e.label)
        labels[e.b].add(e.label)
    return labels


def label_check(q):
    """Vertex incident to three distinct labels, or None when all pass."""
    for cid, labs in sorted(quotient_labels(q).items()):
        if len(labs) >= 3:
            return cid
    return None


@dataclass(frozen=True)
class HeterogeneousQuotientGraph:
    vertices: tuple
    edges: tuple        # (a, b, label) with a <= b; self-loops allowed
    kind: dict          # vertex -> frozenset of its two labels


@dataclass(frozen=True)
class SingleLabelCluster:
    """Marker for a quotient graph that is entirely one label."""

    label_of: dict      # vertex -> its single incident label


def build_heterogeneous(q):
    """Drop single-label clusters, cliquing their boundaries (self-loops
    included) with the cluster label; flags an all-single-label graph."""
    labels = quotient_labels(q)
    multi = {cid for cid, labs in labels.items() if len(labs) >= 2}
    if not multi and q.edges:
        return SingleLabelCluster(
            {cid: next(iter(labs)) for cid, labs in labels.items() if labs})
    single = {cid for cid, labs in labels.items() if len(labs) == 1}
    uf_ids = sorted(single)
    index = {cid: i for i, cid in enumerate(uf_ids)}
    uf = _UnionFind(len(uf_ids))
    adj = {}
    for e in q.edges:
        adj.setdefault(e.a, set()).add(e.b)
        adj.setdefault(e.b, set()).add(e.a)
        if e.a in single and e.b in single:
            uf.union(index[e.a], index[e.b])
    clusters = {}
    for cid in uf_ids:
        clusters.setdefault(uf.find(index[cid]), []).append(cid)

    het_edges = [(min(e.a, e.b), max(e.a, e.b), e.label)
                 for e in q.edges if e.a in multi and e.b in multi]
    for root in sorted(clusters):
        members = clusters[root]
        label = next(iter(labels[members[0]]))
        boundary = sorted({nb for m in members for nb in adj.get(m, ())
                           if nb in multi})
        for b in boundary:
            het_edges.append((b, b, label))
        for b1, b2 in itertools.combinations(boundary, 2):
            het_edges.append((b1, b2, label))
    kind = {cid: frozenset(labels[cid]) for cid in multi}
    return HeterogeneousQuotientGraph(tuple(sorted(multi)),
                                      tuple(het_edges), kind)


@dataclass(frozen=True)
class IsingInstance:
    """Graph with +-1 edge labels asking for spins with s_u * s_v = label."""

    vertices: tuple
    edges: tuple        # (u, v, sign); u == v allowed


def ising_from_heterogeneous(het):
    """Middle-axis edges joining the two mixed vertex kinds frustrate the
    instance; every other edge is ferromagnetic."""
    kind_xy = frozenset((0, 1))
    kind_yz = frozenset((1, 2))
    edges = []
    for a, b, label in het.edges:
        sign = 1
        if label == 1 and a != b \
                and {het.kind[a], het.kind[b]} == {kind_xy, kind_yz}:
            sign = -1
        edges.append((a, b, sign))
    return IsingInstance(het.vertices, tuple(edges))


def ising_exact_sat(inst):
    """Spanning-forest propagation from the smallest vertex of each
    component; returns the solution pair (sigma, -sigma) or None."""
    adj = {v: [] for v in inst.vertices}
    for u, v, sign in inst.edges:
        if u == v:
            if sign == -1:
                return None
            continue
        adj[u].append((v, sign))
        adj[v].append((u, sign))
    sigma = {}
    for root in sorted(inst.vertices):
        if root in sigma:
            continue
        sigma[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, sign in adj[u]:
                want = sigma[u] * sign
                if v not in sigma:
                    sigma[v] = want
                    queue.append(v)
                elif sigma[v] != want:
                    return None
    return sigma, {v: -s for v, s in sigma.items()}


# Ising spin -> axis permutation, by the two labels the vertex touches.
# The third axis is the one sent to the middle slot.
_TRANSLATION = {
    frozenset((0, 2)): {1: (0, 1, 2), -1: (2, 1, 0)},
    frozenset((0, 1)): {1: (0, 2, 1), -1: (2, 0, 1)},
    frozenset((1, 2)): {1: (1, 0, 2), -1: (1, 2, 0)},
}


def translate_ising(sigma, het, comps):
    """Permutation per heterogeneous vertex from an Ising solution; None
    when any assigned permutation is inadmissible for its component."""
    out = {}
    for cid in het.vertices:
        perm = _TRANSLATION[het.kind[cid]][sigma[cid]]
        if perm not in comps[cid].admissible:
            return None
        out[cid] = (perm,)
    return out


def extend_assignment(base, q, comps):
    """Extend a heterogeneous assignment over the single-label clusters.

    Every boundary permutation agrees on the cluster label's image, so the
    cluster vertices may carry either of the two permutations with that
    image, filtered by admissibility.  None when some vertex has no option.
    """
    labels = quotient_labels(q)
    out = dict(base)
    single = {cid for cid, labs in labels.items() if len(labs) == 1}
    adj = {}
    for e in q.edges:
        adj.setdefault(e.a, set()).add(e.b)
        adj.setdefault(e.b, set()).add(e.a)
    uf_ids = sorted(single)
    index = {cid: i for i, cid in enumerate(uf_ids)}
    uf = _UnionFind(len(uf_ids))
    for e in q.edges:
        if e.a in single and e.b in single:
            uf.union(index[e.a], index[e.b])
    clusters = {}
    for cid in uf_ids:
        clusters.setdefault(uf.find(index[cid]), []).append(cid)
    for root in sorted(clusters):
        members = sorted(clusters[root])
        label = next(iter(labels[members[0]]))
        boundary = sorted({nb for m in members for nb in adj.get(m, ())
                           if nb in base})
        anchor = base[boundary[0]][0]
        image = anchor[label]
        pair = tuple(sorted(p for p in PERMS if p[label] == image))
        for m in members:
            opts = tuple(p for p in pair if p in comps[m].admissible)
            if not opts:
                return None
            out[m] = opts
    return out


def single_label_assignments(q, comps, label_of):
    """The two candidate assignments when the whole quotient graph carries
    one label: send it to the first slot, or to the last."""
    out = []
    for slot in (0, 2):
        a = {}
        ok = True
        for cid, label in sorted(label_of.items()):
            opts = tuple(sorted(p for p in comps[cid].admissible
                                if p[label] == slot))
            if not opts:
                ok = False
                break
            a[cid] = opts
        out.append(a if ok else None)
    return out


def partition_graph(g, q, assignment, tol=TOLERANCE):
    """Remove rank-1 edges whose label maps to the last slot under the
    assignment; what remains groups the vertices whose signs interact.
    Quotient edges outside the assignment's reach are left untouched."""
    removed = set()
    for e in q.edges:
        if e.a in assignment:
            perm = assignment[e.a][0]
        elif e.b in assignment:
            perm = assignment[e.b][0]
        else:
            continue
        image = perm[e.label]
        assert image != 1, "assignment maps an edge label to the middle slot"
        if image == 2:
            removed.add(e.source)
    edges = {e: w for e, w in g.edges.items() if e not in removed}
    return WeightedInteractionGraph(g.n, edges)


def _perm_classes(options):
    """Group a vertex's permutation options by the axis sent to slot 0;
    the sign-fixing Ising instance depends only on that axis."""
    classes = {}
    for p in options:
        classes.setdefault(_inv_image(p, 0), []).append(p)
    return [min(ps) for _, ps in sorted(classes.items())]


def solve_signs(g, q, assignment, vertices=None, tol=TOLERANCE):
    """Choose per-vertex signed permutations realising the assignment.

    Works per connected component of the partitioned graph; within one,
    the permutation representatives fix the first-slot entries of every
    edge weight and an exactly-satisfiable Ising instance provides signs
    making them non-positive.
    Returns {vertex: SignedPermutation} or None.
    """
    part = partition_graph(g, q, assignment, tol)
    verts = sorted(vertices) if vertices is not None else list(range(g.n))
    vset = set(verts)
    block_edges = {e: w for e, w in part.edges.items() if e[0] in vset}
    uf = _UnionFind(g.n)
    for (u, v) in block_edges:
        uf.union(u, v)
    groups = {}
    for v in verts:
        groups.setdefault(uf.find(v), []).append(v)
    edges_of = {}
    for e, w in block_edges.items():
        edges_of.setdefault(uf.find(e[0]), []).append((e, w))

    solution = {}
    for root in sorted(groups):
        members = sorted(groups[root])
        cids = sorted({q.comp_of[v] for v in members})
        per_cid = []
        ambiguous = 0
        for cid in cids:
            classes = _perm_classes(assignment[cid])
            ambiguous += len(classes) > 1
            per_cid.append((cid, classes))
        assert ambiguous <= 1, "several sign-ambiguous components share a block"

        solved = None
        for combo in itertools.product(*(cl for _, cl in per_cid)):
            perm_of = {cid: perm for (cid, _), perm in zip(per_cid, combo)}
            iedges = []
            for (u, v), w in edges_of.get(root, ()):
                pu = perm_of[q.comp_of[u]]
                pv = perm_of[q.comp_of[v]]
                m = _inv_image(pu, 0)
                if _inv_image(pv, 0) != m:
                    continue
                val = w[m]
                if abs(val) > tol:
                    iedges.append((u, v, -1 if val > 0 else 1))
            sat = ising_exact_sat(IsingInstance(tuple(members), tuple(iedges)))
            if sat is None:
                continue
            sigma = sat[0]
            solved = {}
            for v in members:
                perm = perm_of[q.comp_of[v]]
                delta = sigma[v]
                solved[v] = SignedPermutation(
                    perm, (delta, 1, delta * _parity(perm)))
            break
        if solved is None:
            return None
        solution.update(solved)
    return solution


@dataclass(frozen=True)
class XyzDecision:
    stoquastic: bool
    solution: dict | None
    trace: tuple


def transformed_weight(w, pu, pv):
    """Dense transformed coupling of a diagonal weight."""
    return pu.matrix() @ np.diag(w) @ pv.matrix().T


def _verify(g, solution):
    for (u, v), w in g.edges.items():
        m = transformed_weight(w, solution[u], solution[v])
        off = m - np.diag(np.diag(m))
        if np.abs(off).max() != 0.0:
            return False
        if not (m[0, 0] * m[0, 0] >= m[1, 1] * m[1, 1] and m[0, 0] <= 0.0):
            return False
    return all(sp.det == 1 for sp in solution.values())


def decide_xyz(h, tol=TOLERANCE):
    """Full decision pipeline; accepted instances carry a verified solution."""
    g = build_graph(h)
    trace = []
    comps = rank_components(g, tol)
    q = build_quotient(g, comps, tol)
    trace.append({"step_id": 2, "action": "rank_components",
                  "detail": {"count": len(comps),
                             "admissible_sizes": [len(c.admissible)
                                                  for c in comps]}})
    trace.append({"step_id": 3, "action": "quotient",
                  "detail": {"edges": len(q.edges)}})

    offender = label_check(q)
    if offender is not None:
        trace.append({"step_id": 4, "action": "reject",
                      "detail": {"component": offender,
                                 "reason": "three distinct labels"}})
        return XyzDecision(False, None, tuple(trace))
    trace.append({"step_id": 4, "action": "pass", "detail": {}})

    # connected pieces of the interaction graph decide independently
    uf = _UnionFind(g.n)
    for (u, v) in g.edges:
        uf.union(u, v)
    blocks = {}
    for v in range(g.n):
        blocks.setdefault(uf.find(v), []).append(v)

    solution = {}
    for root in sorted(blocks):
        verts = sorted(blocks[root])
        vset = set(verts)
        cids = sorted({q.comp_of[v] for v in verts})
        cset = set(cids)
        sub_q = QuotientGraph(q.components, q.comp_of,
                              tuple(e for e in q.edges if e.a in cset))
        candidates = []
        if not sub_q.edges:
            # a lone rigid cluster: the label machinery is vacuous
            cid = cids[0]
            if comps[cid].admissible:
                candidates.append(("A", {cid: tuple(comps[cid].admissible)}))
            trace.append({"step_id": 5, "action": "isolated_cluster",
                          "detail": {"component": cid}})
        else:
            het = build_heterogeneous(sub_q)
            if isinstance(het, SingleLabelCluster):
                trace.append({"step_id": 5, "action": "single_label_cluster",
                              "detail": {"labels": sorted(
                                  set(het.label_of.values()))}})
                a1, a2 = single_label_assignments(sub_q, comps, het.label_of)
                if a1 is not None:
                    candidates.append(("A1", a1))
                if a2 is not None:
                    candidates.append(("A2", a2))
                trace.append({"step_id": 9, "action": "edge_case_candidates",
                              "detail": {"survivors": [n for n, _ in candidates]}})
            else:
                trace.append({"step_id": 5, "action": "heterogeneous",
                              "detail": {"vertices": len(het.vertices),
                                         "edges": len(het.edges)}})
                inst = ising_from_heterogeneous(het)
                trace.append({"step_id": 6, "action": "ising",
                              "detail": {"edges": len(inst.edges)}})
                sat = ising_exact_sat(inst)
                if sat is None:
                    trace.append({"step_id": 7, "action": "reject",
                                  "detail": {"reason": "label Ising instance "
                                             "unsatisfiable"}})
                    return XyzDecision(False, None, tuple(trace))
                trace.append({"step_id": 7, "action": "pass", "detail": {}})
                for name, sigma in (("A1", sat[0]), ("A2", sat[1])):
                    base = translate_ising(sigma, het, comps)
                    if base is None:
                        continue
                    full = extend_assignment(base, sub_q, comps)
                    if full is not None:
                        candidates.append((name, full))
                trace.append({"step_id": 9, "action": "candidates",
                              "detail": {"survivors": [n for n, _ in candidates]}})
        if not candidates:
            trace.append({"step_id": 9, "action": "reject",
                          "detail": {"reason": "no compatible permutation "
                                     "assignment"}})
            return XyzDecision(False, None, tuple(trace))

        solved = None
        for name, assignment in candidates:
            got = solve_signs(g, q, assignment, vertices=verts, tol=tol)
            if got is not None:
                solved = (name, got)
                break
        if solved is None:
            trace.append({"step_id": 14, "action": "reject",
                          "detail": {"reason": "no sign assignment",
                                     "block": verts[0]}})
            return XyzDecision(False, None, tuple(trace))
        trace.append({"step_id": 13, "action": "signs",
                      "detail": {"block": verts[0], "candidate": solved[0]}})
        solution.update(solved[1])

    for v in range(g.n):
        solution.setdefault(v, SignedPermutation.identity())
    assert _verify(g, solution), "internal verification failed"
    trace.append({"step_id": 14, "action": "accept", "detail": {}})
    return XyzDecision(True, solution, tuple(trace))


def solution_wire(solution):
    """JSON-ready per-vertex {perm: 1-based images, signs} map."""
    return {str(v): {"perm": [i + 1 for i in sp.perm], "signs": list(sp.signs)}
            for v, sp in sorted(solution.items())}
