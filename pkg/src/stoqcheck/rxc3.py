"""Restricted exact cover by 3-sets, and its reduction to the question of
making a Hamiltonian real by single-qubit Clifford rotations.

Each element owns a pool (X, Y, Z) of Pauli operators; every 3-set draws one
operator per member and contributes the three pairwise couplings.  The
restriction (every element in exactly three sets) drains each pool exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .pauli import Hamiltonian, SearchCapError
from .oracle import search_pauli_permutations

COVER_CAP = 24


@dataclass(frozen=True)
class Rxc3Instance:
    """3N elements and 3-element subsets, each element in exactly three."""

    n_elements: int
    subsets: tuple

    def __post_init__(self):
        if self.n_elements % 3 != 0 or self.n_elements <= 0:
            raise ValueError("element count must be a positive multiple of 3")
        counts = [0] * self.n_elements
        for sub in self.subsets:
            if len(sub) != 3 or len(set(sub)) != 3:
                raise ValueError(f"subset {sub} is not a 3-element set")
            for e in sub:
                if not (0 <= e < self.n_elements):
                    raise ValueError(f"element {e} out of range")
                counts[e] += 1
        bad = [e for e, c in enumerate(counts) if c != 3]
        if bad:
            raise ValueError(f"elements {bad} do not appear in exactly three subsets")


class PauliPool:
    """Per-element queues of remaining Pauli labels, drained X then Y then Z."""

    def __init__(self, n_elements):
        self.remaining = {e: ["X", "Y", "Z"] for e in range(n_elements)}

    def take(self, element):
        if not self.remaining[element]:
            raise RuntimeError(f"pool of element {element} exhausted")
        return self.remaining[element].pop(0)

    def all_empty(self):
        return all(not r for r in self.remaining.values())


def hamiltonian_from_rxc3(inst, return_pools=False):
    """One qubit per element; subsets processed in input order, pools drawn
    in (X, Y, Z) order, three couplings per subset."""
    pools = PauliPool(inst.n_elements)
    terms = []
    for (i, j, k) in inst.subsets:
        si, sj, sk = pools.take(i), pools.take(j), pools.take(k)
        terms.append((1.0, ((si, i), (sj, j))))
        terms.append((1.0, ((sj, j), (sk, k))))
        terms.append((1.0, ((si, i), (sk, k))))
    h = Hamiltonian.from_terms(inst.n_elements, terms)
    return (h, pools) if return_pools else h


def exact_cover(inst):
    """Backtracking search for a subcollection covering every element once."""
    if inst.n_elements > COVER_CAP:
        raise SearchCapError(f"cover search capped at {COVER_CAP} elements")
    by_element = {e: [] for e in range(inst.n_elements)}
    for idx, sub in enumerate(inst.subsets):
        for e in sub:
            by_element[e].append(idx)
    covered = [False] * inst.n_elements
    picked = []

    def dfs():
        try:
            e = covered.index(False)
        except ValueError:
            return True
        for idx in by_element[e]:
            sub = inst.subsets[idx]
            if any(covered[x] for x in sub):
                continue
            for x in sub:
                covered[x] = True
            picked.append(idx)
            if dfs():
                return True
            picked.pop()
            for x in sub:
                covered[x] = False
        return False

    if dfs():
        return tuple(picked)
    return None


def exact_cover_exists(inst):
    return exact_cover(inst) is not None


def clifford_realness(h, cap=12):
    """Whether some per-qubit Pauli permutation gives every term an even Y
    count; exhaustive over the 6^n permutations with pruning."""
    if h.n_qubits > cap:
        raise SearchCapError(f"realness search capped at {cap} qubits")
    return search_pauli_permutations(h, cap=cap) is not None


def paper_instance():
    """The 6-element worked example: six subsets, one repeated."""
    return Rxc3Instance(6, (
        (0, 1, 2),
        (2, 3, 4),
        (1, 2, 4),
        (0, 3, 5),
        (1, 4, 5),
        (0, 3, 5),
    ))


def random_rxc3(n_elements, seed):
    """Seeded random instance: three slots per element shuffled into triples
    of distinct elements, retried until valid."""
    if n_elements % 3 != 0 or n_elements <= 0:
        raise ValueError("element count must be a positive multiple of 3")
    rng = random.Random(seed)
    while True:
        slots = [e for e in range(n_elements) for _ in range(3)]
        rng.shuffle(slots)
        subsets = []
        ok = True
        for i in range(0, len(slots), 3):
            tri = slots[i:i + 3]
            if len(set(tri)) != 3:
                ok = False
                break
            subsets.append(tuple(tri))
        if ok:
            return Rxc3Instance(n_elements, tuple(subsets))


def parse_rxc3(text):
    """Instance file: line ``elements <count>`` then ``set a b c`` lines with
    0-based indices; ``#`` comments and blank lines are ignored."""
    n_elements = None
    subsets = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "elements":
            if n_elements is not None:
                raise ValueError(f"line {ln}: duplicate elements line")
            if len(parts) != 2:
                raise ValueError(f"line {ln}: expected 'elements <count>'")
            n_elements = int(parts[1])
        elif parts[0] == "set":
            if len(parts) != 4:
                raise ValueError(f"line {ln}: expected 'set a b c'")
            subsets.append(tuple(int(x) for x in parts[1:]))
        else:
            raise ValueError(f"line {ln}: unknown directive {parts[0]!r}")
    if n_elements is None:
        raise ValueError("missing 'elements' line")
    return Rxc3Instance(n_elements, tuple(subsets))
