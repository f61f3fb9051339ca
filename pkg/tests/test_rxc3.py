"""Exact cover by 3-sets and its realness reduction."""

import pytest

from stoqcheck import (
    Hamiltonian,
    Rxc3Instance,
    clifford_realness,
    exact_cover,
    exact_cover_exists,
    hamiltonian_from_rxc3,
    parse_rxc3,
)
from stoqcheck.rxc3 import paper_instance, random_rxc3


def test_instance_validation():
    with pytest.raises(ValueError):
        Rxc3Instance(6, ((0, 1, 2),) * 2)        # elements short of 3 sets
    with pytest.raises(ValueError):
        Rxc3Instance(6, ((0, 0, 1),) * 6)        # repeated member
    with pytest.raises(ValueError):
        Rxc3Instance(5, ())                      # not a multiple of 3
    # three identical subsets on 3 elements is the smallest valid instance
    Rxc3Instance(3, ((0, 1, 2),) * 3)


def test_worked_example_reduction():
    """The fixed ordering contract reproduces the worked 6-element
    reduction term by term, including the operator order inside subsets."""
    h = hamiltonian_from_rxc3(paper_instance())
    got = [tuple(ops) for _, ops in h.terms()]
    expect = [
        (("X", 0), ("X", 1)), (("X", 1), ("X", 2)), (("X", 0), ("X", 2)),
        (("Y", 2), ("X", 3)), (("X", 3), ("X", 4)), (("Y", 2), ("X", 4)),
        (("Y", 1), ("Z", 2)), (("Z", 2), ("Y", 4)), (("Y", 1), ("Y", 4)),
        (("Y", 0), ("Y", 3)), (("Y", 3), ("X", 5)), (("Y", 0), ("X", 5)),
        (("Z", 1), ("Z", 4)), (("Z", 4), ("Y", 5)), (("Z", 1), ("Y", 5)),
        (("Z", 0), ("Z", 3)), (("Z", 3), ("Z", 5)), (("Z", 0), ("Z", 5)),
    ]
    assert got == expect
    assert all(c == 1.0 for c, _ in h.terms())


def test_pools_drain_exactly():
    _, pools = hamiltonian_from_rxc3(paper_instance(), return_pools=True)
    assert pools.all_empty()


def test_triple_duplicate_instance():
    inst = Rxc3Instance(3, ((0, 1, 2),) * 3)
    h = hamiltonian_from_rxc3(inst)
    # forced by pool order: an X triangle, then Y, then Z
    labels = {p for _, ops in h.terms() for p, _ in ops}
    assert labels == {"X", "Y", "Z"}
    assert len(list(h.terms())) == 9
    assert exact_cover_exists(inst)
    assert clifford_realness(h)


def test_worked_example_cover():
    cover = exact_cover(paper_instance())
    assert cover is not None
    subsets = [paper_instance().subsets[i] for i in cover]
    assert sorted(subsets) == [(0, 3, 5), (1, 2, 4)]


def test_uncoverable_instance():
    # every pair of subsets overlaps, so no two of them cover 6 elements
    inst = Rxc3Instance(6, (
        (0, 1, 3), (1, 2, 4), (0, 2, 5),
        (0, 3, 4), (1, 4, 5), (2, 3, 5),
    ))
    assert not exact_cover_exists(inst)
    assert not clifford_realness(hamiltonian_from_rxc3(inst))


def test_reduction_faithfulness():
    seen = {True: 0, False: 0}
    for seed in range(150):
        inst = random_rxc3(6, seed)
        has_cover = exact_cover_exists(inst)
        seen[has_cover] += 1
        assert has_cover == clifford_realness(hamiltonian_from_rxc3(inst)), seed
    assert min(seen.values()) > 10


def test_single_y_pair_is_curable():
    h = Hamiltonian.from_terms(2, [(1.0, (("Y", 0), ("Z", 1)))])
    assert clifford_realness(h)


def test_parse_rxc3_roundtrip():
    text = """\
# the worked instance
elements 6
set 0 1 2
set 2 3 4
set 1 2 4
set 0 3 5
set 1 4 5
set 0 3 5
"""
    inst = parse_rxc3(text)
    assert inst == paper_instance()
    with pytest.raises(ValueError):
        parse_rxc3("set 0 1 2\n")
    with pytest.raises(ValueError):
        parse_rxc3("elements 6\nfrob 1 2 3\n")


def test_random_rxc3_is_valid_and_deterministic():
    a = random_rxc3(9, 4)
    b = random_rxc3(9, 4)
    assert a == b
    assert len(a.subsets) == 9
