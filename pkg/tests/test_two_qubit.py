"""Two-qubit analysis: invariants, standard form, decision, region scan."""

import math

import numpy as np
import pytest

from conftest import random_edge, random_rotation

from stoqcheck import (
    EdgeData,
    SpecialCase,
    apply_rotations,
    decide_stoquastic_2q,
    field_ising_edge,
    is_real_locally,
    is_z_matrix_2q,
    region_scan,
    scan_to_csv,
    standard_form,
    triple_invariants,
)
from stoqcheck.oracle import y_residual_min
from stoqcheck.two_qubit import _variants


def oracle_grid_feasible(sf, n=181, tol=1e-9):
    """Brute feasibility over the X-Z rotation family applied to the
    standard form, including the axis-relabelled variants.  Independent of
    the interval analysis: it just sweeps both angles."""
    thetas = np.linspace(-math.pi, math.pi, n, endpoint=False)
    cs, sn = np.cos(thetas), np.sin(thetas)
    cl, cr = np.meshgrid(cs, cs, indexing="ij")
    sl, sr = np.meshgrid(sn, sn, indexing="ij")
    for _, _, _, bv, sv, pv in _variants(sf, tol):
        b1, b2, b3 = bv[0, 0], bv[1, 1], bv[2, 2]
        ok = ((b1 * cl * cr + b3 * sl * sr <= -abs(b2) + tol)
              & (pv[0] * cr + pv[2] * sr
                 <= -np.abs(b3 * cl * sr - b1 * sl * cr) + tol)
              & (sv[0] * cl + sv[2] * sl
                 <= -np.abs(b3 * sl * cr - b1 * cl * sr) + tol))
        if ok.any():
            return True
    return False


# ---------------------------------------------------------------- invariants

def test_invariants_vanish_for_real_data():
    rng = np.random.default_rng(0)
    for _ in range(20):
        e = random_edge(rng, real=True)
        assert all(abs(x) < 1e-12 for x in triple_invariants(e).as_tuple())


def test_invariant_hand_value():
    e = EdgeData(np.diag([1.0, 2.0, 3.0]), [1.0, 1.0, 1.0], np.zeros(3))
    inv = triple_invariants(e)
    # det [[1,1,1],[1,4,9],[1,16,81]] = 120
    assert math.isclose(inv.i10, 120.0, rel_tol=1e-12)
    assert all(abs(x) < 1e-12 for x in inv.as_tuple()[1:])


def test_invariants_vanish_with_zero_coupling():
    rng = np.random.default_rng(1)
    e = EdgeData(np.zeros((3, 3)), rng.uniform(-2, 2, 3), rng.uniform(-2, 2, 3))
    assert all(x == 0.0 for x in triple_invariants(e).as_tuple())


def test_invariants_rotation_invariant():
    rng = np.random.default_rng(2)
    for _ in range(40):
        e = random_edge(rng)
        base = np.array(triple_invariants(e).as_tuple())
        rot = apply_rotations(e, random_rotation(rng), random_rotation(rng))
        after = np.array(triple_invariants(rot).as_tuple())
        scale = np.maximum(np.abs(base), 1.0)
        assert (np.abs(after - base) / scale).max() < 1e-9


def test_is_real_locally_examples():
    assert is_real_locally(EdgeData(np.diag([1.0, 0.0, 0.0]),
                                    [0.0, 1.0, 0.0], np.zeros(3)))
    assert not is_real_locally(EdgeData(np.diag([1.0, 2.0, 3.0]),
                                        [1.0, 1.0, 1.0], np.zeros(3)))
    rng = np.random.default_rng(3)
    assert is_real_locally(random_edge(rng, real=True))


def test_realness_forward_direction():
    """Rotated real data stays detected, and the standard-form construction
    recovers a realising rotation pair."""
    rng = np.random.default_rng(4)
    for _ in range(100):
        e0 = random_edge(rng, real=True)
        e = apply_rotations(e0, random_rotation(rng), random_rotation(rng))
        assert is_real_locally(e)
        sf = standard_form(e)
        out = apply_rotations(e, sf.left_rot, sf.right_rot)
        y = max(abs(out.beta[0, 1]), abs(out.beta[1, 0]), abs(out.beta[1, 2]),
                abs(out.beta[2, 1]), abs(out.s_vec[1]), abs(out.p_vec[1]))
        assert y <= 1e-9 * max(1.0, np.abs(e.beta).max())


def test_realness_reverse_direction():
    """Data with a nonzero invariant admits no real form: the direct
    minimisation of the odd-Y residual stays bounded away from zero."""
    rng = np.random.default_rng(5)
    done = 0
    while done < 100:
        e = random_edge(rng)
        if is_real_locally(e):
            continue
        if max(abs(x) for x in triple_invariants(e).as_tuple()) < 1e-3:
            continue
        assert y_residual_min(e, restarts=20, seed=done) > 1e-6
        done += 1


def test_singular_span_property():
    """For real data the 1-local vectors avoid one matched singular
    direction on each side (checked through the constructed form)."""
    rng = np.random.default_rng(6)
    for _ in range(50):
        e0 = random_edge(rng, real=True)
        e = apply_rotations(e0, random_rotation(rng), random_rotation(rng))
        sf = standard_form(e)
        assert abs(sf.left_rot.m[1] @ e.s_vec) <= 1e-8 * max(1.0, np.linalg.norm(e.s_vec))
        assert abs(sf.right_rot.m[1] @ e.p_vec) <= 1e-8 * max(1.0, np.linalg.norm(e.p_vec))


# -------------------------------------------------------------- standard form

def test_standard_form_special_cases():
    rng = np.random.default_rng(7)
    sf = standard_form(EdgeData(np.diag([3.0, -1.0, 2.0]), np.zeros(3), np.zeros(3)))
    assert sf.special_case is SpecialCase.S_AND_P_ZERO

    sf = standard_form(EdgeData(np.zeros((3, 3)),
                                rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)))
    assert sf.special_case is SpecialCase.BETA_ZERO
    assert sf.s_vec[1] == 0.0 and sf.p_vec[1] == 0.0

    sf = standard_form(EdgeData(np.diag([0.0, 5.0, 0.0]),
                                [1.0, 0.0, 1.0], [0.0, 0.0, 1.0]))
    assert sf.special_case is SpecialCase.LONE_YY_BLOCKED


def test_standard_form_orders_and_normalises():
    rng = np.random.default_rng(8)
    for _ in range(50):
        e0 = random_edge(rng, real=True)
        e = apply_rotations(e0, random_rotation(rng), random_rotation(rng))
        sf = standard_form(e)
        if sf.special_case is not SpecialCase.NONE:
            continue
        b1, b2, b3 = sf.beta_diag
        assert b3 == 1.0
        assert 0.0 <= b1 <= 1.0 + 1e-12
        assert sf.normalization > 0
        # the recorded rotations reproduce the form after scaling
        out = apply_rotations(e, sf.left_rot, sf.right_rot)
        assert np.abs(np.diag(out.beta) / sf.normalization
                      - np.array(sf.beta_diag)).max() < 1e-9


def test_standard_form_rejects_non_real():
    with pytest.raises(ValueError):
        standard_form(EdgeData(np.diag([1.0, 2.0, 3.0]), [1.0, 1.0, 1.0], np.zeros(3)))


def test_standard_form_reroutes_unobstructed_middle_axis():
    # coupling on the middle axis only, 1-local content on one transverse
    # pair: a slot relabelling restores a nonzero last coupling
    sf = standard_form(EdgeData(np.diag([0.0, 5.0, 0.0]),
                                [0.0, 0.0, 2.0], [0.0, 0.0, 3.0]))
    assert sf.special_case is SpecialCase.NONE
    assert sf.beta_diag[2] == 1.0 and abs(sf.beta_diag[1]) < 1e-12


# ------------------------------------------------------------------ decision

def test_decide_field_ising_point():
    d = decide_stoquastic_2q(field_ising_edge(2.0, 0.5, 0.2))
    assert d.stoquastic
    out = apply_rotations(d.standard.edge_data(), d.witness.left_rot,
                          d.witness.right_rot)
    assert is_z_matrix_2q(out)


def test_decide_zmatrix_input_is_immediate():
    e = EdgeData(np.diag([-1.0, -1.0, 0.0]), np.zeros(3), np.zeros(3))
    d = decide_stoquastic_2q(e)
    assert d.stoquastic and d.witness.case_id == "s_and_p_zero"


def test_decide_blocked_case():
    e = EdgeData(np.diag([0.0, 5.0, 0.0]), [1.0, 0.0, 1.0], [0.0, 0.0, 1.0])
    d = decide_stoquastic_2q(e)
    assert not d.stoquastic
    assert d.standard.special_case is SpecialCase.LONE_YY_BLOCKED


def test_decide_non_real_input():
    d = decide_stoquastic_2q(EdgeData(np.diag([1.0, 2.0, 3.0]),
                                      [1.0, 1.0, 1.0], np.zeros(3)))
    assert not d.stoquastic and d.standard is None


def test_witnesses_always_verify():
    rng = np.random.default_rng(9)
    for _ in range(150):
        e = random_edge(rng, real=True)
        d = decide_stoquastic_2q(e)
        if d.stoquastic:
            out = apply_rotations(d.standard.edge_data(), d.witness.left_rot,
                                  d.witness.right_rot)
            assert is_z_matrix_2q(out)


def test_decide_agrees_with_angle_grid_oracle():
    """The interval analysis never refuses an instance the brute angle sweep
    can solve; refusals on both sides agree at the stated resolutions."""
    rng = np.random.default_rng(10)
    both = {True: 0, False: 0}
    for k in range(500):
        e = random_edge(rng, real=True)
        d = decide_stoquastic_2q(e)
        both[d.stoquastic] += 1
        if not d.stoquastic:
            assert d.standard is not None
            assert not oracle_grid_feasible(d.standard), k
    assert min(both.values()) > 50


def test_decide_rotated_inputs():
    rng = np.random.default_rng(11)
    for _ in range(50):
        e0 = random_edge(rng, real=True)
        d0 = decide_stoquastic_2q(e0)
        e = apply_rotations(e0, random_rotation(rng), random_rotation(rng))
        d = decide_stoquastic_2q(e)
        assert d.stoquastic == d0.stoquastic


# --------------------------------------------------------------- region scan

def test_region_scan_shape_and_determinism():
    rows = region_scan((0, 2, 3), (0, 2, 3), (0, 1, 2))
    assert len(rows) == 18
    again = region_scan((0, 2, 3), (0, 2, 3), (0, 1, 2))
    assert rows == again
    assert rows[0].a_x == 0.0 and rows[-1].a_x == 2.0


def test_region_scan_rejects_tiny_grid():
    with pytest.raises(ValueError):
        region_scan((0, 2, 1), (0, 2, 3), (0, 1, 2))


def test_region_scan_known_points():
    rows = region_scan((0, 2, 3), (0, 1, 2), (0, 1, 2))
    table = {(r.a_x, r.a_z, r.a_xx): r for r in rows}
    # pure diagonal coupling with arbitrary XX: sign flips suffice
    assert table[(0.0, 0.0, 0.0)].stoquastic
    assert table[(0.0, 0.0, 1.0)].stoquastic
    # the worked sufficient-condition point
    assert decide_stoquastic_2q(field_ising_edge(2.0, 0.5, 0.2)).stoquastic


def test_scan_csv_format():
    rows = region_scan((0, 2, 2), (0, 2, 2), (0, 1, 2))
    csv = scan_to_csv(rows)
    lines = csv.split("\n")
    assert lines[0] == "aX,aZ,aXX,stoquastic,case_id"
    assert len(lines) == len(rows) + 2 and lines[-1] == ""
    assert all(line.count(",") == 4 for line in lines[1:-1])
    first = lines[1].split(",")
    assert first[3] in ("0", "1")
