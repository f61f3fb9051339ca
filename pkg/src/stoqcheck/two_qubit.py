"""Complete two-qubit stoquasticity analysis.

Pipeline: triple-product invariants decide realness under local rotations;
a determinant-repaired SVD brings the coupling matrix into a diagonal
standard form with the 1-local vectors in the X-Z plane; stoquasticity is
then a feasibility question for a system of two-variable polynomial
inequalities (quadratic in each variable), solved exactly in one variable
and scanned over an adaptive tangent grid in the other.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .pauli import (
    TOLERANCE,
    EdgeData,
    Rotation3,
    SignedPermutation,
    apply_rotations,
    clifford_rotations,
    is_z_matrix_2q,
    rotation_taking,
)

DEFAULT_SAMPLES = 4096
DEFAULT_REFINE_ROUNDS = 2
_REFINE_SITES = 48
_REFINE_SUBDIV = 33


@dataclass(frozen=True)
class TripleInvariants:
    """The six scalar triple products built from the coupling data."""

    i10: float
    i11: float
    i15: float
    i16: float
    i17: float
    i18: float

    def as_tuple(self):
        return (self.i10, self.i11, self.i15, self.i16, self.i17, self.i18)


def _triple(a, b, c):
    return float(np.linalg.det(np.array([a, b, c])))


def triple_invariants(e):
    """Rotation-invariant triple products; all vanish iff the pair can be made real."""
    b, s, p = e.beta, e.s_vec, e.p_vec
    bbt = b @ b.T
    btb = b.T @ b
    return TripleInvariants(
        i10=_triple(s, bbt @ s, bbt @ bbt @ s),
        i11=_triple(p, btb @ p, btb @ btb @ p),
        i15=_triple(s, bbt @ s, b @ p),
        i16=_triple(b.T @ s, p, btb @ p),
        i17=_triple(b.T @ s, btb @ (b.T @ s), p),
        i18=_triple(s, b @ p, bbt @ (b @ p)),
    )


# degree of each invariant in (beta, S, P); the zero threshold scales with
# the input norms raised to these degrees, so large coefficients do not
# produce false negatives.
_DEGREES = {
    "i10": (6, 3, 0), "i11": (6, 0, 3), "i15": (3, 2, 1),
    "i16": (3, 1, 2), "i17": (4, 2, 1), "i18": (4, 1, 2),
}


def invariant_thresholds(e, tol=TOLERANCE):
    nb = np.linalg.norm(e.beta)
    ns = np.linalg.norm(e.s_vec)
    npv = np.linalg.norm(e.p_vec)
    return {k: tol * nb ** db * ns ** ds * npv ** dp
            for k, (db, ds, dp) in _DEGREES.items()}


def is_real_locally(e, tol=TOLERANCE):
    """Whether some pair of local rotations makes every odd-Y coefficient vanish."""
    inv = triple_invariants(e)
    thresholds = invariant_thresholds(e, tol)
    return all(abs(getattr(inv, k)) <= thresholds[k] for k in _DEGREES)


class SpecialCase(enum.Enum):
    NONE = "none"
    S_AND_P_ZERO = "s_and_p_zero"
    BETA_ZERO = "beta_zero"
    LONE_YY_BLOCKED = "lone_yy_blocked"


@dataclass(frozen=True)
class StandardForm:
    """Diagonal coupling with a_ZZ >= a_XX >= 0 and 1-local vectors in the X-Z plane."""

    beta_diag: tuple
    s_vec: tuple
    p_vec: tuple
    left_rot: Rotation3
    right_rot: Rotation3
    normalization: float
    special_case: SpecialCase

    def edge_data(self):
        return EdgeData(np.diag(self.beta_diag), self.s_vec, self.p_vec)


def _group_indices(sigma, tol):
    """Partition singular-value indices into equal-magnitude groups (desc order)."""
    groups = []
    for i, val in enumerate(sigma):
        if groups and abs(sigma[groups[-1][0]] - val) <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _perp_in_plane(v, b1, b2):
    """Unit vector in span(b1, b2) orthogonal to v (any if v has no component)."""
    c1, c2 = float(v @ b1), float(v @ b2)
    if abs(c1) < 1e-300 and abs(c2) < 1e-300:
        return b1
    w = c2 * b1 - c1 * b2
    return w / np.linalg.norm(w)


def _slot_candidates(beta, s, p, u_cols, v_cols, sigma, groups, zero_tol):
    """Enumerate (y_left, y_right, group_idx, residual) choices for the Y slot.

    A candidate pins a matched singular direction whose left vector is
    orthogonal to S and whose right vector is orthogonal to P; for the null
    space the two sides are independent.
    """
    ns = max(np.linalg.norm(s), 1e-300)
    npv = max(np.linalg.norm(p), 1e-300)
    cands = []
    for gi, grp in enumerate(groups):
        if sigma[grp[0]] <= zero_tol:
            # null space: left/right directions are unconstrained pairs
            nl = [u_cols[:, i] for i in grp]
            nr = [v_cols[:, i] for i in grp]
            if len(grp) == 1:
                yl, yr = nl[0], nr[0]
            else:
                yl = _perp_in_plane(s, nl[0], nl[1])
                yr = _perp_in_plane(p, nr[0], nr[1])
            res = max(abs(yl @ s) / ns, abs(yr @ p) / npv)
            cands.append((yl, yr, gi, res))
        elif len(grp) == 1:
            yl, yr = u_cols[:, grp[0]], v_cols[:, grp[0]]
            res = max(abs(yl @ s) / ns, abs(yr @ p) / npv)
            cands.append((yl, yr, gi, res))
        else:
            # degenerate nonzero group: beta maps the right subspace onto the
            # left one isometrically, so only the right direction is free
            sig = sigma[grp[0]]
            rbasis = [v_cols[:, i] for i in grp]
            a = np.array([float(p @ r) for r in rbasis])
            bt_s = beta.T @ s / sig
            b = np.array([float(bt_s @ r) for r in rbasis])
            if len(grp) == 2:
                trials = []
                for w in (a, b):
                    if np.linalg.norm(w) > 1e-300:
                        trials.append(np.array([w[1], -w[0]]) / np.linalg.norm(w))
                if not trials:
                    trials.append(np.array([1.0, 0.0]))
            else:
                trials = []
                cr = np.cross(a, b)
                if np.linalg.norm(cr) > 1e-300:
                    trials.append(cr / np.linalg.norm(cr))
                for w in (a, b):
                    if np.linalg.norm(w) > 1e-300:
                        basis = np.eye(3)
                        t = basis[int(np.argmin(np.abs(w)))]
                        t = t - (t @ w) * w / (w @ w)
                        if np.linalg.norm(t) > 1e-300:
                            trials.append(t / np.linalg.norm(t))
                if not trials:
                    trials.append(np.eye(3)[0])
            for coeffs in trials:
                yr = sum(c * r for c, r in zip(coeffs, rbasis))
                yr = yr / np.linalg.norm(yr)
                yl = beta @ yr / sig
                yl = yl / np.linalg.norm(yl)
                res = max(abs(yl @ s) / ns, abs(yr @ p) / npv)
                cands.append((yl, yr, gi, res))
    return cands


def _orthonormal_completion(vec, basis, want):
    """Gram-Schmidt completion of ``vec`` inside ``span(basis)``."""
    out = []
    for b in basis:
        w = b - (b @ vec) * vec
        for prev in out:
            w = w - (w @ prev) * prev
        n = np.linalg.norm(w)
        if n > 1e-9:
            out.append(w / n)
        if len(out) == want:
            break
    return out


def _complete_slots(beta, u_cols, v_cols, sigma, groups, choice, zero_tol):
    """Remaining two matched pairs after fixing the Y slot, with their values."""
    yl, yr, gi, _ = choice
    pairs = []
    for gj, grp in enumerate(groups):
        if gj != gi:
            for i in grp:
                pairs.append((u_cols[:, i], v_cols[:, i], sigma[i]))
            continue
        if sigma[grp[0]] <= zero_tol:
            # null directions: the two sides complete independently
            nl = [u_cols[:, i] for i in grp]
            nr = [v_cols[:, i] for i in grp]
            ls = _orthonormal_completion(yl, nl, len(grp) - 1)
            rs = _orthonormal_completion(yr, nr, len(grp) - 1)
            for l, r in zip(ls, rs):
                pairs.append((l, r, 0.0))
        else:
            sig = sigma[grp[0]]
            rbasis = [v_cols[:, i] for i in grp]
            for r in _orthonormal_completion(yr, rbasis, len(grp) - 1):
                l = beta @ r / sig
                pairs.append((l / np.linalg.norm(l), r, sig))
    return pairs


def _kill_y_about_z(v):
    """Rotation about Z moving the XY part of ``v`` onto the X axis."""
    phi = math.atan2(v[1], v[0]) if (v[0] != 0 or v[1] != 0) else 0.0
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def _assemble(beta, s, p, x_pair, y_pair, z_pair):
    """Rows -> slots; determinant repaired by flipping the Y row (harmless)."""
    o_l = np.array([x_pair[0], y_pair[0], z_pair[0]])
    o_r = np.array([x_pair[1], y_pair[1], z_pair[1]])
    if np.linalg.det(o_l) < 0:
        o_l[1] = -o_l[1]
    if np.linalg.det(o_r) < 0:
        o_r[1] = -o_r[1]
    bd = o_l @ beta @ o_r.T
    sv = o_l @ s
    pv = o_r @ p
    return o_l, o_r, bd, sv, pv


def standard_form(e, tol=TOLERANCE):
    """Diagonalise the coupling and move the 1-local vectors into the X-Z plane.

    The input must pass ``is_real_locally``; a construction failure raises.
    Special configurations are flagged: both 1-local vectors zero and a zero
    coupling are immediately stoquastic, while a lone middle-axis coupling
    with obstructed 1-local pairs is immediately not.
    """
    beta, s, p = e.beta, e.s_vec, e.p_vec
    scale = max(np.abs(beta).max(), 1.0)
    zero_tol = tol * scale

    if np.linalg.norm(s) <= tol and np.linalg.norm(p) <= tol:
        special = SpecialCase.S_AND_P_ZERO
    elif np.abs(beta).max() <= tol:
        # with no coupling the 1-local vectors rotate freely; spin each about
        # the Z axis so its Y component vanishes
        o_l = _kill_y_about_z(s)
        o_r = _kill_y_about_z(p)
        sv, pv = o_l @ s, o_r @ p
        return StandardForm((0.0, 0.0, 0.0),
                            (float(sv[0]), 0.0, float(sv[2])),
                            (float(pv[0]), 0.0, float(pv[2])),
                            Rotation3(o_l), Rotation3(o_r),
                            1.0, SpecialCase.BETA_ZERO)
    else:
        special = SpecialCase.NONE

    u_cols, sigma, vt = np.linalg.svd(beta)
    v_cols = vt.T
    groups = _group_indices(sigma, zero_tol)
    cands = _slot_candidates(beta, s, p, u_cols, v_cols, sigma, groups, zero_tol)
    valid = [c for c in cands if c[3] <= 1e-7]
    if not valid:
        raise ValueError("edge data is not real under local rotations; "
                         "no coupling axis can host the Y slot")
    # prefer pinning a nonzero singular direction (largest first); the null
    # space is the fallback
    valid.sort(key=lambda c: (sigma[groups[c[2]][0]] <= zero_tol,
                              -sigma[groups[c[2]][0]], c[3]))
    choice = valid[0]
    rest = _complete_slots(beta, u_cols, v_cols, sigma, groups, choice, zero_tol)
    assert len(rest) == 2
    y_pair = (choice[0], choice[1])
    # larger remaining value goes to the Z slot
    rest.sort(key=lambda pr: pr[2])
    (xl, xr, sx), (zl, zr, sz) = rest

    variants = [((xl, xr), (zl, zr))]
    if abs(sx - sz) <= zero_tol:
        variants.append((((zl, zr)), ((xl, xr))))
    best = None
    for xp, zp in variants:
        o_l, o_r, bd, sv, pv = _assemble(beta, s, p, xp, y_pair, zp)
        key = (tuple(np.round(sv, 12)), tuple(np.round(pv, 12)))
        if best is None or key < best[0]:
            best = (key, o_l, o_r, bd, sv, pv)
    _, o_l, o_r, bd, sv, pv = best

    b1, b2, b3 = bd[0, 0], bd[1, 1], bd[2, 2]
    s1, s3 = sv[0], sv[2]
    p1, p3 = pv[0], pv[2]

    if special is SpecialCase.NONE and abs(b1) <= zero_tol and abs(b3) <= zero_tol:
        # only the middle slot couples; realness then pins the middle axis
        # unless one transverse 1-local pair vanishes entirely
        x_zero = abs(s1) <= tol and abs(p1) <= tol
        z_zero = abs(s3) <= tol and abs(p3) <= tol
        if not x_zero and not z_zero:
            special = SpecialCase.LONE_YY_BLOCKED
        else:
            # cycle the slots so the coupling lands on Z and the 1-local
            # content on X, keeping the Y components zero
            if x_zero:
                cyc = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
            else:
                cyc = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]])
            o_l, o_r = cyc @ o_l, cyc @ o_r
            bd = cyc @ bd @ cyc.T
            if bd[2, 2] < 0:
                flip = np.diag([1.0, -1.0, -1.0])
                o_l = flip @ o_l
                bd = flip @ bd
            sv, pv = o_l @ s, o_r @ p
            b1, b2, b3 = bd[0, 0], bd[1, 1], bd[2, 2]
            s1, s3 = sv[0], sv[2]
            p1, p3 = pv[0], pv[2]

    norm = 1.0
    if special is SpecialCase.NONE:
        norm = b3
        b1, b2, b3 = b1 / norm, b2 / norm, 1.0
        s1, s3 = s1 / norm, s3 / norm
        p1, p3 = p1 / norm, p3 / norm

    return StandardForm((float(b1), float(b2), float(b3)),
                        (float(s1), 0.0, float(s3)),
                        (float(p1), 0.0, float(p3)),
                        Rotation3(o_l), Rotation3(o_r),
                        float(norm), special)


# --------------------------------------------------------------------------
# feasibility of the rotated sign conditions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    """Rotation parameters certifying stoquasticity, relative to the standard form."""

    theta_l: float | None
    theta_r: float | None
    gamma_l: int
    gamma_r: int
    case_id: str
    left_rot: Rotation3
    right_rot: Rotation3


@dataclass(frozen=True)
class TwoQubitDecision:
    stoquastic: bool
    witness: Witness | None
    certificate_note: str
    standard: StandardForm | None


def xz_rotation(theta, gamma=1):
    """Rotation in the X-Z plane composed with an optional Y/Z reflection pair."""
    c, s = math.cos(theta), math.sin(theta)
    return Rotation3(np.array([[c, 0.0, s],
                               [0.0, float(gamma), 0.0],
                               [-gamma * s, 0.0, gamma * c]]))


def _theta_from(x, delta):
    """Angle with tan(theta) = x and sign(cos theta) = delta."""
    t = math.atan(x)
    return t if delta > 0 else t - math.pi


def _interval_quad(a, b, c, tol):
    """Solution set of a*x^2 + b*x + c >= -tol as a list of closed intervals."""
    c = c + tol
    if abs(a) <= 1e-300:
        if abs(b) <= 1e-300:
            return [(-math.inf, math.inf)] if c >= 0 else []
        r = -c / b
        return [(r, math.inf)] if b > 0 else [(-math.inf, r)]
    disc = b * b - 4.0 * a * c
    if disc < 0:
        return [(-math.inf, math.inf)] if a > 0 else []
    sq = math.sqrt(disc)
    r1 = (-b - sq) / (2.0 * a)
    r2 = (-b + sq) / (2.0 * a)
    lo, hi = min(r1, r2), max(r1, r2)
    if a > 0:
        return [(-math.inf, lo), (hi, math.inf)]
    return [(lo, hi)]


def _interval_leq(a, c, tol):
    """Solution set of a*x + c <= tol."""
    c = c - tol
    if abs(a) <= 1e-300:
        return [(-math.inf, math.inf)] if c <= 0 else []
    r = -c / a
    return [(-math.inf, r)] if a > 0 else [(r, math.inf)]


def _intersect(sets):
    cur = [(-math.inf, math.inf)]
    for s in sets:
        nxt = []
        for lo1, hi1 in cur:
            for lo2, hi2 in s:
                lo, hi = max(lo1, lo2), min(hi1, hi2)
                if lo <= hi:
                    nxt.append((lo, hi))
        if not nxt:
            return []
        cur = nxt
    return cur


def _pick_point(intervals):
    """Deterministic candidate points, interior first."""
    pts = []
    for lo, hi in intervals:
        if math.isinf(lo) and math.isinf(hi):
            pts.append(0.0)
        elif math.isinf(lo):
            pts.extend([hi - 1.0, hi])
        elif math.isinf(hi):
            pts.extend([lo + 1.0, lo])
        else:
            pts.extend([(lo + hi) / 2.0, lo, hi])
    return pts


_DELTAS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def _case4(b, s, p, tol):
    b1, b2, b3 = b
    for dl, dr in _DELTAS:
        if (dl * dr * b3 <= tol and b3 * b3 - b2 * b2 >= -tol
                and dr * p[2] <= tol and dl * s[2] <= tol):
            return dl * math.pi / 2.0, dr * math.pi / 2.0, dl, dr
    return None


def _case2(b, s, p, tol):
    """cos(theta_l) = 0; feasibility is a one-variable quadratic system in tan(theta_r)."""
    b1, b2, b3 = b
    s1, s3 = s[0], s[2]
    p1, p3 = p[0], p[2]
    for dl, dr in _DELTAS:
        if dl * s3 > tol:
            continue
        sets = [
            _interval_leq(dl * dr * b3, 0.0, tol),
            _interval_quad(b3 * b3 - b2 * b2, 0.0, -b2 * b2, tol),
            _interval_leq(dr * p3, dr * p1, tol),
            _interval_quad(p3 * p3, 2.0 * p1 * p3, p1 * p1 - b1 * b1, tol),
            _interval_quad(s3 * s3, 0.0, s3 * s3 - b3 * b3, tol),
        ]
        feas = _intersect(sets)
        for x2 in _pick_point(feas):
            yield dl * math.pi / 2.0, _theta_from(x2, dr), dl, dr


def _case3(b, s, p, tol):
    """cos(theta_r) = 0; mirror image of the previous case in tan(theta_l)."""
    b1, b2, b3 = b
    s1, s3 = s[0], s[2]
    p1, p3 = p[0], p[2]
    for dl, dr in _DELTAS:
        if dr * p3 > tol:
            continue
        sets = [
            _interval_leq(dl * dr * b3, 0.0, tol),
            _interval_quad(b3 * b3 - b2 * b2, 0.0, -b2 * b2, tol),
            _interval_quad(p3 * p3, 0.0, p3 * p3 - b3 * b3, tol),
            _interval_leq(dl * s3, dl * s1, tol),
            _interval_quad(s3 * s3, 2.0 * s1 * s3, s1 * s1 - b1 * b1, tol),
        ]
        feas = _intersect(sets)
        for x1 in _pick_point(feas):
            yield _theta_from(x1, dl), dr * math.pi / 2.0, dl, dr


def _grid_x2(samples):
    """Tangent-parametrised scan values, canonical angles first."""
    special = [0.0, math.pi / 8, -math.pi / 8, math.pi / 4, -math.pi / 4,
               3 * math.pi / 8, -3 * math.pi / 8]
    ts = np.linspace(-math.pi / 2, math.pi / 2, samples + 2)[1:-1]
    return np.tan(np.concatenate([special, ts])), np.concatenate([special, ts])


def _quad_roots_arr(a, b, c):
    """Roots of per-row quadratics, NaN-padded; linear rows handled."""
    g = a.shape[0]
    out = np.full((g, 2), np.nan)
    lin = np.abs(a) <= 1e-300
    with np.errstate(invalid="ignore", divide="ignore"):
        disc = b * b - 4.0 * a * c
        ok = (~lin) & (disc >= 0)
        sq = np.sqrt(np.where(ok, disc, np.nan))
        out[ok, 0] = ((-b - sq) / (2.0 * a))[ok]
        out[ok, 1] = ((-b + sq) / (2.0 * a))[ok]
        lin_ok = lin & (np.abs(b) > 1e-300)
        out[lin_ok, 0] = (-c / b)[lin_ok]
    return out


def _case1_scan(b, s, p, x2, tol, max_hits=8):
    """Vectorised feasibility of the two-variable system on a slice of x2 values.

    For each x2 the six conditions are quadratics/lines in x1 = tan(theta_l),
    so the feasible x1 set is captured exactly by evaluating at all constraint
    boundaries and the midpoints between them.  Interior candidates are
    preferred over boundary roots so witnesses survive exact re-verification.

    Returns (hits, score): feasible (x1, x2, dl, dr) tuples on distinct x2
    samples, and a per-sample infeasibility score for grid refinement.
    """
    b1, b2, b3 = b
    s1, s3 = s[0], s[2]
    p1, p3 = p[0], p[2]
    big = 1e300
    best_score = np.full(x2.shape[0], np.inf)
    hits = []
    seen_rows = set()
    for dl, dr in _DELTAS:
        gate_all = dr * (p1 + p3 * x2) - tol             # (2a), free of x1
        keep = np.nonzero(gate_all <= 0.0)[0]
        if keep.size == 0:
            continue
        x2v = x2[keep]
        g = x2v.shape[0]
        one = np.ones(g)
        q = p1 + p3 * x2v
        # quadratic coefficients in x1 of the squared conditions
        a1 = b3 * b3 * x2v * x2v - b2 * b2 * (1.0 + x2v * x2v)
        bb1 = 2.0 * b1 * b3 * x2v
        c1 = b1 * b1 - b2 * b2 * (1.0 + x2v * x2v)
        a2 = q * q - b1 * b1
        bb2 = 2.0 * b1 * b3 * x2v
        c2 = q * q - b3 * b3 * x2v * x2v
        a3 = (s3 * s3 * (1.0 + x2v * x2v) - b3 * b3) * one
        bb3 = 2.0 * s1 * s3 * (1.0 + x2v * x2v) + 2.0 * b1 * b3 * x2v
        c3 = s1 * s1 * (1.0 + x2v * x2v) - b1 * b1 * x2v * x2v
        # linear conditions: sign of the product (1a) and of the s column (3a)
        la = dl * dr * b3 * x2v
        lc = dl * dr * b1 * one
        ma = dl * s3 * one
        mc = dl * s1 * one

        roots = [
            _quad_roots_arr(a1, bb1, c1 + tol),
            _quad_roots_arr(a2, bb2, c2 + tol),
            _quad_roots_arr(a3, bb3, c3 + tol),
        ]
        with np.errstate(invalid="ignore", divide="ignore"):
            lr = np.where(np.abs(la) > 1e-300, (tol - lc) / la, np.nan)
            mr = np.where(np.abs(ma) > 1e-300, (tol - mc) / ma, np.nan)
        cand = np.concatenate([r for r in roots] + [lr[:, None], mr[:, None]], axis=1)
        filled = np.where(np.isnan(cand), big, cand)
        filled.sort(axis=1)
        mids = (filled[:, :-1] + filled[:, 1:]) / 2.0
        lo = filled.min(axis=1) - 1.0
        hi = np.where(np.isnan(cand), -big, cand).max(axis=1) + 1.0
        # interior points first, boundary roots as a last resort
        pts = np.concatenate([mids, np.zeros((g, 1)), lo[:, None], hi[:, None],
                              filled], axis=1)
        pts = np.clip(pts, -big, big)

        with np.errstate(invalid="ignore", over="ignore"):
            v1a = la[:, None] * pts + lc[:, None] - tol
            v3a = ma[:, None] * pts + mc[:, None] - tol
            q1 = (a1[:, None] * pts + bb1[:, None]) * pts + c1[:, None] + tol
            q2 = (a2[:, None] * pts + bb2[:, None]) * pts + c2[:, None] + tol
            q3 = (a3[:, None] * pts + bb3[:, None]) * pts + c3[:, None] + tol
            viol = np.maximum.reduce([
                np.maximum(v1a, 0.0), np.maximum(v3a, 0.0),
                np.maximum(-q1, 0.0), np.maximum(-q2, 0.0), np.maximum(-q3, 0.0),
            ])
            viol = np.where(np.isnan(viol), np.inf, viol)
        row_best = viol.min(axis=1)
        np.minimum.at(best_score, keep, row_best)
        for r in np.nonzero(row_best <= 0.0)[0]:
            if len(hits) >= max_hits:
                break
            r = int(r)
            if (keep[r], dl, dr) in seen_rows:
                continue
            seen_rows.add((keep[r], dl, dr))
            c = int(np.nonzero(viol[r] <= 0.0)[0][0])
            hits.append((float(pts[r, c]), float(x2v[r]), dl, dr))
    return hits, best_score


def _case1(b, s, p, tol, samples, refine_rounds):
    """Scan the tangent grid, refining around the least-infeasible samples."""
    x2, ts = _grid_x2(samples)
    hits, score = _case1_scan(b, s, p, x2, tol)
    if hits:
        return hits
    # refinement only pays off where a sample is nearly feasible
    scale = (1.0 + max(abs(b[0]), abs(b[1]), abs(b[2]),
                       abs(s[0]), abs(s[2]), abs(p[0]), abs(p[2]))) ** 4
    cutoff = 1e-2 * scale
    for _ in range(refine_rounds):
        order = np.argsort(score)
        sites = [i for i in order[:_REFINE_SITES] if score[i] < cutoff]
        if not sites:
            return []
        new_ts = []
        for i in sites:
            t = ts[i]
            span = math.pi / (samples + 1)
            new_ts.append(np.linspace(t - span, t + span, _REFINE_SUBDIV))
        ts = np.concatenate(new_ts)
        ts = ts[(ts > -math.pi / 2) & (ts < math.pi / 2)]
        x2 = np.tan(ts)
        hits, score = _case1_scan(b, s, p, x2, tol)
        if hits:
            return hits
    return []


def _search_variant(b, s, p, tol, samples, refine_rounds):
    """Candidate angles from the four cosine-sign cases, exact ones first."""
    # the rotated XX entry is bounded by max(|b1|, |b3|), so a larger |b2|
    # rules out the whole variant at once
    if b[1] * b[1] > max(b[0] * b[0], b[2] * b[2]) + tol:
        return
    r4 = _case4(b, s, p, tol)
    if r4 is not None:
        yield r4[0], r4[1], "case4"
    for th_l, th_r, dl, dr in _case2(b, s, p, tol):
        yield th_l, th_r, "case2"
    for th_l, th_r, dl, dr in _case3(b, s, p, tol):
        yield th_l, th_r, "case3"
    for x1, x2, dl, dr in _case1(b, s, p, tol, samples, refine_rounds):
        yield _theta_from(x1, dl), _theta_from(x2, dr), "case1"


_SWAP_XY = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0]])
_SWAP_YZ = np.array([[-1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]])


def _variants(sf, tol):
    """The base standard form plus the axis-relabelled forms tried when one
    transverse 1-local pair vanishes on both qubits."""
    b = np.diag(sf.beta_diag)
    s = np.array(sf.s_vec)
    p = np.array(sf.p_vec)
    out = [("base", np.eye(3), np.eye(3))]
    if abs(s[0]) <= tol and abs(p[0]) <= tol:
        out.append(("swap_xy", _SWAP_XY, _SWAP_XY))
    if abs(s[2]) <= tol and abs(p[2]) <= tol:
        out.append(("swap_yz", _SWAP_YZ, _SWAP_YZ))
    res = []
    for name, ml, mr in out:
        res.append((name, ml, mr, ml @ b @ mr.T, ml @ s, mr @ p))
    return res


def _special_witness(sf, tol):
    """Clifford pair for the zero-1-local case; alignment pair for zero coupling."""
    e = sf.edge_data()
    if sf.special_case is SpecialCase.S_AND_P_ZERO:
        cliffs = clifford_rotations()
        for cl in cliffs:
            for cr in cliffs:
                rl, rr = cl.rotation(), cr.rotation()
                if is_z_matrix_2q(apply_rotations(e, rl, rr), tol):
                    return rl, rr
        raise AssertionError("no Clifford pair found for pure coupling")
    # zero coupling: rotate each 1-local vector onto the negative X axis
    s, p = e.s_vec, e.p_vec
    rl = rotation_taking(s, [-1.0, 0.0, 0.0]) if np.linalg.norm(s) > tol \
        else Rotation3.identity()
    rr = rotation_taking(p, [-1.0, 0.0, 0.0]) if np.linalg.norm(p) > tol \
        else Rotation3.identity()
    return rl, rr


def decide_stoquastic_2q(e, tol=TOLERANCE, samples=DEFAULT_SAMPLES,
                         refine_rounds=DEFAULT_REFINE_ROUNDS):
    """Decide whether a pair Hamiltonian is stoquastic under local rotations.

    Positive answers carry a verified witness (rotations relative to the
    standard form).  Negative answers from the two-variable scan are exact in
    one variable and certified up to the stated grid resolution in the other.
    """
    if not is_real_locally(e, tol):
        return TwoQubitDecision(False, None,
                                "not real under local rotations "
                                "(nonzero triple-product invariant)", None)
    sf = standard_form(e, tol)
    if sf.special_case is SpecialCase.LONE_YY_BLOCKED:
        return TwoQubitDecision(False, None,
                                "lone middle-axis coupling with obstructed "
                                "1-local pairs", sf)
    if sf.special_case in (SpecialCase.S_AND_P_ZERO, SpecialCase.BETA_ZERO):
        rl, rr = _special_witness(sf, tol)
        assert is_z_matrix_2q(apply_rotations(sf.edge_data(), rl, rr), tol)
        case = sf.special_case.value
        return TwoQubitDecision(True, Witness(None, None, 1, 1, case, rl, rr),
                                f"immediate: {case}", sf)

    sf_edge = sf.edge_data()
    for name, ml, mr, bv, sv, pv in _variants(sf, tol):
        for th_l, th_r, case in _search_variant(
                (bv[0, 0], bv[1, 1], bv[2, 2]), sv, pv, tol, samples,
                refine_rounds):
            rl = Rotation3(xz_rotation(th_l).m @ ml)
            rr = Rotation3(xz_rotation(th_r).m @ mr)
            if not is_z_matrix_2q(apply_rotations(sf_edge, rl, rr), tol):
                continue
            note = f"{case} feasible on variant {name} at " \
                   f"theta_l={th_l:.12g}, theta_r={th_r:.12g}"
            return TwoQubitDecision(True,
                                    Witness(th_l, th_r, 1, 1, case, rl, rr),
                                    note, sf)
    note = (f"all cases refuted on every variant; one-variable cases exact, "
            f"two-variable case scanned at {samples} tangent samples with "
            f"{refine_rounds} refinement rounds")
    return TwoQubitDecision(False, None, note, sf)


# --------------------------------------------------------------------------
# parameter scan of the transverse+longitudinal field Ising pair
# --------------------------------------------------------------------------

def field_ising_edge(a_x, a_z, a_xx):
    """Two-qubit Ising pair with uniform transverse/longitudinal fields:
    ZZ coupling of unit weight, XX coupling a_xx, fields a_z*Z - a_x*X."""
    return EdgeData(np.diag([a_xx, 0.0, 1.0]),
                    [-a_x, 0.0, a_z], [-a_x, 0.0, a_z])


@dataclass(frozen=True)
class ScanRow:
    a_x: float
    a_z: float
    a_xx: float
    stoquastic: bool
    case_id: str


def _axis(spec):
    lo, hi, steps = spec
    if steps < 2:
        raise ValueError("grid needs at least 2 points per axis")
    return np.linspace(lo, hi, int(steps))


def region_scan(ax_spec, az_spec, axx_spec, tol=TOLERANCE,
                samples=DEFAULT_SAMPLES, refine_rounds=DEFAULT_REFINE_ROUNDS):
    """Decide the field Ising pair on a lattice of (a_x, a_z, a_xx) points.

    Rows come out in grid order (a_x outermost) regardless of evaluation
    order, one per lattice point.
    """
    rows = []
    for a_x in _axis(ax_spec):
        for a_z in _axis(az_spec):
            for a_xx in _axis(axx_spec):
                d = decide_stoquastic_2q(field_ising_edge(a_x, a_z, a_xx),
                                         tol, samples, refine_rounds)
                if d.stoquastic:
                    case = d.witness.case_id
                elif d.standard is not None \
                        and d.standard.special_case is SpecialCase.LONE_YY_BLOCKED:
                    case = "lone_yy_blocked"
                elif d.standard is None:
                    case = "not_real"
                else:
                    case = "refuted"
                rows.append(ScanRow(float(a_x), float(a_z), float(a_xx),
                                    d.stoquastic, case))
    return rows


def scan_to_csv(rows):
    """CSV with header aX,aZ,aXX,stoquastic,case_id; booleans as 0/1, LF endings."""
    lines = ["aX,aZ,aXX,stoquastic,case_id"]
    for r in rows:
        lines.append(f"{r.a_x},{r.a_z},{r.a_xx},{1 if r.stoquastic else 0},{r.case_id}")
    return "\n".join(lines) + "\n"
