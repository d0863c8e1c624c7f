import pytest
from gmpy2 import mpq

from gapcover.exactnum import SQRT2, EpsScale, fe, fe_inv, fe_sign
from gapcover.gap3sum import GapInstance, GapTag, gen_planted_gap
from gapcover.geometry import Ball, PointD, in_ball, meb, sq_dist
from gapcover.reduce3d import (
    NotAWitness,
    NotPrefixSplit,
    build_2center3d,
    certify_no_3d,
    extract_3d,
    witness_3d,
)
from gapcover.solver import CoverWitness, GeometricInstance, verify_witness


def scale_for(x):
    return EpsScale.full_fidelity(x.n)


def zero_yes_instance(n):
    entries = [0] * (2 * n + 1)
    entries[n - 1] = 3
    entries[n + 1] = -3
    entries[n] = 0
    return GapInstance(entries, n)


def test_build_counts_and_constants():
    x = zero_yes_instance(4)
    scale = scale_for(x)
    inst = build_2center3d(x, scale)
    assert len(inst.points) == 6 * (2 * 4 + 1) + 10
    assert inst.t == mpq(1, 4)
    # d0+ = (0, 0, 1 + 1/sqrt2 + eps)
    d0 = inst.anchor_point("D+0").point
    assert d0[2] == fe(1 + scale.eps) + fe_inv(SQRT2)
    assert d0[0] == fe(0) and d0[1] == fe(0)
    # A[1]: odd index, floor(1/2)=0 -> z = X[0]*eps^1.5 + eps
    a1 = inst.families["A"][1]
    assert a1[0] == fe_inv(SQRT2)
    assert a1[2] == fe(x[0] * scale.eps15 + scale.eps)


def test_t_for_large_n():
    x = gen_planted_gap(100, GapTag.NO, seed=0)
    inst = build_2center3d(x, scale_for(x))
    assert inst.t == 3 + mpq(1, 4)


def test_witness_trivial_triple():
    x = zero_yes_instance(3)
    scale = scale_for(x)
    w = witness_3d(x, (0, 0, 0), scale)
    inv_sqrt2 = fe_inv(SQRT2)
    assert w.c_plus == PointD((fe(0), fe(0), inv_sqrt2 + scale.eps))
    assert w.c_minus == PointD((fe(0), fe(0), -(inv_sqrt2 + scale.eps)))


def test_witness_formula_nonzero():
    n = 120
    entries = [0] * (2 * n + 1)
    a = 7
    entries[n + 1] = a
    entries[n - 1] = -a
    x = GapInstance(entries, n)
    scale = scale_for(x)
    w = witness_3d(x, (1, -1, 0), scale)
    eps, seps = scale.eps, scale.sqrt_eps
    assert w.c_plus[0] == fe((-3 - a * seps) * eps)
    assert w.c_plus[1] == fe((3 + a * seps) * eps)


def test_witness_rejects_non_solutions():
    x = zero_yes_instance(3)
    scale = scale_for(x)
    with pytest.raises(NotAWitness):
        witness_3d(x, (1, -1, 0), scale)  # outside promise range for n=3
    entries = [1] * 7
    bad = GapInstance(entries, 3)
    with pytest.raises(NotAWitness):
        witness_3d(bad, (0, 0, 0), scale)


def _full_cover_check(inst, w):
    geo = GeometricInstance.from_labeled(inst.points, 2, inst.sq_radius)
    ok, margin = verify_witness(geo, CoverWitness((w.c_plus, w.c_minus)))
    return ok, margin


def test_witness_covers_everything_small():
    x = zero_yes_instance(4)
    scale = scale_for(x)
    inst = build_2center3d(x, scale)
    w = witness_3d(x, (0, 0, 0), scale)
    ok, _ = _full_cover_check(inst, w)
    assert ok


def test_monotone_distances_along_families():
    x = zero_yes_instance(3)
    scale = scale_for(x)
    inst = build_2center3d(x, scale)
    w = witness_3d(x, (0, 0, 0), scale)
    for tag in ("A", "B", "C"):
        fam = inst.families[tag]
        dists_plus = [sq_dist(w.c_plus, fam[i]) for i in inst.index_range]
        dists_minus = [sq_dist(w.c_minus, fam[i]) for i in inst.index_range]
        assert all(
            fe_sign(b - a) <= 0 for a, b in zip(dists_plus, dists_plus[1:])
        )
        assert all(
            fe_sign(b - a) >= 0 for a, b in zip(dists_minus, dists_minus[1:])
        )


def test_center_range_lemma_on_witness():
    x = zero_yes_instance(5)
    scale = scale_for(x)
    inst = build_2center3d(x, scale)
    w = witness_3d(x, (0, 0, 0), scale)
    eps = scale.eps
    m = x.max_abs
    bound = (inst.t + 3 * m * m * eps) * eps
    for coord in (w.c_plus[0], w.c_plus[1]):
        assert fe_sign(coord - fe(-bound)) >= 0
        assert fe_sign(fe(bound) - coord) >= 0
    # z+ >= -3 M^2 eps^2 where c+_z = 1/sqrt2 + eps + z+
    floor = fe_inv(SQRT2) + fe(eps - 3 * m * m * eps * eps)
    assert fe_sign(w.c_plus[2] - floor) >= 0
    # the meb center of D+ alone obeys the same box
    ball = meb(inst.anchors_plus)
    assert fe_sign(ball.center[2] - floor) >= 0
    for coord in (ball.center[0], ball.center[1]):
        assert fe_sign(coord - fe(-bound)) >= 0
        assert fe_sign(fe(bound) - coord) >= 0


def _witness_assignment(inst, w):
    ball_plus = Ball(w.c_plus, inst.sq_radius)
    assignment = {}
    for lp in inst.points:
        assignment[lp] = "+" if in_ball(lp.point, ball_plus) else "-"
    return assignment


def test_extract_roundtrip_zero():
    x = zero_yes_instance(4)
    scale = scale_for(x)
    inst = build_2center3d(x, scale)
    w = witness_3d(x, (0, 0, 0), scale)
    switch, triple = extract_3d(inst, _witness_assignment(inst, w))
    assert triple == (0, 0, 0)
    assert switch.i_hat % 2 == 0


def test_extract_rejects_greedy_takeover():
    x = zero_yes_instance(4)
    scale = scale_for(x)
    inst = build_2center3d(x, scale)
    w = witness_3d(x, (0, 0, 0), scale)
    assignment = _witness_assignment(inst, w)
    for lp in inst.points:
        if lp.set_tag == "A":
            assignment[lp] = "+"
    with pytest.raises(NotPrefixSplit):
        extract_3d(inst, assignment)


def test_certify_yes_small():
    x = zero_yes_instance(4)
    scale = scale_for(x)
    inst = build_2center3d(x, scale)
    report = certify_no_3d(inst)
    assert report.data["outcome"] == "coverable"
    assert report.data["witness"] == "0,0,0"


def test_certify_no_small():
    x = gen_planted_gap(4, GapTag.NO, seed=9)
    scale = scale_for(x)
    inst = build_2center3d(x, scale)
    report = certify_no_3d(inst)
    assert report.data["outcome"] == "infeasible"
    assert report.verdict


def test_certify_matches_brute_enumeration_tiny():
    # independent cross-check: enumerate every split triple directly;
    # relaxed delta keeps the margins intact at n=2 and runs 10x lighter
    for seed, want in ((1, GapTag.YES), (2, GapTag.NO)):
        x = gen_planted_gap(2, want, seed=seed)
        scale = EpsScale.relaxed(x.n, mpq(1, 10 * x.n))
        inst = build_2center3d(x, scale)
        from gapcover.reduce3d import _SplitFeasibility

        feas = _SplitFeasibility(inst)
        n = inst.n
        rng = range(-2 * n - 1, 2 * n + 2)
        brute_feasible = False
        for i_hat in rng:
            for j_hat in rng:
                for k_hat in rng:
                    hats = (i_hat, j_hat, k_hat)
                    if feas.top(hats) and feas.bottom(hats):
                        brute_feasible = True
                        break
                if brute_feasible:
                    break
            if brute_feasible:
                break
        report = certify_no_3d(inst)
        assert (report.data["outcome"] == "coverable") == brute_feasible
        assert brute_feasible == (want is GapTag.YES)
