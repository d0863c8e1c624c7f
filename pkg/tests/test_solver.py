import random

import pytest
from gmpy2 import mpq

from gapcover.exactnum import fe
from gapcover.geometry import LabeledPoint, PointD
from gapcover.solver import (
    CoverWitness,
    GeometricInstance,
    ResourceExceeded,
    SolverLimits,
    decide_cover,
    partition_oracle,
    verify_witness,
)


def lp(*coords, tag="P"):
    return LabeledPoint(PointD(tuple(fe(c) for c in coords)), tag)


def make(points, k, sq_radius):
    return GeometricInstance.from_labeled(points, k, fe(sq_radius))


def test_verify_witness_basics():
    inst = make([lp(0, 0)], 1, 4)
    ok, margin = verify_witness(inst, CoverWitness((PointD((fe(0), fe(0))),)))
    assert ok and margin == fe(-4)
    # boundary point counts as covered
    inst2 = make([lp(2, 0)], 1, 4)
    ok2, margin2 = verify_witness(inst2, CoverWitness((PointD((fe(0), fe(0))),)))
    assert ok2 and margin2 == fe(0)
    bad, margin3 = verify_witness(
        make([lp(3, 0)], 1, 4), CoverWitness((PointD((fe(0), fe(0))),))
    )
    assert not bad and margin3 == fe(5)


def test_every_point_own_center():
    pts = [lp(i, 2 * i) for i in range(5)]
    decision = decide_cover(make(pts, 5, 0))
    assert decision.tag == "coverable"
    assert len(decision.witness.centers) <= 5


def test_square_k1_threshold():
    s = 2
    pts = [lp(0, 0), lp(s, 0), lp(0, s), lp(s, s)]
    # needs sq_radius >= s^2/2 = 2
    assert decide_cover(make(pts, 1, 2)).tag == "coverable"
    assert decide_cover(make(pts, 1, mpq(199, 100))).tag == "infeasible"


def test_two_far_points():
    pts = [lp(0, 0), lp(10, 0)]
    assert decide_cover(make(pts, 1, 1)).tag == "infeasible"
    assert decide_cover(make(pts, 2, 1)).tag == "coverable"
    assert partition_oracle(make(pts, 1, 1)) is False
    assert partition_oracle(make(pts, 2, 1)) is True


def test_resource_exceeded_propagates():
    pts = [lp(i, 0) for i in range(8)]
    decision = decide_cover(make(pts, 3, 1), SolverLimits(max_nodes=1))
    assert decision.tag == "resource_exceeded"
    with pytest.raises(ResourceExceeded):
        decision.coverable


def _random_instance(rng):
    n_pts = rng.randint(1, 10)
    dim = rng.choice([2, 3])
    pts = [
        lp(*[mpq(rng.randint(-8, 8), rng.randint(1, 3)) for _ in range(dim)])
        for _ in range(n_pts)
    ]
    k = rng.randint(1, 3)
    sq_radius = mpq(rng.randint(1, 160), rng.randint(1, 4))
    return make(pts, k, sq_radius)


def test_matches_partition_oracle_random():
    rng = random.Random(42)
    for _ in range(60):
        inst = _random_instance(rng)
        got = decide_cover(inst)
        assert got.tag in ("coverable", "infeasible")
        assert got.coverable == partition_oracle(inst)
        if got.tag == "coverable":
            ok, _ = verify_witness(inst, got.witness)
            assert ok


def test_monotone_in_radius():
    rng = random.Random(11)
    for _ in range(25):
        inst = _random_instance(rng)
        if not decide_cover(inst).coverable:
            continue
        bigger = GeometricInstance(
            inst.points, inst.k, inst.sq_radius * 2, inst.dim
        )
        assert decide_cover(bigger).coverable


def test_infeasible_stable_under_permutation():
    pts = [lp(0, 0), lp(10, 0), lp(5, 9), lp(-4, -4)]
    inst = make(pts, 2, 4)
    base = decide_cover(inst).coverable
    rng = random.Random(0)
    for _ in range(6):
        shuffled = list(pts)
        rng.shuffle(shuffled)
        assert decide_cover(make(shuffled, 2, 4)).coverable == base


def test_duplicate_points_collapse():
    pts = [lp(0, 0), lp(0, 0), lp(1, 0)]
    decision = decide_cover(make(pts, 1, mpq(1, 4)))
    assert decision.tag == "coverable"


def test_partition_oracle_domain_guard():
    pts = [lp(i, 0) for i in range(13)]
    with pytest.raises(ResourceExceeded):
        partition_oracle(make(pts, 2, 100))
