import itertools

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from gapcover.exactnum import FE_ONE, SQRT2, SQRT3, SQRT7, fe, fe_inv, fe_sign
from gapcover.geometry import (
    Ball,
    DegenerateSupport,
    DimensionMismatch,
    EmptyInput,
    PointD,
    circumball,
    in_ball,
    meb,
    meb_oracle,
    sq_dist,
)


def pt(*coords):
    return PointD(tuple(fe(c) if not hasattr(c, "c") else c for c in coords))


def test_sq_dist_examples():
    half_sqrt3 = SQRT3 * mpq(1, 2)
    assert sq_dist(pt(0, 0), PointD((half_sqrt3, fe(mpq(3, 2))))) == fe(3)
    inv_sqrt2 = fe_inv(SQRT2)
    p = PointD((fe(0), fe(0), inv_sqrt2))
    q = PointD((fe(0), fe(0), -inv_sqrt2))
    assert sq_dist(p, q) == fe(2)
    # the shared distance-2 pair of the six-disk gadget
    a = PointD((half_sqrt3 + SQRT7 * mpq(1, 2), fe(0)))
    b = PointD((half_sqrt3, fe(mpq(3, 2))))
    assert sq_dist(a, b) == fe(4)


def test_sq_dist_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        sq_dist(pt(0, 0), pt(0, 0, 0))


def test_in_ball_boundary_counts():
    b = Ball(pt(0, 0), fe(1))
    assert in_ball(pt(1, 0), b)
    assert in_ball(pt(0, 0), b)
    eps = mpq(1, 10**30)
    assert not in_ball(pt(1, eps), b)
    assert in_ball(pt(1, 1), Ball(pt(0, 0), fe(2)))


def test_circumball_two_points():
    b = circumball([pt(0, 0), pt(2, 0)])
    assert b.center == pt(1, 0)
    assert b.sq_radius == fe(1)


def test_circumball_right_triangle():
    b = circumball([pt(0, 0), pt(3, 0), pt(0, 4)])
    assert b.center == pt(mpq(3, 2), fe(2))
    assert b.sq_radius == fe(mpq(25, 4))


def test_circumball_regular_tetrahedron():
    # side sqrt(2): vertices of a unit cube corner pattern
    pts = [pt(0, 0, 0), pt(1, 1, 0), pt(1, 0, 1), pt(0, 1, 1)]
    b = circumball(pts)
    assert b.center == pt(mpq(1, 2), mpq(1, 2), mpq(1, 2))
    assert b.sq_radius == fe(mpq(3, 4))


def test_circumball_degenerate():
    with pytest.raises(DegenerateSupport):
        circumball([pt(0, 0), pt(1, 0), pt(5, 0)])
    # cocircular degenerate support is accepted
    b = circumball([pt(1, 0, 0), pt(-1, 0, 0), pt(0, 1, 0), pt(0, -1, 0)])
    assert b.sq_radius == fe(1)


def test_meb_trivia():
    single = meb([pt(3, 4)])
    assert single.center == pt(3, 4) and single.sq_radius == fe(0)
    two = meb([pt(0, 0), pt(2, 2)])
    assert two.center == pt(1, 1)
    assert two.sq_radius == fe(2)
    with pytest.raises(EmptyInput):
        meb([])


def test_meb_equilateral_triangle():
    # side 2: (0,0), (2,0), (1, sqrt3); circumradius^2 = 4/3
    pts = [pt(0, 0), pt(2, 0), PointD((fe(1), SQRT3))]
    b = meb(pts)
    assert b.sq_radius == fe(mpq(4, 3))


def test_meb_collinear():
    pts = [pt(5, 0), pt(0, 0), pt(10, 0), pt(7, 0), pt(2, 0)]
    b = meb(pts)
    assert b.center == pt(5, 0)
    assert b.sq_radius == fe(25)


def test_meb_interior_points_ignored():
    pts = [pt(0, 0), pt(4, 0), pt(2, 1), pt(2, -1), pt(1, 0)]
    b = meb(pts)
    assert b.center == pt(2, 0)
    assert b.sq_radius == fe(4)


def test_meb_permutation_invariant():
    pts = [pt(0, 0), pt(3, 1), pt(1, 4), pt(-2, 2), pt(1, 1)]
    reference = meb(pts)
    for perm in itertools.permutations(pts):
        b = meb(list(perm))
        assert b.center == reference.center
        assert b.sq_radius == reference.sq_radius


def test_meb_monotone_under_insertion():
    pts = [pt(0, 0), pt(2, 1), pt(-1, 3)]
    base = meb(pts)
    grown = meb(pts + [pt(5, 5)])
    assert fe_sign(grown.sq_radius - base.sq_radius) >= 0


def _grid_points_2d():
    vals = [mpq(0), mpq(1), mpq(2)]
    return [PointD((fe(x), fe(y))) for x in vals for y in vals]


def test_meb_matches_oracle_exhaustive_small():
    grid = _grid_points_2d()
    for size in (1, 2, 3, 4):
        for combo in itertools.combinations(grid, size):
            got = meb(list(combo))
            want = meb_oracle(list(combo))
            assert got.sq_radius == want.sq_radius
            assert got.center == want.center
            assert all(in_ball(p, got) for p in combo)


coords = st.integers(min_value=-5, max_value=5)


@given(st.lists(st.tuples(coords, coords), min_size=1, max_size=7))
@settings(max_examples=80, deadline=None)
def test_meb_matches_oracle_random_2d(raw):
    pts = [pt(x, y) for x, y in raw]
    got = meb(pts)
    want = meb_oracle(pts)
    assert got.sq_radius == want.sq_radius
    assert all(in_ball(p, got) for p in pts)


@given(st.lists(st.tuples(coords, coords, coords), min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_meb_matches_oracle_random_3d(raw):
    pts = [pt(x, y, z) for x, y, z in raw]
    got = meb(pts)
    want = meb_oracle(pts)
    assert got.sq_radius == want.sq_radius
    assert all(in_ball(p, got) for p in pts)
