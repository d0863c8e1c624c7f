import random

import pytest
from gmpy2 import mpq

from gapcover.exactnum import FE_ONE, SQRT2, SQRT3, EpsScale, fe, fe_sign
from gapcover.gadgets import (
    HEX_DIRS,
    AnchorSpec,
    BadContext,
    CenteredArray,
    HexVertexContext,
    PnSpec,
    anchor_delta,
    build_anchors,
    build_consistency,
    build_pn,
    pn_multiplier,
    suffix_tri_cover_center,
    tri_cover_center,
    zero_array,
)
from gapcover.geometry import Ball, PointD, in_ball, sq_dist, vec_scale


def pt(*coords):
    return PointD(tuple(fe(c) for c in coords))


SCALE_SMALL = EpsScale(delta=mpq(1, 10), n=0)


def test_build_pn_degenerate_offsets():
    spec = PnSpec(
        array=CenteredArray((0,), 0),
        origin=pt(0, 0),
        direction=(fe(0), fe(1)),
        scale=SCALE_SMALL,
    )
    pts = build_pn(spec)
    eps = SCALE_SMALL.eps
    assert [p.index for p in pts] == [0, 1]
    assert pts[0].point == pt(0, -eps)
    assert pts[1].point == pt(0, eps)


def test_build_pn_even_index():
    scale = EpsScale(delta=mpq(1, 10), n=1)
    spec = PnSpec(
        array=CenteredArray((0, 0, 0), 1),
        origin=pt(0, 0),
        direction=(fe(0), fe(1)),
        scale=scale,
    )
    pts = {p.index: p.point for p in build_pn(spec)}
    # i = 2: floor(2/2) = 1, even index: multiplier 3*eps - eps = 2*eps
    assert pts[2] == pt(0, 2 * scale.eps)


def test_build_pn_odd_index_with_value():
    scale = EpsScale(delta=mpq(1, 10), n=1)
    spec = PnSpec(
        array=CenteredArray((0, 0, 5), 1),
        origin=pt(0, 0),
        direction=(fe(0), fe(1)),
        scale=scale,
    )
    pts = {p.index: p.point for p in build_pn(spec)}
    want = 3 * scale.eps + 5 * scale.eps15 + scale.eps
    assert pts[3] == pt(0, want)


def test_build_pn_irrational_alpha():
    scale = EpsScale(delta=mpq(1, 10), n=0)
    spec = PnSpec(
        array=CenteredArray((0,), 0),
        origin=pt(0, 0),
        direction=(fe(0), fe(1)),
        scale=scale,
        alpha=SQRT2,
    )
    pts = {p.index: p.point for p in build_pn(spec)}
    assert pts[0] == PointD((fe(0), -(SQRT2 * scale.eps)))


def test_reversal_identity():
    rng = random.Random(5)
    scale = EpsScale.full_fidelity(2)
    arr = CenteredArray(tuple(rng.randint(-4, 4) for _ in range(5)), 2)
    rev = arr.reversed_negated()
    direction = (fe(mpq(3, 5)), fe(mpq(4, 5)))
    fwd = {
        p.index: p.point
        for p in build_pn(PnSpec(arr, pt(1, 2), direction, scale))
    }
    back = {
        p.index: p.point
        for p in build_pn(
            PnSpec(rev, pt(1, 2), tuple(-c for c in direction), scale)
        )
    }
    for i in range(-4, 6):
        assert fwd[i] == back[-i + 1]


def test_index_monotone_full_fidelity():
    rng = random.Random(9)
    n = 3
    scale = EpsScale.full_fidelity(n)
    arr = CenteredArray(tuple(rng.randint(-(n * n), n * n) for _ in range(2 * n + 1)), n)
    spec = PnSpec(arr, pt(0, 0), (fe(1), fe(0)), scale)
    mults = [pn_multiplier(spec, i) for i in range(-2 * n, 2 * n + 2)]
    assert all(fe_sign(b - a) > 0 for a, b in zip(mults, mults[1:]))


def test_hex_dirs_structure():
    for k in range(6):
        vx, vy = HEX_DIRS[k]
        nx, ny = HEX_DIRS[k + 6]
        assert nx == -vx and ny == -vy
        assert (vx * vx + vy * vy) == FE_ONE
    assert HEX_DIRS[0] == (fe(1), fe(0))
    assert HEX_DIRS[1] == (SQRT3 * mpq(1, 2), fe(mpq(1, 2)))


def test_build_anchors():
    scale = EpsScale.full_fidelity(2)
    h0 = pt(0, 0)
    h1 = pt(2, 0)
    anchors = build_anchors(AnchorSpec((h0, h1), scale))
    assert len(anchors) == 12
    delta_sq = anchor_delta(scale) ** 2
    for lp in anchors:
        home = h0 if lp.set_tag.split(".")[1] == "v0" else h1
        assert sq_dist(lp.point, home) == delta_sq
    # anchors of distinct vertices in the same direction are >= 2 apart
    for k in range(6):
        a0 = anchors[k].point
        a1 = anchors[6 + k].point
        assert fe_sign(sq_dist(a0, a1) - fe(4)) >= 0


def test_consistency_point():
    scale = EpsScale.full_fidelity(1)
    b = pt(0, 0)
    ctx = HexVertexContext(
        vertex=b,
        incident_edges=(
            (PointD((SQRT3, fe(1))), False),
            (PointD((-SQRT3, fe(1))), False),
        ),
    )
    lp = build_consistency(ctx, scale)
    assert lp.point == pt(0, -(1 - scale.eps))
    assert sq_dist(lp.point, b) == fe((1 - scale.eps) ** 2)
    # consistency point is the index-0 ladder point of the zero array on
    # the third half-edge
    spec = PnSpec(
        array=zero_array(0),
        origin=pt(0, -1),
        direction=(fe(0), fe(-1)),
        scale=scale,
    )
    assert build_pn(spec)[0].point == lp.point


def test_consistency_rejects_bad_contexts():
    scale = EpsScale.full_fidelity(1)
    with pytest.raises(BadContext):
        build_consistency(
            HexVertexContext(pt(0, 0), ((pt(2, 0), True), (pt(-2, 0), False))),
            scale,
        )
    with pytest.raises(BadContext):
        build_consistency(
            HexVertexContext(pt(0, 0), ((pt(2, 0), False),)), scale
        )


CANON_A = (-(SQRT3 * mpq(1, 2)), fe(mpq(1, 2)))
CANON_B = (SQRT3 * mpq(1, 2), fe(mpq(1, 2)))
CANON_C = (fe(0), fe(-1))


def test_tri_cover_center_zero_arrays():
    scale = EpsScale.full_fidelity(1)
    z = pt(0, 0)
    center = tri_cover_center(
        z, CANON_A, CANON_B, CANON_C,
        zero_array(1), zero_array(1), zero_array(1),
        0, 0, 0, scale,
    )
    assert center == z


def test_tri_cover_center_covers_prefixes():
    rng = random.Random(3)
    n = 2
    scale = EpsScale.full_fidelity(n)
    radius_sq = fe((1 - scale.eps + scale.eps17) ** 2)
    z = pt(0, 0)
    frames = [CANON_A, CANON_B, CANON_C]
    arrays = [
        CenteredArray(tuple(rng.randint(-(n * n), n * n) for _ in range(2 * n + 1)), n)
        for _ in range(3)
    ]
    families = [
        {
            p.index: p.point
            for p in build_pn(
                PnSpec(arr, z.translate(u), u, scale)
            )
        }
        for arr, u in zip(arrays, frames)
    ]
    checked = 0
    for i in range(-2 * n, 2 * n + 2, 2):
        for j in range(-2 * n, 2 * n + 2, 2):
            k = -i - j
            if not (-2 * n <= k <= 2 * n + 1):
                continue
            if arrays[0][i // 2] + arrays[1][j // 2] + arrays[2][k // 2] > 0:
                continue
            center = tri_cover_center(
                z, *frames, *arrays, i, j, k, scale
            )
            ball = Ball(center, radius_sq)
            for fam, split in zip(families, (i, j, k)):
                for idx, point in fam.items():
                    if idx <= split:
                        assert in_ball(point, ball)
            # stated distance bound from the vertex
            bound = 3 * scale.eps * (max(abs(i), abs(j)) + 1)
            assert fe_sign(fe(bound * bound) - sq_dist(center, z)) >= 0
            checked += 1
    assert checked >= 5


def test_suffix_tri_cover_center_covers_suffixes():
    rng = random.Random(4)
    n = 1
    scale = EpsScale.full_fidelity(n)
    radius_sq = fe((1 - scale.eps + scale.eps17) ** 2)
    z = pt(0, 0)
    frames = [CANON_A, CANON_B, CANON_C]
    arrays = [
        CenteredArray(tuple(rng.randint(-1, 1) for _ in range(2 * n + 1)), n)
        for _ in range(3)
    ]
    # suffix families run toward z: origin at distance 1, direction -u
    families = [
        {
            p.index: p.point
            for p in build_pn(
                PnSpec(arr, z.translate(u), tuple(-c for c in u), scale)
            )
        }
        for arr, u in zip(arrays, frames)
    ]
    checked = 0
    for i in range(-2 * n, 2 * n + 2, 2):
        for j in range(-2 * n, 2 * n + 2, 2):
            k = -i - j
            if not (-2 * n <= k <= 2 * n + 1):
                continue
            if arrays[0][i // 2] + arrays[1][j // 2] + arrays[2][k // 2] < 0:
                continue
            center = suffix_tri_cover_center(z, *frames, *arrays, i, j, k, scale)
            ball = Ball(center, radius_sq)
            for fam, split in zip(families, (i, j, k)):
                for idx, point in fam.items():
                    if idx > split:
                        assert in_ball(point, ball)
            checked += 1
    assert checked >= 1
