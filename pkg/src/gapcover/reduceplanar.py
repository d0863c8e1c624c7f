"""Planar reductions: the two-hexagon 10-disk instance and the 6-disk instance.

Both constructions place ladder families along unit half-edges around a
ring of expected disk centers, pin the centers with anchor points, and
encode a zero triple of the source array as a consistent family split.
certify_no_planar decides coverability by enumerating prefix splits,
which is exhaustive for these instances because anchors pin each disk
near its expected center and balls meet the collinear families in
intervals; the certificate replays those structural facts exactly before
enumerating.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .exactnum import (
    FE_ONE,
    FE_ZERO,
    SQRT2,
    SQRT3,
    SQRT7,
    SQRT21,
    EpsScale,
    FieldElem,
    fe,
    fe_mul,
    fe_sign,
)
from .gadgets import (
    HEX_DIRS,
    CenteredArray,
    PnSpec,
    build_pn,
    consistency_cover_center,
    suffix_tri_cover_center,
    tri_cover_center,
)
from .gap3sum import GapInstance
from .exactnum import rational_sqrt_upper
from .geometry import (
    Ball,
    LabeledPoint,
    PointD,
    common_scale,
    cover_feasible,
    in_ball,
    meb,
    min_sq_dist_to_segment,
    scale_field,
    scale_point,
    sq_dist,
    vec_scale,
)
from .reports import CertificateReport
from .solver import ResourceExceeded

__all__ = [
    "GadgetConstants",
    "NotAWitness",
    "SixCenterInstance",
    "SoundnessViolation",
    "TenCenterInstance",
    "WitnessK",
    "anchor_force_check",
    "build_10center",
    "build_6center",
    "certify_no_planar",
    "planar_radius_sq",
    "witness_10center",
    "witness_6center",
]


class NotAWitness(ValueError):
    pass


class SoundnessViolation(AssertionError):
    pass


def planar_radius_sq(scale: EpsScale, gap_radius: bool = False) -> FieldElem:
    """Squared covering radius (1 - eps + eps^1.7)^2, or the gap variant
    with the doubled correction term."""
    bump = 2 * scale.eps17 if gap_radius else scale.eps17
    r = 1 - scale.eps + bump
    return fe(r * r)


def _pt(x, y) -> PointD:
    return PointD((x if isinstance(x, FieldElem) else fe(x),
                   y if isinstance(y, FieldElem) else fe(y)))


def _neg(p: PointD) -> PointD:
    return PointD(tuple(-c for c in p.coords))


def _mirror(p: PointD) -> PointD:
    return PointD((-p[0], p[1]))


def _unit_from(src: PointD, dst: PointD):
    step = dst - src
    return step


HALF = mpq(1, 2)
INV_SQRT2 = SQRT2 * HALF


@dataclass(frozen=True)
class GadgetConstants:
    """The fixed geometry of the 6-disk gadget."""

    o: PointD
    p: PointD
    p_bar: PointD
    c: PointD
    q: PointD
    q_hat: PointD
    gamma: FieldElem
    centers: Tuple[PointD, ...]


def _six_constants(scale: EpsScale) -> GadgetConstants:
    o = _pt(0, 0)
    p = _pt(SQRT3 * HALF, mpq(3, 2))
    p_bar = _mirror(p)
    c = _pt(0, 1)
    qx = SQRT3 * HALF + SQRT7 * HALF
    q = PointD((qx, FE_ZERO))
    # q_hat = q - ((11/sqrt7 - sqrt3) eps, 0)
    shift = fe_mul(SQRT7 * mpq(11, 7) - SQRT3, fe(scale.eps))
    q_hat = PointD((qx - shift, FE_ZERO))
    gamma = SQRT21 * mpq(1, 6) - fe(HALF)
    c1 = c
    c2 = PointD(
        (
            (p[0] + q[0]) * HALF,
            (p[1] + q[1]) * HALF,
        )
    )
    q_bar = _mirror(q)
    c3 = _neg(
        PointD(((p_bar[0] + q_bar[0]) * HALF, (p_bar[1] + q_bar[1]) * HALF))
    )
    c4 = _neg(c)
    c5 = _neg(c2)
    c6 = _neg(c3)
    return GadgetConstants(o, p, p_bar, c, q, q_hat, gamma, (c1, c2, c3, c4, c5, c6))


_RING1_DIRS = ((FE_ZERO, FE_ONE), (FE_ZERO, -FE_ONE), (INV_SQRT2, INV_SQRT2), (-INV_SQRT2, INV_SQRT2))
_RING2_DIRS = ((INV_SQRT2, INV_SQRT2), (-INV_SQRT2, -INV_SQRT2), (FE_ZERO, FE_ONE), (FE_ONE, FE_ZERO))


def _six_anchor_rings(constants: GadgetConstants, delta: FieldElem) -> Dict[int, List[PointD]]:
    c1, c2, c3, c4, c5, c6 = constants.centers
    ring1 = [c1.translate(vec_scale(d, delta)) for d in _RING1_DIRS]
    ring2 = [c2.translate(vec_scale(d, delta)) for d in _RING2_DIRS]
    ring6 = [_mirror(a) for a in ring2]
    ring3 = [_neg(a) for a in ring6]
    ring4 = [_neg(a) for a in ring1]
    ring5 = [_neg(a) for a in ring2]
    return {1: ring1, 2: ring2, 3: ring3, 4: ring4, 5: ring5, 6: ring6}


class SixCenterInstance:
    """Seven ladder families plus 24 anchors; expected centers c1..c6."""

    kind = "6center"
    k = 6

    def __init__(self, x: GapInstance, scale: EpsScale, gap_radius: bool = False):
        if scale.n != x.n:
            raise ValueError("scale and instance disagree on n")
        self.x = x
        self.scale = scale
        self.n = x.n
        self.gap_radius = gap_radius
        self.sq_radius = planar_radius_sq(scale, gap_radius)
        self.constants = _six_constants(scale)
        cst = self.constants
        arr = CenteredArray(x.entries_list(), x.n)

        down = (FE_ZERO, -FE_ONE)
        dir_cp = _unit_from(cst.c, cst.p)
        dir_cpb = _unit_from(cst.c, cst.p_bar)
        gamma_down = (FE_ZERO, -cst.gamma)
        specs = {
            "C": PnSpec(arr, cst.o, down, scale, FE_ONE, "C"),
            "A1": PnSpec(arr, cst.p_bar, dir_cpb, scale, FE_ONE, "A1"),
            "A3": PnSpec(arr, _neg(cst.p), dir_cp, scale, FE_ONE, "A3"),
            "B1": PnSpec(arr, cst.p, dir_cp, scale, FE_ONE, "B1"),
            "B3": PnSpec(arr, _neg(cst.p_bar), dir_cpb, scale, FE_ONE, "B3"),
            "A2": PnSpec(arr, _neg(cst.q_hat), gamma_down, scale, FE_ONE, "A2"),
            "B2": PnSpec(arr, cst.q_hat, gamma_down, scale, FE_ONE, "B2"),
        }
        self.families: Dict[str, Dict[int, PointD]] = {}
        points: List[LabeledPoint] = []
        for tag in ("A1", "A2", "A3", "B1", "B2", "B3", "C"):
            fam = build_pn(specs[tag])
            self.families[tag] = {lp.index: lp.point for lp in fam}
            points.extend(fam)

        delta = fe(1 - (mpq(x.n, 10) + 1) * scale.eps)
        self.anchor_rings = _six_anchor_rings(cst, delta)
        self.delta = delta
        for ell in range(1, 7):
            for s, a in enumerate(self.anchor_rings[ell]):
                points.append(LabeledPoint(a, f"ANCHOR.{ell}.{s}", None))
        self.points: Tuple[LabeledPoint, ...] = tuple(points)

    @property
    def index_range(self) -> range:
        return range(-2 * self.n, 2 * self.n + 2)


def build_6center(x: GapInstance, scale: EpsScale, gap_radius: bool = False) -> SixCenterInstance:
    return SixCenterInstance(x, scale, gap_radius)


@dataclass(frozen=True)
class WitnessK:
    centers: Tuple[PointD, ...]
    split: Tuple[int, int, int]


def _validate_solution(x: GapInstance, sol: Tuple[int, int, int]) -> None:
    i, j, k = sol
    r = x.n // 100
    if i + j + k != 0 or max(abs(i), abs(j), abs(k)) > r:
        raise NotAWitness(f"{sol} is outside the promise range")
    if x[i] + x[j] + x[k] != 0:
        raise NotAWitness(f"array entries at {sol} do not cancel")


def _midpoint(p: PointD, q: PointD) -> PointD:
    return PointD(tuple((a + b) * HALF for a, b in zip(p.coords, q.coords)))


def witness_6center(
    x: GapInstance, sol: Tuple[int, int, int], scale: EpsScale
) -> WitnessK:
    """Six explicit disk centers for a YES triple.

    The ring disks use the boundary-pair midpoints; the top and bottom
    disks use the explicit tri-edge cover centers. Each bridge center is
    checked against its stated distance bound from the expected center.
    """
    _validate_solution(x, sol)
    i, j, k = sol
    inst = SixCenterInstance(x, scale)
    cst = inst.constants
    arr = CenteredArray(x.entries_list(), x.n)
    eps = scale.eps

    u_a1 = _unit_from(cst.c, cst.p_bar)
    u_b1 = _unit_from(cst.c, cst.p)
    u_c = _unit_from(cst.c, cst.o)
    d1 = tri_cover_center(cst.c, u_a1, u_b1, u_c, arr, arr, arr, 2 * i, 2 * j, 2 * k, scale)

    neg_c = cst.centers[3]
    u_a3 = _unit_from(neg_c, _neg(cst.p))
    u_b3 = _unit_from(neg_c, _neg(cst.p_bar))
    u_c4 = _unit_from(neg_c, cst.o)
    d4 = suffix_tri_cover_center(
        neg_c, u_a3, u_b3, u_c4, arr, arr, arr, 2 * i, 2 * j, 2 * k, scale
    )

    fam = inst.families
    d2 = _midpoint(fam["B1"][2 * j + 1], fam["B2"][2 * j])
    d3 = _midpoint(fam["B2"][2 * j + 1], fam["B3"][2 * j])
    d6 = _midpoint(fam["A1"][2 * i + 1], fam["A2"][2 * i])
    d5 = _midpoint(fam["A2"][2 * i + 1], fam["A3"][2 * i])

    for center, ell, idx in ((d2, 2, j), (d3, 3, j), (d5, 5, i), (d6, 6, i)):
        bound = (abs(2 * idx) + 1) * eps
        if fe_sign(fe(bound * bound) - sq_dist(center, cst.centers[ell - 1])) < 0:
            raise SoundnessViolation(
                f"bridge center {ell} violates its (|j|+1) eps distance bound"
            )
    for center, ell in ((d1, 1), (d4, 4)):
        bound = 3 * eps * (max(abs(2 * i), abs(2 * j)) + 1)
        if fe_sign(fe(bound * bound) - sq_dist(center, cst.centers[ell - 1])) < 0:
            raise SoundnessViolation(
                f"tri-edge center {ell} violates its 3 eps (max+1) distance bound"
            )
    return WitnessK((d1, d2, d3, d4, d5, d6), sol)


# ---------------------------------------------------------------------------
# ten-disk two-hexagon instance


def _hexpt(x_int, y_sqrt3) -> PointD:
    return PointD((fe(x_int), SQRT3 * y_sqrt3))


class TenCenterInstance:
    """Two side-2 hexagons glued along a horizontal edge.

    Upper hexagon vertices a1..a6 (counterclockwise), lower b1..b6
    (clockwise) with b1 = a1 and b6 = a6; the shared edge runs from a6 to
    a1 and carries the reversed-orientation family.
    """

    kind = "10center"
    k = 10

    def __init__(self, x: GapInstance, scale: EpsScale, gap_radius: bool = False):
        if scale.n != x.n:
            raise ValueError("scale and instance disagree on n")
        self.x = x
        self.scale = scale
        self.n = x.n
        self.gap_radius = gap_radius
        self.sq_radius = planar_radius_sq(scale, gap_radius)

        a = {
            1: _hexpt(1, 0),
            2: _hexpt(2, 1),
            3: _hexpt(1, 2),
            4: _hexpt(-1, 2),
            5: _hexpt(-2, 1),
            6: _hexpt(-1, 0),
        }
        b = {
            1: a[1],
            2: _hexpt(2, -1),
            3: _hexpt(1, -2),
            4: _hexpt(-1, -2),
            5: _hexpt(-2, -1),
            6: a[6],
        }
        self.vertices: Dict[str, PointD] = {}
        for idx in range(1, 7):
            self.vertices[f"a{idx}"] = a[idx]
        for idx in range(2, 6):
            self.vertices[f"b{idx}"] = b[idx]

        arr = CenteredArray(x.entries_list(), x.n)
        self.families: Dict[str, Dict[int, PointD]] = {}
        points: List[LabeledPoint] = []

        def add_family(tag: str, start: PointD, end: PointD) -> None:
            mid = _midpoint(start, end)
            # |mid - start| = 1 since hexagonal edges have length 2
            spec = PnSpec(arr, mid, (mid - start), scale, FE_ONE, tag)
            fam = build_pn(spec)
            self.families[tag] = {lp.index: lp.point for lp in fam}
            points.extend(fam)

        for ell in range(1, 6):
            add_family(f"A{ell}", a[ell], a[ell + 1])
            add_family(f"B{ell}", b[ell], b[ell + 1])
        # shared edge (a6, a1): points run on the reversed edge (a1, a6)
        add_family("C", a[1], a[6])

        # consistency points at the eight degree-2 vertices
        self.consistency: Dict[str, PointD] = {}
        third_dirs = {}
        for label, incoming, outgoing in (
            ("a2", a[1], a[3]),
            ("a3", a[2], a[4]),
            ("a4", a[3], a[5]),
            ("a5", a[4], a[6]),
            ("b2", b[1], b[3]),
            ("b3", b[2], b[4]),
            ("b4", b[3], b[5]),
            ("b5", b[4], b[6]),
        ):
            vertex = self.vertices[label]
            u_in = vec_scale(incoming - vertex, fe(HALF))
            u_out = vec_scale(outgoing - vertex, fe(HALF))
            third = tuple(-(p + q) for p, q in zip(u_in, u_out))
            third_dirs[label] = third
            cons = vertex.translate(vec_scale(third, fe(1 - scale.eps)))
            self.consistency[label] = cons
            points.append(LabeledPoint(cons, f"CONSISTENCY.{label}", None))
        self._third_dirs = third_dirs

        delta = fe(1 - (mpq(x.n, 10) + 1) * scale.eps)
        self.delta = delta
        self.anchors: Dict[str, List[PointD]] = {}
        for label, vertex in self.vertices.items():
            ring = []
            for idx in range(1, 7):
                direction = HEX_DIRS[2 * idx - 1]
                anchor = vertex.translate(vec_scale(direction, delta))
                ring.append(anchor)
                points.append(LabeledPoint(anchor, f"ANCHOR.{label}.{idx}", None))
            self.anchors[label] = ring
        self.points: Tuple[LabeledPoint, ...] = tuple(points)

    @property
    def index_range(self) -> range:
        return range(-2 * self.n, 2 * self.n + 2)


def build_10center(x: GapInstance, scale: EpsScale, gap_radius: bool = False) -> TenCenterInstance:
    return TenCenterInstance(x, scale, gap_radius)


def witness_10center(
    x: GapInstance, sol: Tuple[int, int, int], scale: EpsScale
) -> WitnessK:
    """Ten explicit disk centers for a YES triple of the two-hexagon gadget."""
    _validate_solution(x, sol)
    i, j, k = sol
    inst = TenCenterInstance(x, scale)
    arr = CenteredArray(x.entries_list(), x.n)
    a1 = inst.vertices["a1"]
    a6 = inst.vertices["a6"]

    # disk at a1: prefixes of A1, B1, C
    u_a = _midpoint(a1, inst.vertices["a2"]) - a1
    u_b = _midpoint(a1, inst.vertices["b2"]) - a1
    u_c = _midpoint(a1, a6) - a1
    d_a1 = tri_cover_center(a1, u_a, u_b, u_c, arr, arr, arr, 2 * i, 2 * j, 2 * k, scale)

    # disk at a6: suffixes of A5, B5, C
    u_a = _midpoint(a6, inst.vertices["a5"]) - a6
    u_b = _midpoint(a6, inst.vertices["b5"]) - a6
    u_c = _midpoint(a6, a1) - a6
    d_a6 = suffix_tri_cover_center(
        a6, u_a, u_b, u_c, arr, arr, arr, 2 * i, 2 * j, 2 * k, scale
    )

    centers: Dict[str, PointD] = {"a1": d_a1, "a6": d_a6}
    ring_neighbors = {
        "a2": ("a1", "a3"),
        "a3": ("a2", "a4"),
        "a4": ("a3", "a5"),
        "a5": ("a4", "a6"),
        "b2": ("a1", "b3"),
        "b3": ("b2", "b4"),
        "b4": ("b3", "b5"),
        "b5": ("b4", "a6"),
    }
    for label, (prev, nxt) in ring_neighbors.items():
        vertex = inst.vertices[label]
        u_in = _midpoint(vertex, inst.vertices[prev]) - vertex
        u_out = _midpoint(vertex, inst.vertices[nxt]) - vertex
        u_third = inst._third_dirs[label]
        split = 2 * i if label.startswith("a") else 2 * j
        centers[label] = consistency_cover_center(
            vertex, u_in, u_out, u_third, arr, split, scale
        )

    order = ("a1", "a2", "a3", "a4", "a5", "a6", "b2", "b3", "b4", "b5")
    eps = scale.eps
    for label in order:
        bound = 3 * eps * (max(abs(2 * i), abs(2 * j)) + 1)
        if fe_sign(fe(bound * bound) - sq_dist(centers[label], inst.vertices[label])) < 0:
            raise SoundnessViolation(
                f"disk center at {label} violates the 3 eps (max+1) bound"
            )
    return WitnessK(tuple(centers[label] for label in order), sol)


# ---------------------------------------------------------------------------
# anchor force checks


def anchor_force_check(inst) -> CertificateReport:
    """Exact replay of the anchor lemmas' combinatorial premises."""
    started = time.monotonic()
    report = CertificateReport(
        kind=f"anchor-force-{inst.kind}",
        config=f"n={inst.n} delta={inst.scale.delta}",
    )
    scale = inst.scale
    r_sq = inst.sq_radius
    four = fe(4)

    if isinstance(inst, SixCenterInstance):
        rings = inst.anchor_rings
        # the six primary anchors are pairwise at least 2 apart
        worst = None
        ok = True
        for ell1 in range(1, 7):
            for ell2 in range(ell1 + 1, 7):
                d = sq_dist(rings[ell1][0], rings[ell2][0])
                if worst is None or fe_sign(d - worst) < 0:
                    worst = d
                if fe_sign(d - four) < 0:
                    ok = False
        report.add(
            "primary-pairwise",
            "lem:6cen-anchor",
            "a_{l,0} pairs",
            f"min sq_dist vs 4: {'>=' if ok else '<'}",
            ok,
        )
        # cross pairs between vertically adjacent rings: 2 Delta^2 + 9/4 > 4
        delta_sq = inst.delta * inst.delta
        expected = delta_sq * 2 + fe(mpq(9, 4))
        for ell_a, ell_b in ((2, 3), (3, 2), (5, 6), (6, 5)):
            d = sq_dist(rings[ell_a][1], rings[ell_b][0])
            exact = d == expected
            beyond = fe_sign(d - four) > 0
            report.add(
                f"cross-{ell_a}1-{ell_b}0",
                "lem:6cen-anchor",
                f"a_{ell_a},1 vs a_{ell_b},0",
                "equals 2 Delta^2 + 9/4 and exceeds 4",
                exact and beyond,
            )
        for ell_a, ell_b in ((1, 4), (4, 1)):
            d = sq_dist(rings[ell_a][1], rings[ell_b][0])
            report.add(
                f"cross-{ell_a}1-{ell_b}0",
                "lem:6cen-anchor",
                f"a_{ell_a},1 vs a_{ell_b},0",
                "exactly 4",
                d == four,
            )
        # avg_center replay on each diametral pair: any covering center sits
        # within sqrt(2 delta-hat) of the midpoint, i.e. r^2 <= 2 - 2D + D^2
        lhs = r_sq
        rhs = fe(2) - inst.delta * 2 + delta_sq
        for ell in range(1, 7):
            pair_dist = sq_dist(rings[ell][0], rings[ell][1])
            diametral = pair_dist == delta_sq * 4
            report.add(
                f"avg-center-{ell}",
                "lem:avg_center",
                f"ring {ell} diametral pair",
                "2 Delta separation and r^2 <= 2 - 2 Delta + Delta^2",
                diametral and fe_sign(rhs - lhs) >= 0,
            )
        # every anchor within 1 - eps of its expected center
        reach = fe((1 - scale.eps) ** 2)
        ok = True
        for ell in range(1, 7):
            for a in rings[ell]:
                if fe_sign(reach - sq_dist(a, inst.constants.centers[ell - 1])) < 0:
                    ok = False
        report.add(
            "delta-membership",
            "lem:6cen-anchor",
            "all 24 anchors",
            "within 1 - eps of expected centers",
            ok,
        )
    else:
        # two-hexagon instance: same-direction anchors of distinct vertices
        # are at least 2 apart (the at-most-six lemma's separation fact)
        ok = True
        labels = list(inst.anchors)
        for idx in range(6):
            for pos1 in range(len(labels)):
                for pos2 in range(pos1 + 1, len(labels)):
                    d = sq_dist(
                        inst.anchors[labels[pos1]][idx],
                        inst.anchors[labels[pos2]][idx],
                    )
                    if fe_sign(d - four) < 0:
                        ok = False
        report.add(
            "same-direction-separation",
            "lem:anchor-at-most-6",
            "same-direction anchors across vertices",
            "pairwise >= 2",
            ok,
        )
        # fixing-center premise: consecutive anchor angles are 60 degrees
        cos60 = fe(HALF)
        ok = True
        for label, ring in inst.anchors.items():
            vertex = inst.vertices[label]
            delta_sq = inst.delta * inst.delta
            for s in range(6):
                u = ring[s] - vertex
                v = ring[(s + 1) % 6] - vertex
                dot = u[0] * v[0] + u[1] * v[1]
                if dot != fe_mul(cos60, delta_sq):
                    ok = False
        report.add(
            "consecutive-angles",
            "lem:fixing_center",
            "anchor rings",
            "consecutive angle exactly pi/3 <= 3 pi/4",
            ok,
        )
        reach = fe((1 - scale.eps) ** 2)
        ok = True
        for label, ring in inst.anchors.items():
            for a in ring:
                if fe_sign(reach - sq_dist(a, inst.vertices[label])) < 0:
                    ok = False
        report.add(
            "delta-membership",
            "lem:anchor-unique",
            "all 60 anchors",
            "within 1 - eps of their vertices",
            ok,
        )
    report.summary = "pass" if report.verdict else "fail"
    report.elapsed_s = time.monotonic() - started
    return report


# ---------------------------------------------------------------------------
# prefix-split certification


@dataclass(frozen=True)
class _DiskSpec:
    label: str
    center: PointD
    fixed: Tuple[PointD, ...]
    slots: Tuple[Tuple[str, str], ...]  # (family variable, "prefix"|"suffix")


class _PlanarSplitCertifier:
    """Shared split-enumeration engine for the planar instances.

    Point coordinates are rescaled to integer coefficients once; per-disk
    feasibility uses hull endpoints of the split families plus the disk's
    fixed points, with memoization keyed by the relevant split indices.
    """

    def __init__(
        self,
        families: Dict[str, Dict[int, PointD]],
        disks: Sequence[_DiskSpec],
        rho: FieldElem,
        n: int,
        pin: mpq,
    ):
        everything = [p for fam in families.values() for p in fam.values()]
        for disk in disks:
            everything.extend(disk.fixed)
            everything.append(disk.center)
        factor = common_scale(everything, (rho,))
        self.factor = factor
        self.families = {
            var: {i: scale_point(p, factor) for i, p in fam.items()}
            for var, fam in families.items()
        }
        self.disks = [
            _DiskSpec(
                d.label,
                scale_point(d.center, factor),
                tuple(scale_point(p, factor) for p in d.fixed),
                d.slots,
            )
            for d in disks
        ]
        self.rho = scale_field(rho, factor * factor)
        self.n = n
        self.lo_idx = -2 * n
        self.hi_idx = 2 * n + 1
        self.pin = pin
        self._reach_sq = None
        self._feas_cache: Dict[Tuple[int, Tuple[int, ...]], bool] = {}
        self._var_disks: Dict[str, List[Tuple[int, str]]] = {}
        for d_idx, disk in enumerate(self.disks):
            for var, side in disk.slots:
                self._var_disks.setdefault(var, []).append((d_idx, side))

    def _segment(self, var: str, side: str, split: int) -> List[PointD]:
        fam = self.families[var]
        if side == "prefix":
            if split < self.lo_idx:
                return []
            return [fam[self.lo_idx], fam[min(split, self.hi_idx)]]
        if split >= self.hi_idx:
            return []
        return [fam[split + 1], fam[self.hi_idx]]

    def disk_feasible(self, d_idx: int, splits: Tuple[int, ...]) -> bool:
        key = (d_idx, splits)
        got = self._feas_cache.get(key)
        if got is None:
            disk = self.disks[d_idx]
            pts = list(disk.fixed)
            for (var, side), split in zip(disk.slots, splits):
                pts.extend(self._segment(var, side, split))
            got = cover_feasible(pts, self.rho)
            self._feas_cache[key] = got
        return got

    def var_window(self, var: str) -> Tuple[int, int]:
        """Exact bounds on a family's split from its two incident disks.

        The prefix-side disk alone caps the split from above, the
        suffix-side disk from below; both relaxed checks are monotone
        because the point sets grow with the prefix or suffix.
        """
        lo_bound = self.lo_idx - 1
        hi_bound = self.hi_idx
        lo, hi = lo_bound, hi_bound
        for d_idx, side in self._var_disks[var]:
            disk = self.disks[d_idx]

            def relaxed(split: int) -> bool:
                splits = []
                for v, s in disk.slots:
                    if v == var:
                        splits.append(split)
                    elif s == "prefix":
                        splits.append(lo_bound)
                    else:
                        splits.append(hi_bound)
                return self.disk_feasible(d_idx, tuple(splits))

            if side == "prefix":
                if relaxed(hi_bound):
                    continue
                if not relaxed(lo_bound):
                    return (1, 0)
                a, b = lo_bound, hi_bound  # relaxed(a) True, relaxed(b) False
                while b - a > 1:
                    mid = (a + b) // 2
                    if relaxed(mid):
                        a = mid
                    else:
                        b = mid
                hi = min(hi, a)
            else:
                if relaxed(lo_bound):
                    continue
                if not relaxed(hi_bound):
                    return (1, 0)
                a, b = lo_bound, hi_bound  # relaxed(a) False, relaxed(b) True
                while b - a > 1:
                    mid = (a + b) // 2
                    if relaxed(mid):
                        b = mid
                    else:
                        a = mid
                lo = max(lo, b)
        return (lo, hi)

    def structure_check(self, report: CertificateReport, consistency_owner: Dict[int, Tuple[PointD, ...]]) -> None:
        """Replays the center-pinning admissibility facts exactly.

        With every disk pinned within the final fixing-center radius of
        its expected center: each family segment must be out of reach of
        every non-incident disk, neither incident disk may reach the far
        end of its family, and consistency points must be out of reach of
        every foreign disk.
        """
        if self._reach_sq is None:
            raise AssertionError("set_reach must run before structure_check")
        ok_points = True
        ok_extent = True
        reach_sq = self._reach_sq
        for var, fam in self.families.items():
            owners = dict(self._var_disks[var])
            lo_pt = fam[self.lo_idx]
            hi_pt = fam[self.hi_idx]
            for d_idx, disk in enumerate(self.disks):
                if d_idx not in owners:
                    gap = min_sq_dist_to_segment(disk.center, lo_pt, hi_pt)
                    if fe_sign(gap - reach_sq) <= 0:
                        ok_points = False
                else:
                    far = hi_pt if owners[d_idx] == "prefix" else lo_pt
                    if fe_sign(reach_sq - sq_dist(far, disk.center)) >= 0:
                        ok_extent = False
        report.add(
            "family-admissibility",
            "obs:possibleCenters",
            "family segments vs pinned disk reaches",
            "non-incident disks strictly out of reach",
            ok_points,
        )
        report.add(
            "family-extent",
            "obs:possibleCenters",
            "family extremes vs incident disk reach",
            "no disk reaches the far end of a family",
            ok_extent,
        )
        ok_cons = True
        for d_idx, cons_points in consistency_owner.items():
            for p in cons_points:
                scaled = scale_point(p, self.factor)
                for other_idx, other in enumerate(self.disks):
                    if other_idx == d_idx:
                        continue
                    if fe_sign(sq_dist(scaled, other.center) - reach_sq) <= 0:
                        ok_cons = False
        report.add(
            "consistency-exclusivity",
            "lem:2D-consistency",
            "consistency points vs foreign pinned disks",
            "only the home disk can reach each consistency point",
            ok_cons,
        )

    def set_reach(self, r_unscaled: mpq, pin: mpq) -> None:
        reach = r_unscaled + pin
        self._reach_sq = fe(reach * reach * self.factor * self.factor)


def _six_disks(inst: SixCenterInstance) -> Tuple[Dict[str, Dict[int, PointD]], List[_DiskSpec]]:
    cst = inst.constants
    rings = inst.anchor_rings
    families = {
        "iA1": inst.families["A1"],
        "iA2": inst.families["A2"],
        "iA3": inst.families["A3"],
        "jB1": inst.families["B1"],
        "jB2": inst.families["B2"],
        "jB3": inst.families["B3"],
        "kC": inst.families["C"],
    }
    disks = [
        _DiskSpec("D1", cst.centers[0], tuple(rings[1]),
                  (("iA1", "prefix"), ("jB1", "prefix"), ("kC", "prefix"))),
        _DiskSpec("D2", cst.centers[1], tuple(rings[2]),
                  (("jB1", "suffix"), ("jB2", "prefix"))),
        _DiskSpec("D3", cst.centers[2], tuple(rings[3]),
                  (("jB2", "suffix"), ("jB3", "prefix"))),
        _DiskSpec("D4", cst.centers[3], tuple(rings[4]),
                  (("iA3", "suffix"), ("jB3", "suffix"), ("kC", "suffix"))),
        _DiskSpec("D5", cst.centers[4], tuple(rings[5]),
                  (("iA2", "suffix"), ("iA3", "prefix"))),
        _DiskSpec("D6", cst.centers[5], tuple(rings[6]),
                  (("iA1", "suffix"), ("iA2", "prefix"))),
    ]
    return families, disks


def _ten_disks(inst: TenCenterInstance) -> Tuple[Dict[str, Dict[int, PointD]], List[_DiskSpec]]:
    families = {}
    for ell in range(1, 6):
        families[f"sA{ell}"] = inst.families[f"A{ell}"]
        families[f"tB{ell}"] = inst.families[f"B{ell}"]
    families["uC"] = inst.families["C"]
    disks = [
        _DiskSpec(
            "a1",
            inst.vertices["a1"],
            tuple(inst.anchors["a1"]),
            (("sA1", "prefix"), ("tB1", "prefix"), ("uC", "prefix")),
        )
    ]
    for ell in range(2, 6):
        label = f"a{ell}"
        disks.append(
            _DiskSpec(
                label,
                inst.vertices[label],
                tuple(inst.anchors[label]) + (inst.consistency[label],),
                ((f"sA{ell - 1}", "suffix"), (f"sA{ell}", "prefix")),
            )
        )
    disks.append(
        _DiskSpec(
            "a6",
            inst.vertices["a6"],
            tuple(inst.anchors["a6"]),
            (("sA5", "suffix"), ("tB5", "suffix"), ("uC", "suffix")),
        )
    )
    for ell in range(2, 6):
        label = f"b{ell}"
        disks.append(
            _DiskSpec(
                label,
                inst.vertices[label],
                tuple(inst.anchors[label]) + (inst.consistency[label],),
                ((f"tB{ell - 1}", "suffix"), (f"tB{ell}", "prefix")),
            )
        )
    return families, disks


def _staged_anchor_ownership_six(inst: SixCenterInstance, report: CertificateReport) -> None:
    """Exact replay of the six-disk anchor-forcing proof.

    Stage 0: primary anchors pairwise beyond 2r force six distinct disks.
    Stage 1: every diametral mate is beyond 2r of every foreign primary
    anchor, so it rides with its own primary; the averaged-center bound
    then pins each disk within sqrt(2 delta-hat) of its expected center.
    Stage 2: the side anchors are beyond the stage-1 reach of every
    foreign pinned disk, completing per-disk ownership of all anchors;
    the four directions have consecutive angles at most 3pi/4, so the
    fixing-center bound applies.
    """
    scale = inst.scale
    rings = inst.anchor_rings
    two_r_sq = fe(4) * inst.sq_radius
    ok0 = True
    for ell1 in range(1, 7):
        for ell2 in range(ell1 + 1, 7):
            if fe_sign(sq_dist(rings[ell1][0], rings[ell2][0]) - two_r_sq) <= 0:
                ok0 = False
    report.add(
        "stage0-primary",
        "lem:6cen-anchor",
        "a_{l,0} pairwise",
        "strictly beyond 2r",
        ok0,
    )
    ok1 = True
    for ell in range(1, 7):
        for other in range(1, 7):
            if other == ell:
                continue
            if fe_sign(sq_dist(rings[ell][1], rings[other][0]) - two_r_sq) <= 0:
                ok1 = False
    report.add(
        "stage1-diametral",
        "lem:6cen-anchor",
        "a_{l,1} vs foreign a_{l',0}",
        "strictly beyond 2r",
        ok1,
    )
    delta_hat = (mpq(inst.n, 10) + 1) * scale.eps
    pin1 = rational_sqrt_upper(2 * delta_hat)
    bump = 2 * scale.eps17 if inst.gap_radius else scale.eps17
    reach1 = 1 - scale.eps + bump + pin1
    reach1_sq = fe(reach1 * reach1)
    ok2 = True
    for ell in range(1, 7):
        for s in (2, 3):
            for other in range(1, 7):
                if other == ell:
                    continue
                gap = sq_dist(rings[ell][s], inst.constants.centers[other - 1])
                if fe_sign(gap - reach1_sq) <= 0:
                    ok2 = False
    report.add(
        "stage2-side-anchors",
        "lem:avg_center",
        "a_{l,2}, a_{l,3} vs foreign centers pinned within sqrt(2 delta-hat)",
        "strictly out of reach",
        ok2,
    )
    # fixing-center premise: consecutive anchor angles at most 3pi/4
    ok3 = True
    cos_bound = -(SQRT2 * mpq(1, 2))
    delta_sq = inst.delta * inst.delta
    for ell in range(1, 7):
        vertex = inst.constants.centers[ell - 1]
        dirs = [a - vertex for a in rings[ell]]
        import math

        angles = sorted(
            range(4),
            key=lambda idx: math.atan2(dirs[idx][1].approx(), dirs[idx][0].approx()),
        )
        for pos in range(4):
            u = dirs[angles[pos]]
            v = dirs[angles[(pos + 1) % 4]]
            dot = u[0] * v[0] + u[1] * v[1]
            if fe_sign(dot - fe_mul(cos_bound, delta_sq)) < 0:
                ok3 = False
    report.add(
        "stage2-angles",
        "lem:fixing_center",
        "consecutive anchor angles per disk",
        "at most 3pi/4",
        ok3,
    )


def certify_no_planar(inst, max_nodes: int = 2_000_000) -> CertificateReport:
    """Prefix-split certificate for the planar instances.

    Reports either a feasible split vector decoding to a zero triple, or
    a full infeasibility certificate (every split vector in the exact
    windows fails some disk, and everything outside the windows fails the
    recorded single-family relaxations by monotonicity). The preamble
    replays the anchor-forcing facts that justify enumerating prefix
    splits at this instance; for the two-hexagon gadget the disk-anchor
    bijection itself comes from the anchor uniqueness lemma, whose
    separation and angle premises are checked exactly.
    """
    started = time.monotonic()
    if isinstance(inst, SixCenterInstance):
        families, disks = _six_disks(inst)
    elif isinstance(inst, TenCenterInstance):
        families, disks = _ten_disks(inst)
    else:
        raise TypeError(type(inst))
    scale = inst.scale
    pin = mpq(27, 10) * (mpq(inst.n, 10) + 1) * scale.eps
    bump = 2 * scale.eps17 if inst.gap_radius else scale.eps17
    r_unscaled = 1 - scale.eps + bump

    report = CertificateReport(
        kind=f"certify-{inst.kind}",
        config=f"n={inst.n} delta={scale.delta} gap_radius={inst.gap_radius}",
    )
    if isinstance(inst, SixCenterInstance):
        _staged_anchor_ownership_six(inst, report)
        consistency_owner: Dict[int, Tuple[PointD, ...]] = {}
    else:
        anchors_report = anchor_force_check(inst)
        for record in anchors_report.records:
            report.records.append(record)
        report.extra = report.extra + (
            "disk-anchor bijection from the anchor uniqueness lemma",
        )
        label_order = [d.label for d in disks]
        consistency_owner = {
            d_idx: (inst.consistency[label],)
            for d_idx, label in enumerate(label_order)
            if label in inst.consistency
        }
    certifier = _PlanarSplitCertifier(families, disks, inst.sq_radius, inst.n, pin)
    certifier.set_reach(r_unscaled, pin)
    certifier.structure_check(report, consistency_owner)
    if not report.verdict:
        report.summary = "structure violated: split enumeration not justified"
        report.elapsed_s = time.monotonic() - started
        return report

    windows: Dict[str, Tuple[int, int]] = {}
    for var in families:
        lo, hi = certifier.var_window(var)
        windows[var] = (lo, hi)
        report.add(
            f"window-{var}",
            "lm:covering-basic",
            f"family={var}",
            f"lo={lo} hi={hi}",
            True,
        )
        if lo > hi:
            report.summary = f"infeasible: family {var} admits no split index"
            report.data["outcome"] = "infeasible"
            report.elapsed_s = time.monotonic() - started
            return report

    var_order = sorted(families)
    nodes = 0
    assignment: Dict[str, int] = {}
    disk_vars = [tuple(var for var, _ in d.slots) for d in disks]

    def disks_ready(var: str) -> List[int]:
        out = []
        for d_idx, dvars in enumerate(disk_vars):
            if var in dvars and all(v in assignment for v in dvars):
                out.append(d_idx)
        return out

    solution: Optional[Dict[str, int]] = None

    def search(pos: int) -> bool:
        nonlocal nodes, solution
        if pos == len(var_order):
            solution = dict(assignment)
            return True
        var = var_order[pos]
        lo, hi = windows[var]
        for split in range(lo, hi + 1):
            nodes += 1
            if nodes > max_nodes:
                raise ResourceExceeded("split search node budget exhausted")
            assignment[var] = split
            ok = True
            for d_idx in disks_ready(var):
                splits = tuple(assignment[v] for v in disk_vars[d_idx])
                if not certifier.disk_feasible(d_idx, splits):
                    ok = False
                    break
            if ok and search(pos + 1):
                return True
            del assignment[var]
        return False

    found = search(0)
    report.data["nodes"] = str(nodes)
    if not found:
        report.add(
            "all-splits",
            "lm:covering-basic",
            f"windows={windows}",
            "every split vector fails some disk",
            True,
        )
        report.summary = "infeasible: full infeasibility certificate"
        report.data["outcome"] = "infeasible"
    else:
        decoded = _decode_split(inst, solution)
        report.add(
            "feasible-split",
            "lm:covering-basic",
            f"splits={solution}",
            f"decodes to {decoded}",
            True,
        )
        report.summary = f"coverable: decodes to {decoded}"
        report.data["outcome"] = "coverable"
        report.data["witness"] = ",".join(str(v) for v in decoded)
    report.elapsed_s = time.monotonic() - started
    return report


def _decode_split(inst, solution: Dict[str, int]) -> Tuple[int, int, int]:
    """Equality and evenness checks on a feasible split, then the triple."""
    if isinstance(inst, SixCenterInstance):
        i_vals = [solution["iA1"], solution["iA2"], solution["iA3"]]
        j_vals = [solution["jB1"], solution["jB2"], solution["jB3"]]
        k_val = solution["kC"]
    else:
        i_vals = [solution[f"sA{ell}"] for ell in range(1, 6)]
        j_vals = [solution[f"tB{ell}"] for ell in range(1, 6)]
        k_val = solution["uC"]
    if len(set(i_vals)) != 1 or len(set(j_vals)) != 1:
        raise SoundnessViolation(f"feasible split is not constant: {solution}")
    i_hat, j_hat, k_hat = i_vals[0], j_vals[0], k_val
    if i_hat % 2 or j_hat % 2 or k_hat % 2:
        raise SoundnessViolation(f"feasible split has odd indices: {solution}")
    i, j, k = i_hat // 2, j_hat // 2, k_hat // 2
    if i + j + k != 0:
        raise SoundnessViolation(f"decoded indices do not sum to zero: {i},{j},{k}")
    if inst.x[i] + inst.x[j] + inst.x[k] != 0:
        raise SoundnessViolation(
            f"decoded entries do not cancel: X[{i}]+X[{j}]+X[{k}] != 0"
        )
    return (i, j, k)
