"""Reusable point-family builders shared by every reduction.

Three kinds of points appear in all constructions: the parametric ladder
families along edge directions, hexagonal anchor rings that pin disk
centers, and consistency points that force equal split indices across a
degree-2 vertex. This module also houses the explicit cover-center
formulas used by the completeness witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .exactnum import FE_ONE, FE_ZERO, SQRT3, EpsScale, FieldElem, fe, fe_mul
from .geometry import LabeledPoint, PointD, sq_norm, vec_add, vec_scale

__all__ = [
    "AnchorSpec",
    "BadContext",
    "CenteredArray",
    "HEX_DIRS",
    "HexVertexContext",
    "PnSpec",
    "anchor_delta",
    "anchor_tol_necessary",
    "anchor_tol_sufficient",
    "build_anchors",
    "build_consistency",
    "build_pn",
    "consistency_cover_center",
    "pn_multiplier",
    "suffix_tri_cover_center",
    "tri_cover_center",
    "zero_array",
]


class BadContext(ValueError):
    pass


class CenteredArray:
    """Integer array indexed over [-n .. n]."""

    __slots__ = ("values", "n")

    def __init__(self, values: Sequence[int], n: int):
        if len(values) != 2 * n + 1:
            raise ValueError(f"expected {2 * n + 1} values")
        self.values = tuple(int(v) for v in values)
        self.n = n

    def __getitem__(self, i: int) -> int:
        if not (-self.n <= i <= self.n):
            raise IndexError(i)
        return self.values[i + self.n]

    def reversed_negated(self) -> "CenteredArray":
        """The array A' with A'[i] = -A[-i]."""
        return CenteredArray(tuple(-v for v in reversed(self.values)), self.n)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CenteredArray)
            and self.n == other.n
            and self.values == other.values
        )

    def __repr__(self) -> str:
        return f"CenteredArray(n={self.n})"


def zero_array(n: int) -> CenteredArray:
    return CenteredArray((0,) * (2 * n + 1), n)


def _hex_dirs() -> Tuple[Tuple[FieldElem, FieldElem], ...]:
    half = mpq(1, 2)
    root = SQRT3 * half
    base = [
        (FE_ONE, FE_ZERO),
        (root, fe(half)),
        (fe(half), root),
        (FE_ZERO, FE_ONE),
        (fe(-half), root),
        (-root, fe(half)),
    ]
    full = base + [(-x, -y) for x, y in base]
    return tuple(full)


# HEX_DIRS[k-1] is the unit vector v_k, k = 1..12 (v_{k+6} = -v_k).
HEX_DIRS = _hex_dirs()


@dataclass(frozen=True)
class PnSpec:
    """Parameters of one ladder family."""

    array: CenteredArray
    origin: PointD
    direction: tuple
    scale: EpsScale
    alpha: FieldElem = FE_ONE
    tag: str = "P"


def pn_multiplier(spec: PnSpec, i: int) -> FieldElem:
    """Scalar coefficient of the direction vector at ladder index i."""
    half_floor = i // 2
    rational_part = mpq(3 * half_floor) * spec.scale.eps + mpq(
        spec.array[half_floor]
    ) * spec.scale.eps15
    offset = fe_mul(spec.alpha, fe(spec.scale.eps))
    if i % 2 == 0:
        return fe(rational_part) - offset
    return fe(rational_part) + offset


def build_pn(spec: PnSpec) -> List[LabeledPoint]:
    """The 2(2n+1) ladder points, indexed over {-2n, ..., 2n+1}."""
    n = spec.array.n
    out = []
    for i in range(-2 * n, 2 * n + 2):
        t = pn_multiplier(spec, i)
        point = spec.origin.translate(vec_scale(spec.direction, t))
        out.append(LabeledPoint(point, spec.tag, i))
    return out


def anchor_delta(scale: EpsScale, slack_n: Optional[int] = None) -> FieldElem:
    """Anchor distance 1 - (n/10 + 1) eps from the expected center.

    slack_n overrides the n that sets the slack budget; the default ties
    it to the scale's array half-length.
    """
    n = scale.n if slack_n is None else slack_n
    delta = 1 - (mpq(n, 10) + 1) * scale.eps
    if not (0 < delta < 1):
        raise ValueError("anchor distance must lie in (0, 1)")
    return fe(delta)


def anchor_tol_sufficient(scale: EpsScale, slack_n: Optional[int] = None) -> mpq:
    """Center perturbation radius that still covers all anchors (0.1 n eps)."""
    n = scale.n if slack_n is None else slack_n
    return mpq(n, 10) * scale.eps


def anchor_tol_necessary(scale: EpsScale, slack_n: Optional[int] = None) -> mpq:
    """Radius within which any covering disk center is pinned (0.3 n eps)."""
    n = scale.n if slack_n is None else slack_n
    return mpq(3 * n, 10) * scale.eps


@dataclass(frozen=True)
class AnchorSpec:
    """Six anchors per hexagonal vertex, along the even unit directions."""

    hex_vertices: Tuple[PointD, ...]
    scale: EpsScale
    slack_n: Optional[int] = None
    labels: Optional[Tuple[str, ...]] = None


def build_anchors(spec: AnchorSpec) -> List[LabeledPoint]:
    delta = anchor_delta(spec.scale, spec.slack_n)
    out = []
    for v_idx, vertex in enumerate(spec.hex_vertices):
        label = (
            spec.labels[v_idx]
            if spec.labels is not None
            else f"v{v_idx}"
        )
        for k in range(1, 7):
            direction = HEX_DIRS[2 * k - 1]  # v_{2k}
            point = vertex.translate(vec_scale(direction, delta))
            out.append(LabeledPoint(point, f"ANCHOR.{label}.{k}", None))
    return out


@dataclass(frozen=True)
class HexVertexContext:
    """A curve vertex with its incident edges (endpoint, shared flag)."""

    vertex: PointD
    incident_edges: Tuple[Tuple[PointD, bool], ...]


def build_consistency(ctx: HexVertexContext, scale: EpsScale, tag: str = "CONSISTENCY") -> LabeledPoint:
    """One point at distance 1 - eps from the vertex, on the third edge.

    Requires the vertex to have exactly two incident curve edges, both
    non-shared; the point goes along the remaining hexagonal direction.
    """
    if len(ctx.incident_edges) != 2:
        raise BadContext("consistency vertices have exactly two incident edges")
    if any(shared for _, shared in ctx.incident_edges):
        raise BadContext("consistency vertices touch no shared edge")
    units = []
    for endpoint, _ in ctx.incident_edges:
        step = endpoint - ctx.vertex
        if sq_norm(step) != fe(4):
            raise BadContext("hexagonal edges have length 2")
        units.append(vec_scale(step, fe(mpq(1, 2))))
    third = tuple(-(a + b) for a, b in zip(units[0], units[1]))
    if sq_norm(third) != FE_ONE:
        raise BadContext("incident edges are not at angle 2*pi/3")
    offset = vec_scale(third, fe(1 - scale.eps))
    return LabeledPoint(ctx.vertex.translate(offset), tag, None)


def _check_tri_frame(u_a, u_b, u_c) -> None:
    for u in (u_a, u_b, u_c):
        if sq_norm(u) != FE_ONE:
            raise ValueError("frame directions must be unit vectors")
    total = vec_add(vec_add(u_a, u_b), u_c)
    if any(not comp.is_zero for comp in total):
        raise ValueError("frame directions must sum to zero")


def tri_cover_center(
    z: PointD,
    u_a,
    u_b,
    u_c,
    arr_a: CenteredArray,
    arr_b: CenteredArray,
    arr_c: CenteredArray,
    i: int,
    j: int,
    k: int,
    scale: EpsScale,
) -> PointD:
    """Explicit center covering the prefixes A[<=i], B[<=j], C[<=k].

    The three families sit on unit half-edges out of z along u_a, u_b,
    u_c (pairwise angle 2*pi/3). Indices must be even with i+j+k = 0 and
    A[i/2] + B[j/2] + C[k/2] <= 0; under those conditions the returned
    center lies within 3*eps*(max(|i|,|j|)+1) of z and its radius-r disk
    covers the three prefixes.
    """
    if i % 2 or j % 2 or k % 2:
        raise ValueError("cover indices must be even")
    if i + j + k != 0:
        raise ValueError("cover indices must sum to zero")
    _check_tri_frame(u_a, u_b, u_c)
    if arr_a[i // 2] + arr_b[j // 2] + arr_c[k // 2] > 0:
        raise ValueError("array entries at the split must sum to at most zero")
    eps = scale.eps
    eps15 = scale.eps15
    a_val = arr_a[i // 2]
    b_val = arr_b[j // 2]
    d_x = fe_mul(
        SQRT3 * mpq(1, 2),
        fe(mpq(j - i) * eps + mpq(2 * (b_val - a_val), 3) * eps15),
    )
    d_y = fe(mpq(3 * (i + j), 2) * eps + mpq(a_val + b_val) * eps15)
    # Map the canonical frame (a at 120 deg, b at 60 deg, c straight down)
    # onto the actual directions: coefficients of u_a and u_b.
    third = SQRT3 * mpq(1, 3)
    m_a = -fe_mul(third, d_x) + d_y
    m_b = fe_mul(third, d_x) + d_y
    offset = vec_add(vec_scale(u_a, m_a), vec_scale(u_b, m_b))
    return z.translate(offset)


def suffix_tri_cover_center(
    z: PointD,
    u_a,
    u_b,
    u_c,
    arr_a: CenteredArray,
    arr_b: CenteredArray,
    arr_c: CenteredArray,
    i: int,
    j: int,
    k: int,
    scale: EpsScale,
) -> PointD:
    """Explicit center covering the suffixes A[>i], B[>j], C[>k].

    Mirrors the prefix construction through the index-reversal identity
    A'[m] = -A[-m]; requires even indices with i + j + k = 0 and
    A[i/2] + B[j/2] + C[k/2] >= 0.
    """
    return tri_cover_center(
        z,
        u_a,
        u_b,
        u_c,
        arr_a.reversed_negated(),
        arr_b.reversed_negated(),
        arr_c.reversed_negated(),
        -i,
        -j,
        -k,
        scale,
    )


def consistency_cover_center(
    z: PointD,
    u_in,
    u_out,
    u_third,
    arr: CenteredArray,
    i: int,
    scale: EpsScale,
) -> PointD:
    """Center covering incoming[>i], outgoing[<=i], and the consistency point.

    The incoming family runs toward z along -u_in, the outgoing family
    away from z along u_out, both built from the same array; i must be
    even.
    """
    return tri_cover_center(
        z,
        u_in,
        u_out,
        u_third,
        arr.reversed_negated(),
        arr,
        zero_array(arr.n),
        -i,
        i,
        0,
        scale,
    )
