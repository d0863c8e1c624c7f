"""Exact points, balls, and minimum enclosing balls in dimensions 2 and 3.

Coordinates are FieldElem values, so every predicate here is decided
exactly. Closed-ball convention throughout: the boundary counts as
covered.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from gmpy2 import mpq

from .exactnum import FE_TWO, FE_ZERO, FieldElem, fe, fe_inv, fe_mul, fe_sign

__all__ = [
    "Ball",
    "DegenerateSupport",
    "DimensionMismatch",
    "EmptyInput",
    "LabeledPoint",
    "PointD",
    "circumball",
    "in_ball",
    "meb",
    "meb_oracle",
    "sq_dist",
    "sq_norm",
    "vec_add",
    "vec_dot",
    "vec_neg",
    "vec_scale",
    "vec_sub",
]


class DimensionMismatch(ValueError):
    pass


class EmptyInput(ValueError):
    pass


class DegenerateSupport(ValueError):
    pass


Vector = tuple  # tuple of FieldElem


class PointD:
    """Point in R^2 or R^3 with exact coordinates."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        cs = tuple(c if isinstance(c, FieldElem) else fe(c) for c in coords)
        if len(cs) not in (2, 3):
            raise ValueError("points live in dimension 2 or 3")
        self.coords = cs

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> FieldElem:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, PointD) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return "PointD(" + ", ".join(repr(c) for c in self.coords) + ")"

    def __sub__(self, other: "PointD") -> Vector:
        _check_dims(self, other)
        return tuple(a - b for a, b in zip(self.coords, other.coords))

    def translate(self, vec: Sequence) -> "PointD":
        if len(vec) != self.dim:
            raise DimensionMismatch("vector/point dimension mismatch")
        return PointD(tuple(a + b for a, b in zip(self.coords, vec)))

    def approx(self) -> tuple:
        return tuple(c.approx() for c in self.coords)

    def serialize(self) -> str:
        return " ".join(c.serialize() for c in self.coords)

    @staticmethod
    def deserialize(text: str) -> "PointD":
        return PointD(tuple(FieldElem.deserialize(tok) for tok in text.split()))


def _check_dims(p: PointD, q: PointD) -> None:
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimension mismatch: {p.dim} vs {q.dim}")


def vec_dot(u: Sequence, v: Sequence) -> FieldElem:
    total = FE_ZERO
    for a, b in zip(u, v):
        total = total + fe_mul(a, b)
    return total


def vec_add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(u: Sequence, s: FieldElem) -> Vector:
    if not isinstance(s, FieldElem):
        s = fe(s)
    return tuple(fe_mul(s, a) for a in u)


def vec_neg(u: Sequence) -> Vector:
    return tuple(-a for a in u)


def sq_norm(u: Sequence) -> FieldElem:
    return vec_dot(u, u)


def sq_dist(p: PointD, q: PointD) -> FieldElem:
    """Exact squared Euclidean distance."""
    _check_dims(p, q)
    return sq_norm(p - q)


class Ball:
    """Closed ball given by center and exact squared radius."""

    __slots__ = ("center", "sq_radius")

    def __init__(self, center: PointD, sq_radius):
        if not isinstance(sq_radius, FieldElem):
            sq_radius = fe(sq_radius)
        if fe_sign(sq_radius) < 0:
            raise ValueError("squared radius must be nonnegative")
        self.center = center
        self.sq_radius = sq_radius

    @property
    def dim(self) -> int:
        return self.center.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Ball)
            and self.center == other.center
            and self.sq_radius == other.sq_radius
        )

    def __hash__(self) -> int:
        return hash((self.center, self.sq_radius))

    def __repr__(self) -> str:
        return f"Ball(center={self.center!r}, sq_radius={self.sq_radius!r})"


def in_ball(p: PointD, b: Ball) -> bool:
    """Closed-ball membership, decided by one exact sign."""
    _check_dims(p, b.center)
    return fe_sign(b.sq_radius - sq_dist(p, b.center)) >= 0


@dataclass(frozen=True)
class LabeledPoint:
    """Instance point with the family tag and ladder index it came from."""

    point: PointD
    set_tag: str
    index: Optional[int] = None


def _solve_linear(matrix, rhs):
    """Exact Gaussian elimination. Returns None if singular."""
    m = [list(row) + [r] for row, r in zip(matrix, rhs)]
    size = len(m)
    for col in range(size):
        pivot = None
        for row in range(col, size):
            if not m[row][col].is_zero:
                pivot = row
                break
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        inv = fe_inv(m[col][col])
        m[col] = [fe_mul(inv, x) for x in m[col]]
        for row in range(size):
            if row != col and not m[row][col].is_zero:
                factor = m[row][col]
                m[row] = [a - fe_mul(factor, b) for a, b in zip(m[row], m[col])]
    return [m[row][size] for row in range(size)]


def circumball(support: Sequence[PointD]) -> Ball:
    """Smallest ball with every support point on the boundary.

    The center is the circumcenter inside the affine hull of the support,
    found by solving the equidistance system exactly. Affinely dependent
    supports raise DegenerateSupport unless the extra points already lie
    on the circumsphere of an independent subset.
    """
    pts = list(support)
    if not pts:
        raise EmptyInput("circumball of no points")
    dims = {p.dim for p in pts}
    if len(dims) != 1:
        raise DimensionMismatch("mixed dimensions in support")
    if len(pts) == 1:
        return Ball(pts[0], FE_ZERO)
    if len(pts) > pts[0].dim + 1:
        raise DegenerateSupport("support larger than dim+1")

    base = pts[0]
    if len(pts) == 2:
        d = pts[1] - base
        center = base.translate(vec_scale(d, fe(mpq(1, 2))))
        return Ball(center, sq_dist(center, base))

    dirs = [p - base for p in pts[1:]]
    # fast path: solve the equidistance system directly; singular systems
    # fall through to the affine-dependence handling below
    gram = [[fe_mul(FE_TWO, vec_dot(a, b)) for b in dirs] for a in dirs]
    lam = _solve_linear(gram, [sq_norm(d) for d in dirs])
    if lam is not None:
        offset = tuple(FE_ZERO for _ in range(base.dim))
        for coeff, d in zip(lam, dirs):
            offset = vec_add(offset, vec_scale(d, coeff))
        center = base.translate(offset)
        return Ball(center, sq_dist(center, base))
    # Greedily extract a maximal independent subset of the directions.
    independent: list = []
    extra: list = []
    for d in dirs:
        trial = independent + [d]
        gram = [[vec_dot(a, b) for b in trial] for a in trial]
        if _gram_nonsingular(gram):
            independent.append(d)
        else:
            extra.append(d)

    if independent:
        gram2 = [
            [fe_mul(FE_TWO, vec_dot(a, b)) for b in independent] for a in independent
        ]
        rhs = [sq_norm(d) for d in independent]
        lam = _solve_linear(gram2, rhs)
        if lam is None:
            raise DegenerateSupport("singular equidistance system")
        offset = tuple(FE_ZERO for _ in range(base.dim))
        for coeff, d in zip(lam, independent):
            offset = vec_add(offset, vec_scale(d, coeff))
        center = base.translate(offset)
    else:
        center = base
    radius_sq = sq_dist(center, pts[0])
    for d in extra:
        p = base.translate(d)
        if fe_sign(sq_dist(center, p) - radius_sq) != 0:
            raise DegenerateSupport("affinely dependent support, not cocircular")
    return Ball(center, radius_sq)


def _gram_nonsingular(gram) -> bool:
    size = len(gram)
    m = [list(row) for row in gram]
    for col in range(size):
        pivot = None
        for row in range(col, size):
            if not m[row][col].is_zero:
                pivot = row
                break
        if pivot is None:
            return False
        m[col], m[pivot] = m[pivot], m[col]
        inv = fe_inv(m[col][col])
        m[col] = [fe_mul(inv, x) for x in m[col]]
        for row in range(col + 1, size):
            if not m[row][col].is_zero:
                factor = m[row][col]
                m[row] = [a - fe_mul(factor, b) for a, b in zip(m[row], m[col])]
    return True


def _sed_small(pts: Sequence[PointD]) -> Ball:
    """Smallest enclosing ball of at most dim+2 points, by support enumeration."""
    best: Optional[Ball] = None
    dim = pts[0].dim
    for size in range(1, min(len(pts), dim + 1) + 1):
        for sub in itertools.combinations(pts, size):
            try:
                ball = circumball(sub)
            except DegenerateSupport:
                continue
            if best is not None and fe_sign(ball.sq_radius - best.sq_radius) >= 0:
                continue
            if all(in_ball(p, ball) for p in pts):
                best = ball
    if best is None:
        raise DegenerateSupport("no enclosing support ball found")
    return best


def _boundary_ball(boundary: Sequence[PointD]) -> Ball:
    try:
        return circumball(boundary)
    except DegenerateSupport:
        # Collinear or cocircular-degenerate boundary sets arise from the
        # intentionally collinear gadget families; fall back to the smallest
        # ball enclosing them.
        return _sed_small(boundary)


def _welzl(points: Sequence[PointD], boundary: list) -> Ball:
    """Incremental Welzl; recursion depth is bounded by dim+1."""
    dim = (points[0] if points else boundary[0]).dim
    ball = _boundary_ball(boundary)
    if len(boundary) == dim + 1:
        return ball
    for i, p in enumerate(points):
        if not in_ball(p, ball):
            ball = _welzl(points[:i], boundary + [p])
    return ball


def meb(points: Sequence[PointD]) -> Ball:
    """Exact minimum enclosing ball.

    Deterministic Welzl recursion in input order (no shuffling, so runs
    reproduce), with a support-enumeration fallback for degenerate
    boundary sets. The result is validated to enclose every input.
    """
    pts = list(points)
    if not pts:
        raise EmptyInput("meb of no points")
    dims = {p.dim for p in pts}
    if len(dims) != 1:
        raise DimensionMismatch("mixed dimensions")
    seen = set()
    unique = []
    for p in pts:
        if p not in seen:
            seen.add(p)
            unique.append(p)
    ball = Ball(unique[0], FE_ZERO)
    for i, p in enumerate(unique):
        if not in_ball(p, ball):
            ball = _welzl(unique[:i], [p])
    if not all(in_ball(p, ball) for p in unique):
        ball = _sed_full(unique)
    return ball


def _sed_full(pts: Sequence[PointD]) -> Ball:
    """Certified fallback: minimum over all enclosing support balls."""
    best: Optional[Ball] = None
    dim = pts[0].dim
    for size in range(1, min(len(pts), dim + 1) + 1):
        for sub in itertools.combinations(pts, size):
            try:
                ball = circumball(sub)
            except DegenerateSupport:
                continue
            if best is not None and fe_sign(ball.sq_radius - best.sq_radius) >= 0:
                continue
            if all(in_ball(p, ball) for p in pts):
                best = ball
    if best is None:
        raise AssertionError("smallest enclosing ball must exist")
    return best


def meb_oracle(points: Sequence[PointD]) -> Ball:
    """Independent brute-force oracle: exhaustive support-subset minimum."""
    pts = list(dict.fromkeys(points))
    if not pts:
        raise EmptyInput("meb of no points")
    return _sed_full(pts)


# ---------------------------------------------------------------------------
# projective (division-free) feasibility kernel
#
# Balls are carried as (center*den, den, sq_radius*den^2) with den > 0, so
# Welzl's recursion runs entirely in ring arithmetic: no rational gcd work
# on the huge exact coordinates. Used by the certificate feasibility
# checks, which only need "does a ball of squared radius <= rho cover S".


class _ProjBall:
    __slots__ = ("num", "den", "rad")

    def __init__(self, num, den: FieldElem, rad: FieldElem):
        self.num = num  # tuple of FieldElem: center * den
        self.den = den  # positive FieldElem
        self.rad = rad  # sq_radius * den^2


def _proj_point(p: PointD) -> _ProjBall:
    from .exactnum import FE_ONE

    return _ProjBall(p.coords, FE_ONE, FE_ZERO)


def _proj_two(p: PointD, q: PointD) -> _ProjBall:
    num = tuple(a + b for a, b in zip(p.coords, q.coords))
    return _ProjBall(num, FE_TWO, sq_dist(p, q))


def _det2(m) -> FieldElem:
    return fe_mul(m[0][0], m[1][1]) - fe_mul(m[0][1], m[1][0])


def _det3(m) -> FieldElem:
    return (
        fe_mul(m[0][0], _det2([[m[1][1], m[1][2]], [m[2][1], m[2][2]]]))
        - fe_mul(m[0][1], _det2([[m[1][0], m[1][2]], [m[2][0], m[2][2]]]))
        + fe_mul(m[0][2], _det2([[m[1][0], m[1][1]], [m[2][0], m[2][1]]]))
    )


def _proj_circum(support) -> Optional[_ProjBall]:
    """Fraction-free circumball of 3 or 4 affinely independent points."""
    base = support[0]
    dirs = [p - base for p in support[1:]]
    size = len(dirs)
    gram = [[fe_mul(FE_TWO, vec_dot(a, b)) for b in dirs] for a in dirs]
    rhs = [sq_norm(d) for d in dirs]
    if size == 1:
        det = gram[0][0]
        if det.is_zero:
            return None
        lam = [rhs[0]]
    elif size == 2:
        det = _det2(gram)
        if det.is_zero:
            return None
        lam = [
            _det2([[rhs[0], gram[0][1]], [rhs[1], gram[1][1]]]),
            _det2([[gram[0][0], rhs[0]], [gram[1][0], rhs[1]]]),
        ]
    else:
        det = _det3(gram)
        if det.is_zero:
            return None
        cols = list(zip(*gram))
        lam = []
        for idx in range(3):
            m = [list(col) for col in cols]
            m[idx] = rhs
            lam.append(_det3(list(zip(*m))))
    offset = tuple(FE_ZERO for _ in range(base.dim))
    for coeff, d in zip(lam, dirs):
        offset = vec_add(offset, tuple(fe_mul(coeff, x) for x in d))
    if fe_sign(det) < 0:
        det = -det
        offset = vec_neg(offset)
    num = tuple(fe_mul(det, b) + o for b, o in zip(base.coords, offset))
    rad = sq_norm(offset)
    return _ProjBall(num, det, rad)


def _proj_contains(ball: _ProjBall, p: PointD) -> bool:
    v = tuple(fe_mul(ball.den, c) - n for c, n in zip(p.coords, ball.num))
    return fe_sign(ball.rad - sq_norm(v)) >= 0


def _proj_smaller(a: _ProjBall, b: _ProjBall) -> bool:
    """sq_radius(a) < sq_radius(b), cross-multiplied."""
    lhs = fe_mul(a.rad, fe_mul(b.den, b.den))
    rhs = fe_mul(b.rad, fe_mul(a.den, a.den))
    return fe_sign(lhs - rhs) < 0


def _proj_boundary_ball(boundary) -> _ProjBall:
    if len(boundary) == 1:
        return _proj_point(boundary[0])
    if len(boundary) == 2:
        return _proj_two(boundary[0], boundary[1])
    ball = _proj_circum(boundary)
    if ball is not None:
        return ball
    # degenerate boundary: smallest enclosing ball of the boundary set
    best = None
    dim = boundary[0].dim
    for size in range(1, min(len(boundary), dim + 1) + 1):
        for sub in itertools.combinations(boundary, size):
            if size == 1:
                cand = _proj_point(sub[0])
            elif size == 2:
                cand = _proj_two(sub[0], sub[1])
            else:
                cand = _proj_circum(list(sub))
                if cand is None:
                    continue
            if best is not None and not _proj_smaller(cand, best):
                continue
            if all(_proj_contains(cand, p) for p in boundary):
                best = cand
    if best is None:
        raise AssertionError("degenerate boundary has no enclosing ball")
    return best


def _proj_welzl(points, boundary) -> _ProjBall:
    dim = (points[0] if points else boundary[0]).dim
    ball = _proj_boundary_ball(boundary)
    if len(boundary) == dim + 1:
        return ball
    for i, p in enumerate(points):
        if not _proj_contains(ball, p):
            ball = _proj_welzl(points[:i], boundary + [p])
    return ball


def cover_feasible(points: Sequence[PointD], sq_radius: FieldElem) -> bool:
    """True iff one ball of the given squared radius covers the points.

    Exact and division-free: decides meb(points).sq_radius <= sq_radius
    without ever normalizing rationals, which matters for the huge
    epsilon-ladder coordinates.
    """
    pts = list(dict.fromkeys(points))
    if not pts:
        raise EmptyInput("feasibility of no points")
    ball = _proj_point(pts[0])
    for i, p in enumerate(pts):
        if not _proj_contains(ball, p):
            ball = _proj_welzl(pts[:i], [p])
    if not all(_proj_contains(ball, p) for p in pts):
        # degenerate-input fallback: certified subset enumeration
        ball = None
        dim = pts[0].dim
        for size in range(1, min(len(pts), dim + 1) + 1):
            for sub in itertools.combinations(pts, size):
                if size == 1:
                    cand = _proj_point(sub[0])
                elif size == 2:
                    cand = _proj_two(sub[0], sub[1])
                else:
                    cand = _proj_circum(list(sub))
                    if cand is None:
                        continue
                if ball is not None and not _proj_smaller(cand, ball):
                    continue
                if all(_proj_contains(cand, p) for p in pts):
                    ball = cand
        if ball is None:
            raise AssertionError("no enclosing ball found")
    lhs = ball.rad
    rhs = fe_mul(sq_radius, fe_mul(ball.den, ball.den))
    return fe_sign(rhs - lhs) >= 0


def min_sq_dist_to_segment(c: PointD, a: PointD, b: PointD) -> FieldElem:
    """Exact squared distance from a point to the segment [a, b]."""
    u = b - a
    uu = sq_norm(u)
    if uu.is_zero:
        return sq_dist(c, a)
    w = c - a
    t_num = vec_dot(w, u)
    if fe_sign(t_num) <= 0:
        return sq_dist(c, a)
    if fe_sign(t_num - uu) >= 0:
        return sq_dist(c, b)
    return sq_norm(w) - fe_mul(fe_mul(t_num, t_num), fe_inv(uu))


def common_scale(points: Iterable[PointD], extras: Iterable[FieldElem] = ()) -> "mpz":
    """Least common multiple of every coefficient denominator.

    Scaling all coordinates by this factor (and squared radii by its
    square) turns the coefficients into integers, which makes the exact
    predicates much cheaper; ball-cover feasibility is invariant under
    the uniform scaling.
    """
    from gmpy2 import lcm, mpz

    acc = mpz(1)
    for p in points:
        for coord in p.coords:
            for coeff in coord.c:
                d = coeff.denominator
                if d != 1:
                    acc = lcm(acc, d)
    for x in extras:
        for coeff in x.c:
            d = coeff.denominator
            if d != 1:
                acc = lcm(acc, d)
    return acc


def scale_point(p: PointD, factor) -> PointD:
    f = fe(factor)
    return PointD(tuple(fe_mul(f, c) for c in p.coords))


def scale_field(x: FieldElem, factor) -> FieldElem:
    return fe_mul(fe(factor), x)
