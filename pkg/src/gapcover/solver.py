"""Exact decision procedures for k-ball covering.

decide_cover enumerates candidate balls (MEBs of support subsets of size
at most dim+1 whose radius fits) and runs a deterministic branch and
bound over them; its correctness rests on the canonical-center fact that
any feasible cover can be shrunk ball-by-ball to MEBs of the assigned
points. partition_oracle is the independent cross-check used by tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .exactnum import FE_ZERO, FieldElem, fe_sign
from .geometry import (
    Ball,
    DimensionMismatch,
    LabeledPoint,
    PointD,
    in_ball,
    meb,
    sq_dist,
)

__all__ = [
    "CoverDecision",
    "CoverWitness",
    "GeometricInstance",
    "ResourceExceeded",
    "SolverLimits",
    "decide_cover",
    "partition_oracle",
    "verify_witness",
]


class ResourceExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class GeometricInstance:
    """A k-ball cover decision problem with exact squared radius."""

    points: Tuple[LabeledPoint, ...]
    k: int
    sq_radius: FieldElem
    dim: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        if not self.points:
            raise ValueError("instance needs at least one point")
        for lp in self.points:
            if lp.point.dim != self.dim:
                raise DimensionMismatch("point dimension differs from instance")

    @staticmethod
    def from_labeled(points: Sequence[LabeledPoint], k: int, sq_radius) -> "GeometricInstance":
        pts = tuple(points)
        return GeometricInstance(pts, k, sq_radius, pts[0].point.dim)


@dataclass(frozen=True)
class CoverWitness:
    centers: Tuple[PointD, ...]


@dataclass
class SolverLimits:
    max_candidates: int = 10_000_000
    max_nodes: int = 1_000_000


@dataclass
class CoverDecision:
    tag: str  # "coverable" | "infeasible" | "resource_exceeded"
    witness: Optional[CoverWitness] = None
    nodes: int = 0
    candidates: int = 0

    @property
    def coverable(self) -> bool:
        if self.tag == "resource_exceeded":
            raise ResourceExceeded("no verdict: limits hit")
        return self.tag == "coverable"


def verify_witness(
    inst: GeometricInstance, witness: CoverWitness
) -> Tuple[bool, FieldElem]:
    """Exact closed-ball cover check plus the worst violation margin.

    The margin is max over points of min over centers of
    (sq_dist - sq_radius); nonpositive margin means covered.
    """
    if not witness.centers:
        raise ValueError("witness needs at least one center")
    if len(witness.centers) > inst.k:
        raise ValueError("witness uses more than k centers")
    for c in witness.centers:
        if c.dim != inst.dim:
            raise DimensionMismatch("witness center dimension differs")
    worst: Optional[FieldElem] = None
    covered_all = True
    for lp in inst.points:
        best: Optional[FieldElem] = None
        for c in witness.centers:
            gap = sq_dist(lp.point, c) - inst.sq_radius
            if best is None or fe_sign(gap - best) < 0:
                best = gap
            if fe_sign(best) <= 0:
                break
        if fe_sign(best) > 0:
            covered_all = False
        if worst is None or fe_sign(best - worst) > 0:
            worst = best
    return covered_all, worst


def _near(p: PointD, q: PointD, four_rho: FieldElem) -> bool:
    return fe_sign(four_rho - sq_dist(p, q)) >= 0


def _candidate_balls(
    pts: List[PointD], dim: int, rho: FieldElem, limits: SolverLimits
) -> List[Tuple[int, Ball]]:
    """All (coverage mask, ball) for support subsets of size <= dim+1.

    Subsets are pruned by the pairwise 2r-distance test before the MEB is
    computed; coverage is evaluated only over points near the support.
    """
    n = len(pts)
    four_rho = rho * 4
    neighbors: List[set] = [set() for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if _near(pts[a], pts[b], four_rho):
                neighbors[a].add(b)
                neighbors[b].add(a)

    masks: Dict[int, Ball] = {}
    evaluated = 0

    def consider(subset: Tuple[int, ...]) -> None:
        nonlocal evaluated
        evaluated += 1
        if evaluated > limits.max_candidates:
            raise ResourceExceeded("candidate budget exhausted")
        ball = meb([pts[i] for i in subset])
        if fe_sign(rho - ball.sq_radius) < 0:
            return
        near_ids = set(subset)
        for s in subset:
            near_ids |= neighbors[s]
        mask = 0
        for q in sorted(near_ids):
            if in_ball(pts[q], ball):
                mask |= 1 << q
        prev = masks.get(mask)
        if prev is None or fe_sign(ball.sq_radius - prev.sq_radius) < 0:
            masks[mask] = ball

    for a in range(n):
        consider((a,))
        nb_a = sorted(neighbors[a])
        for b in nb_a:
            if b < a:
                continue
            consider((a, b))
            if dim < 2:
                continue
            common = neighbors[a] & neighbors[b]
            for c in sorted(common):
                if c <= b:
                    continue
                consider((a, b, c))
                if dim < 3:
                    continue
                deeper = common & neighbors[c]
                for d in sorted(deeper):
                    if d <= c:
                        continue
                    consider((a, b, c, d))

    # Keep only coverage-maximal candidates; any cover using a dominated
    # ball can substitute the dominating one.
    items = sorted(
        masks.items(), key=lambda kv: (-kv[0].bit_count(), kv[0])
    )
    kept: List[Tuple[int, Ball]] = []
    for mask, ball in items:
        dominated = False
        for kmask, _ in kept:
            if mask & kmask == mask:
                dominated = True
                break
        if not dominated:
            kept.append((mask, ball))
    return kept


def _greedy_far_clique(
    uncovered: int, pts: List[PointD], near_sets: List[set]
) -> int:
    """Size of a greedy set of uncovered points pairwise farther than 2r."""
    clique: List[int] = []
    m = uncovered
    while m:
        i = (m & -m).bit_length() - 1
        m &= m - 1
        if all(i not in near_sets[j] for j in clique):
            clique.append(i)
    return len(clique)


def decide_cover(
    inst: GeometricInstance, limits: Optional[SolverLimits] = None
) -> CoverDecision:
    """Complete, deterministic k-ball cover decision within limits."""
    limits = limits or SolverLimits()
    unique: List[PointD] = []
    seen = {}
    for lp in inst.points:
        if lp.point not in seen:
            seen[lp.point] = len(unique)
            unique.append(lp.point)
    n = len(unique)
    rho = inst.sq_radius

    decision = CoverDecision(tag="resource_exceeded")
    try:
        candidates = _candidate_balls(unique, inst.dim, rho, limits)
    except ResourceExceeded:
        return decision
    decision.candidates = len(candidates)

    if not candidates:
        decision.tag = "infeasible"
        return decision

    four_rho = rho * 4
    near_sets: List[set] = [set() for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if _near(unique[a], unique[b], four_rho):
                near_sets[a].add(b)
                near_sets[b].add(a)

    covering: List[List[int]] = [[] for _ in range(n)]
    for ci, (mask, _) in enumerate(candidates):
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            covering[i].append(ci)

    if any(not lst for lst in covering):
        decision.tag = "infeasible"
        return decision

    full = (1 << n) - 1
    nodes = 0
    failed_states: set = set()
    chosen: List[int] = []

    def search(uncovered: int, k_left: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > limits.max_nodes:
            raise ResourceExceeded("node budget exhausted")
        if uncovered == 0:
            return True
        if k_left == 0:
            return False
        state = (uncovered, k_left)
        if state in failed_states:
            return False
        if _greedy_far_clique(uncovered, unique, near_sets) > k_left:
            failed_states.add(state)
            return False
        # branch on the uncovered point with the fewest usable candidates
        best_point = -1
        best_opts: Optional[List[int]] = None
        m = uncovered
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            opts = [ci for ci in covering[i] if candidates[ci][0] & uncovered]
            if best_opts is None or len(opts) < len(best_opts):
                best_point, best_opts = i, opts
                if not opts:
                    break
        if not best_opts:
            failed_states.add(state)
            return False
        ranked = sorted(
            best_opts,
            key=lambda ci: (-(candidates[ci][0] & uncovered).bit_count(), ci),
        )
        for ci in ranked:
            chosen.append(ci)
            if search(uncovered & ~candidates[ci][0], k_left - 1):
                return True
            chosen.pop()
        failed_states.add(state)
        return False

    try:
        ok = search(full, inst.k)
    except ResourceExceeded:
        decision.nodes = nodes
        return decision
    decision.nodes = nodes
    if ok:
        centers = tuple(candidates[ci][1].center for ci in chosen)
        witness = CoverWitness(centers)
        covered, _ = verify_witness(inst, witness)
        if not covered:
            raise AssertionError("solver produced a non-verifying witness")
        decision.tag = "coverable"
        decision.witness = witness
    else:
        decision.tag = "infeasible"
    return decision


def partition_oracle(inst: GeometricInstance, max_points: int = 12, max_k: int = 3) -> bool:
    """Exhaustive partition enumeration; feasible iff some k-partition has
    every part's MEB within the radius."""
    unique: List[PointD] = list(dict.fromkeys(lp.point for lp in inst.points))
    if len(unique) > max_points or inst.k > max_k:
        raise ResourceExceeded("outside the oracle's domain")
    rho = inst.sq_radius
    parts: List[List[PointD]] = []

    def fits(part: List[PointD]) -> bool:
        return fe_sign(rho - meb(part).sq_radius) >= 0

    def assign(idx: int) -> bool:
        if idx == len(unique):
            return True
        p = unique[idx]
        for part in parts:
            part.append(p)
            if fits(part) and assign(idx + 1):
                return True
            part.pop()
        if len(parts) < inst.k:
            parts.append([p])
            if fits(parts[-1]) and assign(idx + 1):
                return True
            parts.pop()
        return False

    return assign(0)
