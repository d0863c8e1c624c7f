"""Gap-Convolution-3SUM instances, reductions, and brute-force oracles.

The promise problem reads: YES when some triple with indices in the inner
hundredth range sums to zero in index and value, NO when no triple in the
full range does. The two cases are disjoint but not exhaustive, so
classification returns a third NEITHER outcome.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

__all__ = [
    "ConvInstance",
    "GapClass",
    "GapInstance",
    "GapTag",
    "GenerationFailed",
    "brute_conv",
    "classify_gap",
    "conv_to_gap",
    "gen_planted",
    "gen_planted_gap",
    "parse_instance_text",
    "write_instance_text",
]


class GenerationFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class ConvInstance:
    """Array A[1..n] of integers in {1, ..., n^2}."""

    entries: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.entries)
        if n < 1:
            raise ValueError("empty instance")
        bound = n * n
        for a in self.entries:
            if not (1 <= a <= bound):
                raise ValueError(f"entry {a} outside {{1..{bound}}}")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        if not (1 <= i <= self.n):
            raise IndexError(i)
        return self.entries[i - 1]


class GapInstance:
    """Array X[-n..n] of integers bounded by n^2 in absolute value."""

    __slots__ = ("_arr", "n", "max_abs")

    def __init__(self, entries, n: int):
        arr = np.asarray(entries, dtype=np.int64)
        if arr.shape != (2 * n + 1,):
            raise ValueError(f"expected {2 * n + 1} entries, got {arr.shape}")
        self.n = n
        self.max_abs = n * n
        if int(np.abs(arr).max()) > self.max_abs:
            raise ValueError("entry magnitude exceeds n^2")
        arr.setflags(write=False)
        self._arr = arr

    def __getitem__(self, i: int) -> int:
        if not (-self.n <= i <= self.n):
            raise IndexError(i)
        return int(self._arr[i + self.n])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GapInstance)
            and self.n == other.n
            and bool(np.array_equal(self._arr, other._arr))
        )

    def __repr__(self) -> str:
        return f"GapInstance(n={self.n})"

    def raw(self) -> np.ndarray:
        return self._arr

    def entries_list(self):
        return self._arr.tolist()


class GapTag(Enum):
    YES = "YES"
    NO = "NO"
    NEITHER = "NEITHER"


@dataclass(frozen=True)
class GapClass:
    tag: GapTag
    witness: Optional[Tuple[int, int, int]] = None

    def __post_init__(self):
        if self.tag is GapTag.YES and self.witness is None:
            raise ValueError("YES classification requires a witness")
        if self.tag is not GapTag.YES and self.witness is not None:
            raise ValueError("only YES carries a witness")


def conv_to_gap(a: ConvInstance) -> GapInstance:
    """Embed Convolution-3SUM into the gap promise problem.

    With n' = 300n: X[n+i] = A[i], X[-2n-i] = -A[i], all other entries
    3n^2. Solutions of A correspond exactly to zero triples of X, and any
    zero triple of X decodes back to a solution of A.
    """
    n = a.n
    np_big = 300 * n
    arr = np.full(2 * np_big + 1, 3 * n * n, dtype=np.int64)
    vals = np.asarray(a.entries, dtype=np.int64)
    off = np_big
    # X[n+i] = A[i] for i in [1..n]
    arr[off + n + 1 : off + 2 * n + 1] = vals
    # X[-2n-i] = -A[i] for i in [1..n]
    arr[off - 2 * n - 1 : off - 3 * n - 1 : -1] = -vals
    return GapInstance(arr, np_big)


def _restricted_witness(x: GapInstance) -> Optional[Tuple[int, int, int]]:
    """Lexicographically smallest witness with all indices in the inner range."""
    r = x.n // 100
    arr = x._arr
    off = x.n
    rng = np.arange(-r, r + 1, dtype=np.int64)
    ii, jj = np.meshgrid(rng, rng, indexing="ij")
    kk = -ii - jj
    valid = np.abs(kk) <= r
    sums = np.zeros_like(ii)
    sums[valid] = (
        arr[ii[valid] + off] + arr[jj[valid] + off] + arr[kk[valid] + off]
    )
    hits = valid & (sums == 0)
    if not hits.any():
        return None
    flat = int(np.flatnonzero(hits.ravel())[0])
    i = int(rng[flat // len(rng)])
    j = int(rng[flat % len(rng)])
    return (i, j, -i - j)


def _full_range_triple_exists(x: GapInstance) -> bool:
    """Exhaustive zero-triple search, organized by value buckets.

    Logically the O(n^2) scan over pairs (i, j) with k = -i-j; grouping
    indices by entry value first lets the scan skip all pairs whose value
    sum cannot be completed, which is what makes the reduction-produced
    instances (mostly filler entries) fast. Worst case is still O(n^2).
    """
    arr = x._arr
    n = x.n
    off = n
    values = np.unique(arr)
    value_set = set(values.tolist())
    order = np.argsort(arr, kind="stable")
    starts = np.searchsorted(arr[order], values, side="left")
    ends = np.searchsorted(arr[order], values, side="right")
    buckets = {
        int(v): (order[s:e] - off) for v, s, e in zip(values, starts, ends)
    }
    vals = sorted(value_set)
    for a_pos, v1 in enumerate(vals):
        for v2 in vals[a_pos:]:
            v3 = -v1 - v2
            if v3 not in value_set:
                continue
            bi = buckets[v1]
            bj = buckets[v2]
            # pairs (i, j) from the two buckets; k = -i-j checked directly
            kk = -(bi[:, None] + bj[None, :])
            ok = (kk >= -n) & (kk <= n)
            if not ok.any():
                continue
            kvals = arr[np.clip(kk, -n, n) + off]
            if bool(((kvals == v3) & ok).any()):
                return True
    return False


def classify_gap(x: GapInstance) -> GapClass:
    """Exact promise classification with a re-verifiable YES witness."""
    witness = _restricted_witness(x)
    if witness is not None:
        i, j, k = witness
        assert i + j + k == 0 and x[i] + x[j] + x[k] == 0
        return GapClass(GapTag.YES, witness)
    if _full_range_triple_exists(x):
        return GapClass(GapTag.NEITHER)
    return GapClass(GapTag.NO)


def brute_conv(a: ConvInstance) -> Optional[Tuple[int, int, int]]:
    """Exhaustive O(n^2) Convolution-3SUM check; smallest witness or None."""
    n = a.n
    for i in range(1, n + 1):
        for j in range(1, n - i + 1):
            k = i + j
            if a[i] + a[j] == a[k]:
                return (i, j, k)
    return None


def gen_planted(n: int, want: GapTag, seed: int, max_rounds: int = 400) -> ConvInstance:
    """Deterministic planted Convolution-3SUM generator, oracle-validated."""
    if n < 1:
        raise ValueError("n must be positive")
    if want not in (GapTag.YES, GapTag.NO):
        raise ValueError("plant YES or NO instances only")
    if want is GapTag.YES and n < 2:
        raise GenerationFailed("no index triple i+j=k fits in [1..1]")
    rng = random.Random((seed, n, want.value).__repr__())
    bound = n * n
    for _ in range(max_rounds):
        entries = [rng.randint(1, bound) for _ in range(n)]
        if want is GapTag.YES:
            i = rng.randint(1, max(1, n // 2))
            j = rng.randint(1, n - i)
            half = max(1, bound // 2)
            entries[i - 1] = rng.randint(1, half)
            entries[j - 1] = rng.randint(1, half)
            entries[i + j - 1] = entries[i - 1] + entries[j - 1]
        inst = ConvInstance(tuple(entries))
        found = brute_conv(inst)
        if (found is not None) == (want is GapTag.YES):
            return inst
    raise GenerationFailed(f"could not plant {want.value} after {max_rounds} rounds")


def gen_planted_gap(
    n: int, want: GapTag, seed: int, max_rounds: int = 400
) -> GapInstance:
    """Planted Gap instance; YES plants inside the inner hundredth range.

    For n < 100 the inner range collapses to {0}, so YES instances are
    planted at the (0, 0, 0) triple.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if want not in (GapTag.YES, GapTag.NO):
        raise ValueError("plant YES or NO instances only")
    rng = random.Random((seed, n, "gap", want.value).__repr__())
    bound = n * n
    r = n // 100
    for _ in range(max_rounds):
        entries = [rng.randint(-bound, bound) for _ in range(2 * n + 1)]
        if want is GapTag.YES:
            i = rng.randint(-r, r)
            j = rng.randint(-r, r)
            k = -i - j
            if abs(k) > r:
                continue
            counts: dict = {}
            for idx in (i, j, k):
                counts[idx] = counts.get(idx, 0) + 1
            distinct = sorted(counts)
            half = max(1, bound // 2)
            if len(distinct) == 1:
                entries[distinct[0] + n] = 0
            elif len(distinct) == 2:
                d0, d1 = distinct
                t = rng.randint(-half // max(counts[d0], counts[d1], 1), half // max(counts[d0], counts[d1], 1))
                entries[d0 + n] = counts[d1] * t
                entries[d1 + n] = -counts[d0] * t
            else:
                entries[distinct[0] + n] = rng.randint(-half, half)
                entries[distinct[1] + n] = rng.randint(-half, half)
                entries[distinct[2] + n] = -(
                    entries[distinct[0] + n] + entries[distinct[1] + n]
                )
        inst = GapInstance(entries, n)
        tag = classify_gap(inst).tag
        if tag is want:
            return inst
    raise GenerationFailed(f"could not plant {want.value} after {max_rounds} rounds")


def write_instance_text(obj) -> str:
    if isinstance(obj, ConvInstance):
        return "conv {}\n{}\n".format(obj.n, " ".join(str(v) for v in obj.entries))
    if isinstance(obj, GapInstance):
        return "gap {}\n{}\n".format(
            obj.n, " ".join(str(v) for v in obj.entries_list())
        )
    raise TypeError(type(obj))


def parse_instance_text(text: str):
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ValueError("instance file needs a header and an entry line")
    kind, n_str = lines[0].split()
    n = int(n_str)
    values = [int(tok) for tok in lines[1].split()]
    if kind == "conv":
        if len(values) != n:
            raise ValueError("conv entry count mismatch")
        return ConvInstance(tuple(values))
    if kind == "gap":
        return GapInstance(values, n)
    raise ValueError(f"unknown instance kind {kind!r}")
