"""Coordinate merging for perturbed point sets.

All coordinates of all points are pooled by absolute value.  Values within
the uncertainty of zero snap to 0; the remaining values are merged greedily
into clusters whose uncertainty intervals share a common point, and each
cluster is replaced by the midpoint of that common interval.  Points are then
rebuilt with the original signs, and exact duplicates are collapsed.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from .poly import PointSet

__all__ = ["MergeCluster", "preprocess", "well_separated", "merge_values"]


@dataclass(frozen=True)
class MergeCluster:
    member_values: tuple[float, ...]
    interval: tuple[float, float]
    representative: float

    @property
    def size(self) -> int:
        return len(self.member_values)

    def to_dict(self) -> dict:
        return {
            "members": list(self.member_values),
            "interval": list(self.interval),
            "representative": self.representative,
        }


def _dec(v: float) -> Decimal:
    # shortest round-trip decimal of the float: arithmetic on the value as typed
    return Decimal(repr(float(v)))


def _largest_runs(y: list[Decimal], s0: Decimal) -> list[int]:
    """For each j, the largest k with y[j+k] - s0 <= y[j] + s0."""
    n = len(y)
    ks = []
    end = 0
    for j in range(n):
        end = max(end, j)
        while end + 1 < n and y[end + 1] - s0 <= y[j] + s0:
            end += 1
        ks.append(end - j)
    return ks


def merge_values(values, s0: float) -> tuple[dict[float, float], list[MergeCluster]]:
    """Merge absolute coordinate values.

    Returns a map from every input value to its representative, plus the
    clusters in the order they were processed.  A value exactly ``s0`` away
    from zero still snaps to zero.  Interval ends and midpoints are computed
    in decimal on the shortest repr of each float, so decimal data map to
    the decimal midpoints (e.g. 4.03 and 4.1 give exactly 4.065).
    """
    fs0 = float(s0)
    ds0 = _dec(fs0)
    y = sorted(abs(float(v)) for v in values)
    mapping: dict[float, float] = {}
    clusters: list[MergeCluster] = []

    small = [v for v in y if v <= fs0]
    if small:
        for v in small:
            mapping[v] = 0.0
        lo = float(_dec(small[-1]) - ds0)
        clusters.append(MergeCluster(tuple(small), (lo, float(_dec(small[0]) + ds0)), 0.0))
    rest = [v for v in y if v > fs0]

    while rest:
        ks = _largest_runs([_dec(v) for v in rest], ds0)
        k = max(ks)
        if k == 0:
            break
        j = ks.index(k)
        members = rest[j : j + k + 1]
        a, b = _dec(members[0]), _dec(members[-1])
        rep = float((a + b) / 2)
        for v in members:
            mapping[v] = rep
        clusters.append(MergeCluster(tuple(members), (float(b - ds0), float(a + ds0)), rep))
        del rest[j : j + k + 1]

    for v in rest:
        mapping[v] = v
        d = _dec(v)
        clusters.append(MergeCluster((v,), (float(d - ds0), float(d + ds0)), v))
    return mapping, clusters


def preprocess(P: PointSet) -> tuple[PointSet, list[MergeCluster]]:
    """Replace coordinates that agree within ``P.s0`` by a common value."""
    if P.s0 == 0.0:
        return P, []
    pts = P.points
    mapping, clusters = merge_values(pts.ravel(), P.s0)
    rebuilt = np.empty_like(pts)
    for idx, v in np.ndenumerate(pts):
        rep = mapping[abs(float(v))]
        rebuilt[idx] = 0.0 if rep == 0.0 else (-rep if v < 0 else rep)

    seen = set()
    keep = []
    for i, row in enumerate(rebuilt):
        key = tuple(row.tolist())
        if key not in seen:
            seen.add(key)
            keep.append(i)
    return PointSet(rebuilt[keep], P.s0), clusters


def well_separated(values, s0: float) -> bool:
    """True iff the distinct values pairwise differ by more than ``s0``."""
    v = sorted(set(float(x) for x in values))
    return all(b - a > s0 for a, b in zip(v, v[1:]))
