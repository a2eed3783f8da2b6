"""Vietoris-Rips persistence diagrams of small Euclidean point clouds.

Dimension 0 comes from the single-linkage merge structure: sort pairwise
distances ascending and run union-find; every merge at edge length L
emits a (0, L) pair.  This is exactly the output of full boundary-matrix
reduction restricted to dimension 0, at a fraction of the cost.

Dimension 1 builds the complex up to 2-simplices below a scale cap and
runs the standard column reduction over Z/2, with simplices ordered by
(filtration value, dimension, vertex tuple).  Cycle classes still alive
at the cap are reported with death equal to the cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .errors import DataError, NumericalError

ESSENTIAL_POLICIES = ("dropped", "capped")


class FiltrationEdge(NamedTuple):
    i: int
    j: int
    length: float


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of (birth, death) pairs for one homology dimension."""

    dim: int
    pairs: tuple[tuple[float, float], ...]
    essential_policy: str = "dropped"

    def __post_init__(self) -> None:
        if self.dim < 0:
            raise ValueError(f"homology dimension must be >= 0, got {self.dim}")
        if self.essential_policy not in ESSENTIAL_POLICIES:
            raise ValueError(
                f"essential policy must be one of {ESSENTIAL_POLICIES}, got '{self.essential_policy}'"
            )
        pairs = tuple((float(b), float(d)) for b, d in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        for b, d in pairs:
            if not (math.isfinite(b) and math.isfinite(d)):
                raise ValueError(f"non-finite diagram point ({b}, {d})")
            if b < 0 or d < b:
                raise ValueError(f"invalid diagram point ({b}, {d}): need 0 <= birth <= death")

    def __len__(self) -> int:
        return len(self.pairs)

    def deaths(self) -> tuple[float, ...]:
        return tuple(d for _, d in self.pairs)


def cloud_points(cloud) -> np.ndarray:
    """Accept an AugmentedCloud or a bare (n, d) array of points."""
    pts = np.asarray(getattr(cloud, "points", cloud), dtype=float)
    if pts.ndim != 2:
        raise DataError(f"expected an (n, d) point array, got shape {pts.shape}")
    return pts


def pairwise_edges(points: np.ndarray) -> list[FiltrationEdge]:
    """All i < j pairs with their Euclidean lengths."""
    n = points.shape[0]
    diffs = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diffs * diffs).sum(axis=2))
    return [FiltrationEdge(i, j, float(dist[i, j])) for i in range(n) for j in range(i + 1, n)]


def rips_persistence_dim0(
    cloud,
    essential_policy: str = "dropped",
    maxscale: float | None = None,
) -> PersistenceDiagram:
    """Dimension-0 diagram of a point cloud under the Rips filtration.

    Returns n - 1 pairs (0, L), one per merge, sorted by death.  The one
    class that never dies is dropped by default; with ``essential_policy=
    "capped"`` it is reported as (0, maxscale) instead.
    """
    pts = cloud_points(cloud)
    n = pts.shape[0]
    if n < 1:
        raise DataError("dimension-0 persistence needs at least one point")
    if essential_policy not in ESSENTIAL_POLICIES:
        raise ValueError(f"essential policy must be one of {ESSENTIAL_POLICIES}")
    if essential_policy == "capped":
        if maxscale is None or maxscale <= 0:
            raise NumericalError("capped essential policy needs maxscale > 0")

    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    deaths: list[float] = []
    for edge in sorted(pairwise_edges(pts), key=lambda e: (e.length, e.i, e.j)):
        ri, rj = find(edge.i), find(edge.j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
            deaths.append(edge.length)
            if len(deaths) == n - 1:
                break
    pairs = [(0.0, d) for d in sorted(deaths)]
    if essential_policy == "capped":
        pairs.append((0.0, float(maxscale)))
    return PersistenceDiagram(dim=0, pairs=tuple(pairs), essential_policy=essential_policy)


def _simplices_up_to_triangles(
    pts: np.ndarray, maxscale: float
) -> list[tuple[float, int, tuple[int, ...]]]:
    """(filtration value, dimension, vertices) for all simplices of dim <= 2
    with diameter <= maxscale, in reduction order."""
    n = pts.shape[0]
    diffs = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diffs * diffs).sum(axis=2))
    simplices: list[tuple[float, int, tuple[int, ...]]] = [(0.0, 0, (i,)) for i in range(n)]
    for i, j in combinations(range(n), 2):
        ell = float(dist[i, j])
        if ell <= maxscale:
            simplices.append((ell, 1, (i, j)))
    for i, j, k in combinations(range(n), 3):
        ell = float(max(dist[i, j], dist[i, k], dist[j, k]))
        if ell <= maxscale:
            simplices.append((ell, 2, (i, j, k)))
    simplices.sort(key=lambda s: (s[0], s[1], s[2]))
    return simplices


def rips_persistence_dim1(cloud, maxscale: float) -> PersistenceDiagram:
    """Dimension-1 diagram of the Rips filtration truncated at ``maxscale``.

    Standard Z/2 column reduction; columns are bitmasks over the ordered
    simplex list, so adding a column is one XOR and the pivot is the
    highest set bit.  Zero-persistence pairs are discarded; unpaired
    cycle classes are capped at ``maxscale``.
    """
    pts = cloud_points(cloud)
    if pts.shape[0] < 3:
        raise DataError(f"dimension-1 persistence needs at least 3 points, got {pts.shape[0]}")
    if maxscale <= 0 or not math.isfinite(maxscale):
        raise NumericalError(f"maxscale must be positive and finite, got {maxscale}")

    simplices = _simplices_up_to_triangles(pts, float(maxscale))
    index_of = {verts: idx for idx, (_, _, verts) in enumerate(simplices)}

    reduced: dict[int, int] = {}  # column index -> reduced column bitmask
    low_to_col: dict[int, int] = {}  # pivot row -> column index
    positive_edges: set[int] = set()
    killed_edges: set[int] = set()
    pairs: list[tuple[float, float]] = []

    for j, (filt, dim, verts) in enumerate(simplices):
        if dim == 0:
            continue
        col = 0
        for face in combinations(verts, dim):
            col ^= 1 << index_of[face]
        while col:
            low = col.bit_length() - 1
            other = low_to_col.get(low)
            if other is None:
                break
            col ^= reduced[other]
        if col == 0:
            if dim == 1:
                positive_edges.add(j)
            continue
        low = col.bit_length() - 1
        reduced[j] = col
        low_to_col[low] = j
        if dim == 2:
            birth_filt, birth_dim, _ = simplices[low]
            if birth_dim == 1:
                killed_edges.add(low)
                if filt > birth_filt:
                    pairs.append((birth_filt, filt))

    for j in sorted(positive_edges - killed_edges):
        birth = simplices[j][0]
        if maxscale > birth:
            pairs.append((birth, float(maxscale)))

    pairs.sort(key=lambda p: (p[1], p[0]))
    return PersistenceDiagram(dim=1, pairs=tuple(pairs), essential_policy="capped")


def diagram_to_rows(diag: PersistenceDiagram) -> list[tuple[int, float, float]]:
    """Lossless (dim, birth, death) rows, sorted by (dim, death, birth)."""
    rows = [(diag.dim, b, d) for b, d in diag.pairs]
    rows.sort(key=lambda r: (r[0], r[2], r[1]))
    return rows
