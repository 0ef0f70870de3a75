"""Toric side of the mirror: the A_n fan, affine charts, the divisor h = 1, exceptional curves.

Also builds fans over lattice triangulations of a polytope at height one. All
lattice arithmetic is exact.
"""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _lattice

__all__ = [
    "Fan",
    "ToricChart",
    "MirrorPoint",
    "LatticeTriangulation",
    "TriangulationError",
    "build_an_fan",
    "dual_chart",
    "pairing",
    "chart_transition",
    "in_mirror",
    "h_value",
    "exceptional_point",
    "exceptional_curves_through",
    "self_intersection",
    "intersection_matrix_2d",
    "intersection_matrix",
    "build_fan_from_triangulation",
]


def pairing(m: Sequence[int], v: Sequence[int]) -> int:
    return sum(int(a) * int(b) for a, b in zip(m, v))


@dataclass(frozen=True)
class Fan:
    """A simplicial fan: primitive rays and maximal cones as ray-index tuples."""

    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(tuple(int(x) for x in c) for c in self.max_cones)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        if self.dim < 1:
            raise ValueError("fan dimension must be positive")
        for r in rays:
            if len(r) != self.dim:
                raise ValueError(f"ray {r} has wrong length for dim {self.dim}")
            if _lattice.content(r) != 1:
                raise ValueError(f"ray {r} is not primitive")
        for c in cones:
            if not c or len(set(c)) != len(c):
                raise ValueError(f"cone {c} has repeated or no rays")
            if any(not 0 <= k < len(rays) for k in c):
                raise ValueError(f"cone {c} references a missing ray")
            # a simplicial cone is strictly convex iff its rays are independent
            if _lattice.rank([rays[k] for k in c]) != len(c):
                raise ValueError(f"cone {c} is not strictly convex simplicial")

    def cone_multiplicity(self, cone: Sequence[int]) -> int:
        """Lattice index of the cone's rays in the saturated sublattice they span."""
        return _lattice.maximal_minors_gcd([self.rays[k] for k in cone])

    def is_unimodular(self, cone: Sequence[int]) -> bool:
        return self.cone_multiplicity(cone) == 1

    def is_smooth(self) -> bool:
        return all(self.is_unimodular(c) for c in self.max_cones)

    def is_crepant(self) -> bool:
        """All rays at last coordinate 1: the Calabi-Yau condition."""
        return all(r[-1] == 1 for r in self.rays)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "rays": [list(r) for r in self.rays],
            "cones": [list(c) for c in self.max_cones],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Fan":
        return cls(int(data["dim"]), data["rays"], data["cones"])


def build_an_fan(n: int) -> Fan:
    if n < 1:
        raise ValueError("n must be at least 1")
    rays = tuple((i, 1) for i in range(n + 2))
    return Fan(2, rays, tuple((i, i + 1) for i in range(n + 1)))


@dataclass(frozen=True)
class ToricChart:
    """Affine chart of the cone sigma_i with coordinates u_i = chi^{b_i}, v_{i+1} = chi^{b_{i+1}}."""

    index: int
    b_u: tuple[int, int]
    b_v: tuple[int, int]

    def __post_init__(self):
        i = self.index
        a_i, a_next = (i, 1), (i + 1, 1)
        # each generator vanishes on one edge and is 1 on the other
        ok = (
            pairing(self.b_u, a_i) == 0
            and pairing(self.b_u, a_next) == 1
            and pairing(self.b_v, a_next) == 0
            and pairing(self.b_v, a_i) == 1
        )
        if not ok:
            raise ValueError(f"dual generators {self.b_u}, {self.b_v} do not match cone {i}")

    @property
    def labels(self) -> tuple[str, str]:
        return f"u_{self.index}", f"v_{self.index + 1}"


def dual_chart(i: int, n: int | None = None) -> ToricChart:
    if i < 0 or (n is not None and i > n):
        raise IndexError(f"chart index {i} out of range")
    return ToricChart(i, (1, -i), (-1, i + 1))


@dataclass(frozen=True)
class MirrorPoint:
    """A point of X_Sigma in the chart of cone ``chart``: (u_chart, v_{chart+1})."""

    chart: int
    u: complex
    v: complex

    @property
    def h(self) -> complex:
        return self.u * self.v

    @property
    def in_Ycheck(self) -> bool:
        # truthiness of h - 1 also works for exact coordinate types
        return bool(self.h - 1)

    def to_json(self) -> dict:
        u, v = _to_complex(self.u), _to_complex(self.v)
        return {"chart": self.chart, "u": [u.real, u.imag], "v": [v.real, v.imag]}


def _to_complex(x) -> complex:
    try:
        return complex(x)
    except TypeError:
        # exact Gaussian rationals (sympy QQ_I elements) expose x and y
        return complex(float(x.x), float(x.y))


def h_value(point: MirrorPoint) -> complex:
    """The global function h = chi^{(0,1)} = u_i v_{i+1}."""
    return point.h


def in_mirror(point: MirrorPoint) -> bool:
    return point.in_Ycheck


def chart_transition(point: MirrorPoint, target: int, n: int | None = None) -> MirrorPoint:
    """Move a point to an adjacent chart using u_i = v_i^{-1} and u_i v_{i+1} = h."""
    i = point.chart
    if n is not None and not 0 <= target <= n:
        raise IndexError(f"target chart {target} out of range 0..{n}")
    if target == i:
        return point
    h = point.h
    if target == i + 1:
        if not point.v:
            raise ValueError("point not in the overlap: v_{i+1} = 0")
        u_new = 1 / point.v
        return MirrorPoint(target, u_new, h * point.v)
    if target == i - 1:
        if not point.u:
            raise ValueError("point not in the overlap: u_i = 0")
        return MirrorPoint(target, h * point.u, 1 / point.u)
    raise ValueError("chart_transition only moves between adjacent charts")


def exceptional_point(i: int, coordinate: complex, n: int) -> MirrorPoint:
    """The point of E_i with coordinate u_i = ``coordinate`` in chart i.

    E_i is the divisor of the ray a_i: {v_{i+1} = 0} in chart i and
    {u_{i-1} = 0} in chart i-1.
    """
    if not 1 <= i <= n:
        raise IndexError(f"exceptional index {i} outside 1..{n}")
    return MirrorPoint(i, complex(coordinate), 0j)


def exceptional_curves_through(point: MirrorPoint, n: int) -> list[int]:
    k = point.chart
    hits = []
    if not point.v and 1 <= k <= n:
        hits.append(k)
    if not point.u and 1 <= k + 1 <= n:
        hits.append(k + 1)
    return sorted(hits)


def self_intersection(prev: Sequence[int], ray: Sequence[int], nxt: Sequence[int]) -> int:
    """D^2 for the interior ray of a smooth 2-d fan, from prev + next = -(D^2) ray."""
    total = [int(a) + int(b) for a, b in zip(prev, nxt)]
    k = None
    for t, r in zip(total, ray):
        if r != 0:
            q = Fraction(t, int(r))
            if q.denominator != 1:
                raise ValueError("neighbouring rays do not satisfy an integral relation")
            k = int(q)
            break
    if k is None or [k * int(r) for r in ray] != total:
        raise ValueError("neighbouring rays do not satisfy prev + next = k * ray")
    return -k


def intersection_matrix_2d(fan: Fan) -> np.ndarray:
    """Intersection matrix of the compact toric curves of a smooth 2-d fan.

    Rows follow the order of the interior rays (those lying in two cones).
    """
    if fan.dim != 2:
        raise ValueError("intersection_matrix_2d needs a 2-dimensional fan")
    if not fan.is_smooth():
        raise ValueError("intersection numbers are only integral for smooth fans")
    neighbours: dict[int, list[int]] = {k: [] for k in range(len(fan.rays))}
    for a, b in fan.max_cones:
        neighbours[a].append(b)
        neighbours[b].append(a)
    interior = [k for k in range(len(fan.rays)) if len(neighbours[k]) == 2]
    pos = {k: idx for idx, k in enumerate(interior)}
    m = np.zeros((len(interior), len(interior)), dtype=np.int64)
    for k in interior:
        p, q = neighbours[k]
        m[pos[k], pos[k]] = self_intersection(fan.rays[p], fan.rays[k], fan.rays[q])
        for other in (p, q):
            if other in pos:
                m[pos[k], pos[other]] = 1
    return m


@functools.lru_cache(maxsize=64)
def _cached_intersection_matrix(n: int) -> np.ndarray:
    m = intersection_matrix_2d(build_an_fan(n))
    m.flags.writeable = False
    return m


def intersection_matrix(n: int) -> np.ndarray:
    """E_i . E_j on the A_n resolution, computed from the toric fan."""
    return _cached_intersection_matrix(int(n)).copy()


class TriangulationError(ValueError):
    pass


@dataclass(frozen=True)
class LatticeTriangulation:
    """Full-dimensional simplices on lattice points of a polytope P in Z^d."""

    points: tuple[tuple[int, ...], ...]
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in p) for p in self.points)
        cells = tuple(tuple(sorted(int(x) for x in c)) for c in self.cells)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "cells", cells)
        if not pts or not cells:
            raise TriangulationError("triangulation needs points and cells")
        d = len(pts[0])
        if any(len(p) != d for p in pts):
            raise TriangulationError("points have mixed dimensions")
        if len(set(pts)) != len(pts):
            raise TriangulationError("duplicate points")
        for c in cells:
            if len(c) != d + 1 or len(set(c)) != d + 1:
                raise TriangulationError(f"cell {c} is not a {d}-simplex")
            if any(not 0 <= k < len(pts) for k in c):
                raise TriangulationError(f"cell {c} references a missing point")
            if self._volume(c) == 0:
                raise TriangulationError(f"cell {c} is degenerate")
        if len(set(cells)) != len(cells):
            raise TriangulationError("repeated cell")
        self._check_covering()

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def _volume(self, cell: Sequence[int]) -> int:
        """d! times the signed volume."""
        p0 = self.points[cell[0]]
        return _lattice.det([[a - b for a, b in zip(self.points[k], p0)] for k in cell[1:]])

    def _side(self, facet: Sequence[int], x: Sequence[int]) -> int:
        p0 = self.points[facet[0]]
        rows = [[a - b for a, b in zip(self.points[k], p0)] for k in facet[1:]]
        rows.append([a - b for a, b in zip(x, p0)])
        d = _lattice.det(rows)
        return (d > 0) - (d < 0)

    def _check_covering(self) -> None:
        # Every facet is either shared by exactly two cells lying on opposite
        # sides, or supports the whole point set; then the cells cover conv(P)
        # with constant multiplicity, which must be 1 at an interior point.
        facets: dict[tuple[int, ...], list[tuple[int, int]]] = {}
        for ci, c in enumerate(self.cells):
            for opp in c:
                f = tuple(k for k in c if k != opp)
                facets.setdefault(f, []).append((ci, opp))
        used = sorted({k for c in self.cells for k in c})
        for f, owners in facets.items():
            if len(owners) > 2:
                raise TriangulationError(f"facet {f} shared by more than two cells")
            if len(owners) == 2:
                s1 = self._side(f, self.points[owners[0][1]])
                s2 = self._side(f, self.points[owners[1][1]])
                if s1 == s2:
                    raise TriangulationError(f"cells overlap across facet {f}")
            else:
                sides = {self._side(f, self.points[k]) for k in range(len(self.points))}
                if 1 in sides and -1 in sides:
                    raise TriangulationError(f"boundary facet {f} is not on the hull")
        first = self.cells[0]
        centroid = [Fraction(sum(self.points[k][j] for k in first), len(first)) for j in range(self.dim)]
        containing = sum(1 for c in self.cells if self._contains(c, centroid))
        if containing != 1:
            raise TriangulationError("cells overlap (covering multiplicity > 1)")
        if len(used) != len(self.points):
            raise TriangulationError("some points are not vertices of any cell")

    def _contains(self, cell: Sequence[int], x: Sequence[Fraction]) -> bool:
        p0 = self.points[cell[0]]
        cols = [[a - b for a, b in zip(self.points[k], p0)] for k in cell[1:]]
        a = [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]
        lam = _lattice.solve(a, [xi - pi for xi, pi in zip(x, p0)])
        return lam is not None and all(t >= 0 for t in lam) and sum(lam) <= 1

    def to_json(self) -> dict:
        return {"dim": self.dim, "points": [list(p) for p in self.points], "cells": [list(c) for c in self.cells]}

    @classmethod
    def from_json(cls, data: dict) -> "LatticeTriangulation":
        pts = data.get("points", data.get("vertices"))
        cells = data.get("cells", data.get("cones"))
        if pts is None or cells is None:
            raise TriangulationError("triangulation JSON needs 'points' and 'cells'")
        tri = cls(pts, cells)
        if "dim" in data and int(data["dim"]) != tri.dim:
            raise TriangulationError("declared dim does not match the points")
        return tri

    @classmethod
    def loads(cls, text: str) -> "LatticeTriangulation":
        return cls.from_json(json.loads(text))


def build_fan_from_triangulation(tri: LatticeTriangulation) -> Fan:
    """Cones over the cells of ``tri`` placed at height one in Z^{d+1}."""
    rays = tuple(tuple(p) + (1,) for p in tri.points)
    fan = Fan(tri.dim + 1, rays, tri.cells)
    assert fan.is_crepant()
    return fan

