"""Morphism dimensions on both sides of the equivalence, the Euler form and the K-theory braid action.

The B-side is computed from sheaf data (cohomology of line bundles on P^1 and
the normal bundles read off the toric intersection matrix), never copied from
the Floer side.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .branes import intersection_count
from .toric_mirror import _cached_intersection_matrix

__all__ = [
    "GradedHom",
    "KClass",
    "fukaya_hom",
    "line_bundle_cohomology_p1",
    "bside_ext",
    "hms_check",
    "euler_form",
    "spherical_twist",
    "twist_matrix",
    "format_tables",
    "rank_matches_intersections",
]

# degrees of the generators r_i, s_i (self-Floer) and p_i, q_i (adjacent spheres)
_DEG_R, _DEG_S, _DEG_PQ = 0, 2, 1


@dataclass(frozen=True)
class GradedHom:
    """Finitely supported degree -> dimension map; zero entries are dropped."""

    dims: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[int, int] | Iterable[tuple[int, int]] = ()) -> "GradedHom":
        items = dict(mapping)
        acc: dict[int, int] = {}
        for deg, dim in items.items():
            if int(dim) < 0:
                raise ValueError("dimensions must be nonnegative")
            if int(dim):
                acc[int(deg)] = acc.get(int(deg), 0) + int(dim)
        return cls(tuple(sorted(acc.items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.dims)

    def __getitem__(self, degree: int) -> int:
        return self.as_dict().get(degree, 0)

    def total(self) -> int:
        return sum(d for _, d in self.dims)

    def euler(self) -> int:
        return sum((-1) ** deg * d for deg, d in self.dims)

    def __add__(self, other: "GradedHom") -> "GradedHom":
        acc = self.as_dict()
        for deg, d in other.dims:
            acc[deg] = acc.get(deg, 0) + d
        return GradedHom.of(acc)

    def shift(self, k: int) -> "GradedHom":
        return GradedHom.of({deg + k: d for deg, d in self.dims})

    def __str__(self) -> str:
        return "{" + ", ".join(f"{deg}:{d}" for deg, d in self.dims) + "}"


def _check_pair(i: int, j: int, n: int) -> None:
    if n < 1 or not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"indices ({i}, {j}) outside 1..{n}")


def fukaya_hom(i: int, j: int, n: int) -> GradedHom:
    _check_pair(i, j, n)
    if i == j:
        return GradedHom.of({_DEG_R: 1, _DEG_S: 1})
    if abs(i - j) == 1:
        return GradedHom.of({_DEG_PQ: 1})
    return GradedHom()


def line_bundle_cohomology_p1(d: int) -> tuple[int, int]:
    """(h^0, h^1) of O(d) on P^1."""
    return max(d + 1, 0), max(-d - 1, 0)


def _cohomology_p1(d: int) -> GradedHom:
    h0, h1 = line_bundle_cohomology_p1(d)
    return GradedHom.of({0: h0, 1: h1})


def bside_ext(i: int, j: int, n: int, degrees: tuple[int, int] = (-1, -1)) -> GradedHom:
    """dim Ext^k(O_{E_i}(d_i), O_{E_j}(d_j)) on the A_n resolution.

    Same curve: the Koszul resolution gives local Ext sheaves O_E(d_j - d_i) in
    degree 0 and N_E(d_j - d_i) in degree 1, with N_E = O(E.E); the local-to-global
    sequence degenerates on a curve. Distinct curves meeting transversally in
    E_i.E_j points: a length-(E_i.E_j) skyscraper in degree 1, nothing otherwise.
    """
    _check_pair(i, j, n)
    m = _cached_intersection_matrix(n)
    twist = degrees[1] - degrees[0]
    if i == j:
        normal = int(m[i - 1, i - 1])
        return _cohomology_p1(twist) + _cohomology_p1(normal + twist).shift(1)
    points = int(m[i - 1, j - 1])
    return GradedHom.of({1: points})


def hms_check(n: int, bside: Callable[[int, int, int], GradedHom] = bside_ext) -> bool:
    """Whether the Floer and Ext tables agree in every degree for all pairs."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return all(
        fukaya_hom(i, j, n) == bside(i, j, n)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    )


def euler_form(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be at least 1")
    chi = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            chi[i - 1, j - 1] = bside_ext(i, j, n).euler()
    return chi


@dataclass(frozen=True)
class KClass:
    """Integer coordinates in the basis [E_1], ..., [E_n] of K_0."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    @classmethod
    def basis(cls, i: int, n: int) -> "KClass":
        if not 1 <= i <= n:
            raise IndexError(f"basis index {i} outside 1..{n}")
        return cls(tuple(int(k == i) for k in range(1, n + 1)))

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)


def twist_matrix(i: int, n: int) -> np.ndarray:
    """Matrix of x -> x - chi(e_i, x) e_i acting on column vectors."""
    if not 1 <= i <= n:
        raise IndexError(f"twist index {i} outside 1..{n}")
    chi = euler_form(n)
    t = np.eye(n, dtype=np.int64)
    t[i - 1, :] -= chi[i - 1, :]
    return t


def spherical_twist(i: int, x: KClass, n: int) -> KClass:
    if x.n != n:
        raise ValueError(f"class has {x.n} coordinates, expected {n}")
    return KClass(tuple(int(c) for c in twist_matrix(i, n) @ x.array()))


def format_tables(n: int, bside: Callable[[int, int, int], GradedHom] = bside_ext) -> str:
    """Side-by-side plain-text tables of both hom spaces, one row per pair."""
    rows = [("i", "j", "Fuk_0 hom", "D^b_0 Ext", "match")]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            a, b = fukaya_hom(i, j, n), bside(i, j, n)
            rows.append((str(i), str(j), str(a), str(b), "yes" if a == b else "NO"))
    widths = [max(len(r[c]) for r in rows) for c in range(5)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def rank_matches_intersections(n: int) -> bool:
    """Total Ext rank equals the number of intersection points of the spheres for all pairs."""
    return all(
        bside_ext(i, j, n).total() == intersection_count(i, j, n)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    )
