"""Affine structure on the base B = R^2: strips, charts, semi-flat and corrected gluings.

Convention: |w| = e^{-lam}. The upward affine coordinate is x2 = -lam / 2pi so
that w = exp 2pi(x2 + i y2) with holonomy exp(2 pi i y2).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .geometry_core import BasePoint, SurfaceSpec

__all__ = [
    "TWO_PI",
    "affine_height",
    "Region",
    "Orientation",
    "ChartBoundary",
    "BaseStructure",
    "SemiFlatCoords",
    "monodromy_matrix",
    "monomial_monodromy",
    "semiflat_transition",
    "semiflat_inverse",
    "semiflat_loop",
    "corrected_transition",
    "corrected_inverse",
    "corrected_loop",
    "global_w",
]

TWO_PI = 2.0 * math.pi


def affine_height(lam: float) -> float:
    """Upward affine coordinate x2 of the base point at moment value lam."""
    return -lam / TWO_PI


class Region(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


class Orientation(enum.Enum):
    CCW = "ccw"
    CW = "cw"


class ChartBoundary(ValueError):
    """w hit 0 or -1: the torus chart ends (w = -1 is the exceptional curve)."""


def _region(region) -> Region:
    return region if isinstance(region, Region) else Region(str(region).lower())


@dataclass(frozen=True)
class BaseStructure:
    spec: SurfaceSpec

    @property
    def s(self) -> tuple[float, ...]:
        return self.spec.log_moduli

    def _s(self, k: int) -> float:
        if k < 0:
            return -math.inf
        if k > self.spec.n:
            return math.inf
        return self.s[k]

    def strip(self, i: int) -> tuple[float, float]:
        """B_i = (s_{i-1}, s_{i+1}) x R, returned as its s-interval."""
        self._check_index(i)
        return self._s(i - 1), self._s(i + 1)

    def _check_index(self, i: int) -> None:
        if not 0 <= i <= self.spec.n:
            raise IndexError(f"chart index {i} outside 0..{self.spec.n}")

    def in_strip(self, i: int, b: BasePoint) -> bool:
        lo, hi = self.strip(i)
        return lo < b.s < hi

    def in_U(self, i: int, b: BasePoint) -> bool:
        # U_i removes the cut [s_i, s_{i+1}) x {0}
        if not self.in_strip(i, b):
            return False
        return not (b.lam == 0 and self._s(i) <= b.s < self._s(i + 1))

    def in_V(self, i: int, b: BasePoint) -> bool:
        # V_i removes the cut (s_{i-1}, s_i] x {0}
        if not self.in_strip(i, b):
            return False
        return not (b.lam == 0 and self._s(i - 1) < b.s <= self._s(i))

    def region(self, i: int, b: BasePoint) -> Region | None:
        """Which component of U_i n V_i contains b; None outside the strip."""
        if not self.in_strip(i, b):
            return None
        if b.lam == 0:
            raise ValueError("lam = 0 lies on the cut; region undefined")
        return Region.PLUS if b.lam > 0 else Region.MINUS

    def descriptor(self) -> dict:
        charts = []
        for i in range(self.spec.n + 1):
            lo, hi = self.strip(i)
            charts.append(
                {
                    "i": i,
                    "strip": [_finite_or_none(lo), _finite_or_none(hi)],
                    "U_cut": [self._s(i), _finite_or_none(self._s(i + 1))],
                    "V_cut": [_finite_or_none(self._s(i - 1)), self._s(i)],
                    "coordinates": {"U": [f"u_{i}", "w"], "V": [f"v_{i + 1}", "w"]},
                }
            )
        return {
            "singular_values": list(self.s),
            "discriminant": [[s, 0.0] for s in self.s],
            "walls": list(self.s),
            "charts": charts,
        }


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


@dataclass(frozen=True)
class SemiFlatCoords:
    chart_id: str  # "U" for (u_i, w), "V" for (v_{i+1}, w)
    c1: complex
    c2: complex

    def __post_init__(self):
        if self.chart_id not in ("U", "V"):
            raise ValueError("chart_id must be 'U' or 'V'")
        if self.c1 == 0 or self.c2 == 0:
            raise ValueError("torus-chart coordinates must be nonzero")


def monodromy_matrix(orientation="ccw") -> np.ndarray:
    o = orientation if isinstance(orientation, Orientation) else Orientation(str(orientation).lower())
    if o is Orientation.CCW:
        return np.array([[1, 1], [0, 1]], dtype=np.int64)
    return np.array([[1, -1], [0, 1]], dtype=np.int64)


def monomial_monodromy(exponent, orientation="ccw") -> tuple[int, int]:
    """Action on exponent row vectors (a, b) of monomials u^a w^b."""
    a, b = (int(x) for x in exponent)
    out = np.array([a, b], dtype=np.int64) @ monodromy_matrix(orientation)
    return int(out[0]), int(out[1])


def _check_torus(v: complex, w: complex, corrected: bool) -> None:
    if v == 0 or w == 0:
        raise ChartBoundary("coordinates must be nonzero on a torus chart")
    if corrected and w == -1:
        raise ChartBoundary("w = -1: the point lies on the exceptional curve")


def semiflat_transition(region, v: complex, w: complex) -> tuple[complex, complex]:
    """(v_{i+1}, w) -> (u_i, w) with the uncorrected gluing."""
    _check_torus(v, w, corrected=False)
    if _region(region) is Region.PLUS:
        return 1 / v, w
    return w / v, w


def semiflat_inverse(region, u: complex, w: complex) -> tuple[complex, complex]:
    _check_torus(u, w, corrected=False)
    if _region(region) is Region.PLUS:
        return 1 / u, w
    return w / u, w


def semiflat_loop(u: complex, w: complex) -> complex:
    """Carry u_i from B_i^+ through V_i into B_i^- and back to U_i: u -> u w."""
    v, w = semiflat_inverse(Region.PLUS, u, w)
    return semiflat_transition(Region.MINUS, v, w)[0]


def corrected_transition(region, v: complex, w: complex) -> tuple[complex, complex]:
    """(v_{i+1}, w) -> (u_i, w) with the single-disk wall-crossing factor."""
    _check_torus(v, w, corrected=True)
    if _region(region) is Region.PLUS:
        return (1 + w) / v, w
    return w * (1 + 1 / w) / v, w


def corrected_inverse(region, u: complex, w: complex) -> tuple[complex, complex]:
    _check_torus(u, w, corrected=True)
    if _region(region) is Region.PLUS:
        return (1 + w) / u, w
    return w * (1 + 1 / w) / u, w


def corrected_loop(u: complex, w: complex) -> complex:
    v, w = corrected_inverse(Region.PLUS, u, w)
    return corrected_transition(Region.MINUS, v, w)[0]


def global_w(lam: float, holonomy: complex, tol: float = 1e-9) -> complex:
    holonomy = complex(holonomy)
    if abs(abs(holonomy) - 1.0) > tol:
        raise ValueError(f"holonomy must be unitary, got |hol| = {abs(holonomy)!r}")
    return math.exp(-lam) * holonomy
