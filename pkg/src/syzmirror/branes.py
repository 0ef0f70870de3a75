"""A-branes: admissible paths in C^x and their Lagrangian spheres, plus conormal branes.

Paths are stored in the universal cover of C^x, as piecewise-linear curves in
(s, theta) with z = exp(s + i theta). Winding numbers are then differences of
endpoint angles rather than numerical integrals.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .geometry_core import DEFAULT_TOL, ParamSurface, SurfaceSpec, path_surface

__all__ = [
    "LiftedPath",
    "SphereBrane",
    "Potential",
    "ConormalBrane",
    "NotAdmissible",
    "admissibility_violation",
    "is_admissible",
    "is_strongly_admissible",
    "strong_admissibility_violation",
    "reference_path",
    "winding_number",
    "intersection_count",
    "sample_field",
    "lagrangian_symmetry_defect",
    "flatness_defect",
    "sphere_surface",
]

TWO_PI = 2.0 * math.pi
WINDING_RESIDUAL = 1e-9


class NotAdmissible(ValueError):
    pass


@dataclass(frozen=True)
class LiftedPath:
    """Piecewise-linear path in (s, theta) from a lift of a_{i-1} to a lift of a_i."""

    target: tuple[int, int]
    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self):
        target = tuple(int(x) for x in self.target)
        verts = tuple((float(s), float(t)) for s, t in self.vertices)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "vertices", verts)
        if len(target) != 2 or target[1] != target[0] + 1:
            raise ValueError(f"target must be (i-1, i), got {target}")
        if len(verts) < 2:
            raise ValueError("a path needs at least two vertices")
        for s, t in verts:
            if not (math.isfinite(s) and math.isfinite(t)):
                raise ValueError("path vertices must be finite")
        for k in range(1, len(verts)):
            if verts[k] == verts[k - 1]:
                raise ValueError(f"consecutive vertices {k - 1} and {k} coincide")

    @property
    def index(self) -> int:
        """The i of the target pair (i-1, i)."""
        return self.target[1]

    @property
    def s(self) -> np.ndarray:
        return np.array([v[0] for v in self.vertices])

    @property
    def theta(self) -> np.ndarray:
        return np.array([v[1] for v in self.vertices])

    @property
    def num_segments(self) -> int:
        return len(self.vertices) - 1

    def lift(self, t) -> tuple[np.ndarray, np.ndarray]:
        """(s, theta) at parameter t in [0, num_segments]; segment k is [k, k+1]."""
        knots = np.arange(len(self.vertices), dtype=float)
        t = np.asarray(t, dtype=float)
        return np.interp(t, knots, self.s), np.interp(t, knots, self.theta)

    def z(self, t) -> np.ndarray:
        s, th = self.lift(t)
        return np.exp(s + 1j * th)

    def theta_of_s(self, s) -> np.ndarray:
        """Angular lift as a function of s; valid when s increases strictly."""
        if not np.all(np.diff(self.s) > 0):
            raise ValueError("theta is a function of s only along s-monotone paths")
        return np.interp(np.asarray(s, dtype=float), self.s, self.theta)

    def refine(self, pieces: int) -> "LiftedPath":
        """Same path with every segment split into ``pieces`` equal parts."""
        if pieces < 1:
            raise ValueError("pieces must be positive")
        verts = [self.vertices[0]]
        for (s0, t0), (s1, t1) in zip(self.vertices, self.vertices[1:]):
            for j in range(1, pieces + 1):
                r = j / pieces
                verts.append((s0 + r * (s1 - s0), t0 + r * (t1 - t0)))
        return LiftedPath(self.target, tuple(verts))

    def to_json(self) -> dict:
        return {"target": list(self.target), "vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, data: dict) -> "LiftedPath":
        try:
            return cls(tuple(data["target"]), tuple(tuple(v) for v in data["vertices"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed path JSON: {exc}") from None

    @classmethod
    def loads(cls, text: str) -> "LiftedPath":
        return cls.from_json(json.loads(text))


def _angle_offset(theta: float, arg: float) -> float:
    """Distance from theta - arg to the nearest multiple of 2 pi."""
    d = (theta - arg) / TWO_PI
    return abs(d - round(d)) * TWO_PI


def _is_lift(vertex: tuple[float, float], s_root: float, arg_root: float, tol: float) -> bool:
    return abs(vertex[0] - s_root) <= tol and _angle_offset(vertex[1], arg_root) <= tol


def _segment_hits(p0, p1, q, tol: float) -> bool:
    """Whether point q lies within tol of the closed segment p0p1."""
    d = np.subtract(p1, p0)
    rel = np.subtract(q, p0)
    tau = float(np.clip(np.dot(rel, d) / np.dot(d, d), 0.0, 1.0))
    return float(np.hypot(*(rel - tau * d))) <= tol


def admissibility_violation(spec: SurfaceSpec, path: LiftedPath) -> str | None:
    """First violated admissibility criterion, or None for an admissible path."""
    tol = spec.tol
    i = path.index
    if not 1 <= i <= spec.n:
        return f"target ({i - 1}, {i}) outside 1 <= i <= n = {spec.n}"
    s_roots, args = spec.log_moduli, spec.arguments
    start, end = path.vertices[0], path.vertices[-1]
    if not _is_lift(start, s_roots[i - 1], args[i - 1], tol):
        return f"first vertex {start} is not a lift of a_{i - 1}"
    if not _is_lift(end, s_roots[i], args[i], tol):
        return f"last vertex {end} is not a lift of a_{i}"
    last = path.num_segments - 1
    for k, (p0, p1) in enumerate(zip(path.vertices, path.vertices[1:])):
        lo_s, hi_s = min(p0[0], p1[0]) - tol, max(p0[0], p1[0]) + tol
        lo_t, hi_t = min(p0[1], p1[1]) - tol, max(p0[1], p1[1]) + tol
        for j, (sj, aj) in enumerate(zip(s_roots, args)):
            if not lo_s <= sj <= hi_s:
                continue
            for m in range(math.floor((lo_t - aj) / TWO_PI), math.ceil((hi_t - aj) / TWO_PI) + 1):
                q = (sj, aj + TWO_PI * m)
                if not _segment_hits(p0, p1, q, tol):
                    continue
                # the path's own endpoints are the only allowed contacts
                if k == 0 and j == i - 1 and math.dist(p0, q) <= tol:
                    continue
                if k == last and j == i and math.dist(p1, q) <= tol:
                    continue
                return f"segment {k} passes through a lift of root a_{j}"
    return None


def is_admissible(spec: SurfaceSpec, path: LiftedPath) -> bool:
    return admissibility_violation(spec, path) is None


def strong_admissibility_violation(spec: SurfaceSpec, path: LiftedPath) -> str | None:
    problem = admissibility_violation(spec, path)
    if problem is not None:
        return problem
    steps = np.diff(path.s)
    bad = np.flatnonzero(steps <= 0)
    if bad.size:
        return f"not strongly admissible: s does not increase along segment {int(bad[0])}"
    return None


def is_strongly_admissible(spec: SurfaceSpec, path: LiftedPath) -> bool:
    """Strictly increasing s is the PL form of meeting each circle |z| = e^s once."""
    problem = admissibility_violation(spec, path)
    if problem is not None:
        raise NotAdmissible(problem)
    return bool(np.all(np.diff(path.s) > 0))


def reference_path(spec: SurfaceSpec, i: int) -> LiftedPath:
    """Straight segment from a_{i-1} to a_i with the least rotation (ties turn positively)."""
    if not 1 <= i <= spec.n:
        raise IndexError(f"path index {i} outside 1..{spec.n}")
    s, args = spec.log_moduli, spec.arguments
    d = args[i] - args[i - 1]
    d -= TWO_PI * math.ceil((d - math.pi) / TWO_PI)
    return LiftedPath((i - 1, i), ((s[i - 1], args[i - 1]), (s[i], args[i - 1] + d)))


def winding_number(path: LiftedPath, reference: LiftedPath, tol: float = DEFAULT_TOL) -> int:
    """Winding of ``path`` relative to ``reference``, both lifted from a common start."""
    (ps, pt), (rs, rt) = path.vertices[0], reference.vertices[0]
    (qs, qt), (es, et) = path.vertices[-1], reference.vertices[-1]
    if abs(ps - rs) > tol or _angle_offset(pt, rt) > tol:
        raise ValueError("paths start at different points")
    if abs(qs - es) > tol or _angle_offset(qt, et) > tol:
        raise ValueError("paths end at different points")
    x = ((qt - pt) - (et - rt)) / TWO_PI
    w = round(x)
    if abs(x - w) > WINDING_RESIDUAL:
        raise ValueError(f"winding residual {abs(x - w):.3e} exceeds {WINDING_RESIDUAL}")
    return int(w)


def intersection_count(i: int, j: int, n: int) -> int:
    """Number of intersection points of the spheres L_i and L_j."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"indices ({i}, {j}) outside 1..{n}")
    if i == j:
        return 2
    return 1 if abs(i - j) == 1 else 0


@dataclass(frozen=True)
class SphereBrane:
    """L_gamma with its flat connection, kept as a holonomy up to gauge."""

    path: LiftedPath
    holonomy: complex = 1.0 + 0j

    def __post_init__(self):
        if abs(abs(complex(self.holonomy)) - 1.0) > 1e-9:
            raise ValueError("holonomy must be unitary")


def sphere_surface(
    spec: SurfaceSpec,
    path: LiftedPath,
    per_segment: int = 6,
    num_alpha: int = 12,
) -> ParamSurface:
    """L_gamma parameterized by (path parameter, arg u).

    Grid parameters sit strictly inside segments so that the difference
    stencil never straddles a corner of the PL path or a node at the ends.
    """
    ts = []
    for k in range(path.num_segments):
        ts.extend(k + (j + 1) / (per_segment + 1) for j in range(per_segment))
    return path_surface(spec, path.lift, ts, num_alpha)


def sample_field(func: Callable[[np.ndarray], np.ndarray], axes: Sequence[Sequence[float]]) -> np.ndarray:
    """Evaluate a vector field on the tensor grid of ``axes``; shape (k, N_1, ..., N_k)."""
    grids = np.meshgrid(*[np.asarray(a, dtype=float) for a in axes], indexing="ij")
    out = np.asarray(func(np.stack(grids)), dtype=float)
    if out.shape != (len(axes),) + grids[0].shape:
        raise ValueError(f"field returned shape {out.shape}, expected {(len(axes),) + grids[0].shape}")
    return out


def _curl_max(samples, step: float) -> float:
    arr = np.asarray(samples, dtype=float)
    if not step > 0:
        raise ValueError("degenerate grid: step must be positive")
    if arr.ndim < 2 or arr.shape[0] != arr.ndim - 1:
        raise ValueError("samples must have shape (k, N_1, ..., N_k)")
    k = arr.shape[0]
    if any(m < 3 for m in arr.shape[1:]):
        raise ValueError("degenerate grid: need at least 3 samples per axis")
    if k == 1:
        return 0.0

    def d(comp: int, axis: int) -> np.ndarray:
        hi = [slice(1, -1)] * k
        lo = [slice(1, -1)] * k
        hi[axis], lo[axis] = slice(2, None), slice(None, -2)
        return (arr[comp][tuple(hi)] - arr[comp][tuple(lo)]) / (2 * step)

    worst = 0.0
    for j in range(k):
        for l in range(j):
            worst = max(worst, float(np.max(np.abs(d(j, l) - d(l, j)))))
    return worst


def lagrangian_symmetry_defect(xi_samples, step: float) -> float:
    """max |d xi_j/dx_l - d xi_l/dx_j| over interior grid points and index pairs."""
    return _curl_max(xi_samples, step)


def flatness_defect(a_samples, step: float) -> float:
    """Same curl test applied to the connection coefficients a_j."""
    return _curl_max(a_samples, step)


Field = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Potential:
    """A scalar potential on R^k with its gradient; both act on arrays of shape (k, ...)."""

    value: Callable[[np.ndarray], np.ndarray]
    gradient: Field


def _zero_field(x: np.ndarray) -> np.ndarray:
    return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class ConormalBrane:
    """A translated conormal bundle of S = {x_j = c_j, j > k} with a U(1) connection.

    ``xi`` and ``a`` map points of shape (k, ...) to (k, ...). Built through
    :meth:`from_potentials` they are gradients, so the brane is Lagrangian and
    the connection flat by construction.
    """

    n: int
    k: int
    c: tuple[float, ...]
    b: tuple[float, ...]
    xi: Field
    a: Field = _zero_field
    domain: tuple[tuple[float, float], ...] = ()
    potential_generated: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError("need 1 <= k <= n")
        c = tuple(float(x) for x in self.c)
        b = tuple(float(x) for x in self.b)
        if len(c) != self.n - self.k or len(b) != self.n - self.k:
            raise ValueError("c and b need n - k entries each")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "b", b)
        dom = tuple((float(lo), float(hi)) for lo, hi in (self.domain or [(0.0, 1.0)] * self.k))
        if len(dom) != self.k or any(not lo < hi for lo, hi in dom):
            raise ValueError("domain needs k nonempty intervals")
        object.__setattr__(self, "domain", dom)

    @classmethod
    def from_potentials(
        cls,
        n: int,
        k: int,
        c: Sequence[float],
        b: Sequence[float],
        phi: Potential,
        psi: Potential | None = None,
        domain: Sequence[tuple[float, float]] = (),
    ) -> "ConormalBrane":
        a = psi.gradient if psi is not None else _zero_field
        return cls(n, k, tuple(c), tuple(b), phi.gradient, a, tuple(domain))

    def with_perturbation(self, dxi: Field | None = None, da: Field | None = None) -> "ConormalBrane":
        """Add arbitrary (possibly non-gradient) fields; used for negative controls."""
        xi, a = self.xi, self.a
        new_xi = (lambda x: xi(x) + dxi(x)) if dxi is not None else xi
        new_a = (lambda x: a(x) + da(x)) if da is not None else a
        return replace(self, xi=new_xi, a=new_a, potential_generated=False)

    def grid_axes(self, num: int) -> list[np.ndarray]:
        return [np.linspace(lo, hi, num) for lo, hi in self.domain]
