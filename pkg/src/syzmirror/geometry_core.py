"""The conic fibration Y = {uv = f(z)} over C^x, its symplectic data and torus fibration.

f is always carried by its roots; values and derivatives are products over
the roots so the discriminant locus stays exact.
"""
from __future__ import annotations

import cmath
import enum
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9
DEFAULT_STEP = 1e-4

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_STEP",
    "SurfaceSpec",
    "PointY",
    "BasePoint",
    "FiberType",
    "ParamSurface",
    "moment_map",
    "fibration",
    "classify_fiber",
    "on_wall",
    "disk_area",
    "reduced_form_density",
    "symplectic_pairing",
    "lagrangian_defect",
    "fiber_surface",
    "path_surface",
    "lifted_phase",
]


@dataclass(frozen=True)
class SurfaceSpec:
    """Roots a_0..a_n of f, ordered by strictly increasing modulus."""

    roots: tuple[complex, ...]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        roots = tuple(complex(r) for r in self.roots)
        object.__setattr__(self, "roots", roots)
        if len(roots) < 2:
            raise ValueError("need at least two roots (n >= 1)")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        for r in roots:
            if not (math.isfinite(r.real) and math.isfinite(r.imag)):
                raise ValueError(f"non-finite root {r!r}")
            if r == 0:
                raise ValueError("roots must be nonzero: z ranges over C^x")
        mods = [abs(r) for r in roots]
        for k in range(1, len(mods)):
            if not mods[k - 1] < mods[k]:
                raise ValueError(
                    "root moduli must be strictly increasing "
                    f"(|a_{k-1}| = {mods[k-1]!r}, |a_{k}| = {mods[k]!r})"
                )

    @property
    def n(self) -> int:
        return len(self.roots) - 1

    @property
    def log_moduli(self) -> tuple[float, ...]:
        """The singular values s_i = log|a_i|."""
        return tuple(math.log(abs(r)) for r in self.roots)

    @property
    def arguments(self) -> tuple[float, ...]:
        return tuple(cmath.phase(r) for r in self.roots)

    def f(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for r in self.roots:
            out = out * (z - r)
        return out if out.ndim else complex(out)

    def fprime(self, z):
        # product rule over the roots, no coefficient expansion
        z = np.asarray(z, dtype=complex)
        total = np.zeros_like(z)
        for k in range(len(self.roots)):
            term = np.ones_like(z)
            for j, r in enumerate(self.roots):
                if j != k:
                    term = term * (z - r)
            total = total + term
        return total if total.ndim else complex(total)

    def point(self, u: complex, v: complex, z: complex) -> "PointY":
        """A validated point of Y."""
        p = PointY(complex(u), complex(v), complex(z))
        if p.z == 0:
            raise ValueError("z must be nonzero")
        fz = self.f(p.z)
        if abs(p.u * p.v - fz) > self.tol * (1.0 + abs(fz)):
            raise ValueError(f"point not on Y: |uv - f(z)| = {abs(p.u * p.v - fz):.3e}")
        return p

    def to_json(self) -> dict:
        return {"roots": [[r.real, r.imag] for r in self.roots], "tol": self.tol}

    @classmethod
    def from_json(cls, data: dict, tol: float | None = None) -> "SurfaceSpec":
        try:
            raw = data["roots"]
        except (KeyError, TypeError):
            raise ValueError("roots JSON must be an object with a 'roots' list") from None
        roots = []
        for entry in raw:
            if isinstance(entry, (int, float)):
                roots.append(complex(entry))
            elif isinstance(entry, (list, tuple)) and len(entry) == 2:
                roots.append(complex(float(entry[0]), float(entry[1])))
            else:
                raise ValueError(f"bad root entry {entry!r}; expected [re, im]")
        if tol is None:
            tol = float(data.get("tol", DEFAULT_TOL))
        return cls(tuple(roots), tol)

    @classmethod
    def loads(cls, text: str, tol: float | None = None) -> "SurfaceSpec":
        return cls.from_json(json.loads(text), tol)


@dataclass(frozen=True)
class PointY:
    u: complex
    v: complex
    z: complex


@dataclass(frozen=True)
class BasePoint:
    s: float
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.s) and math.isfinite(self.lam)):
            raise ValueError("base point coordinates must be finite")


class FiberType(enum.Enum):
    NODAL = "nodal"
    SMOOTH = "smooth"


def moment_map(p: PointY) -> float:
    """Moment map of the circle action (u, v) -> (e^{it} u, e^{-it} v)."""
    return 0.5 * (abs(p.u) ** 2 - abs(p.v) ** 2)


def fibration(p: PointY) -> BasePoint:
    return BasePoint(math.log(abs(p.z)), moment_map(p))


def on_wall(spec: SurfaceSpec, b: BasePoint) -> bool:
    return any(abs(b.s - s) <= spec.tol for s in spec.log_moduli)


def classify_fiber(spec: SurfaceSpec, b: BasePoint) -> FiberType:
    if abs(b.lam) <= spec.tol and on_wall(spec, b):
        return FiberType.NODAL
    return FiberType.SMOOTH


def disk_area(lam: float) -> float:
    """Symplectic area of the disk bounded by a wall fiber at height lam."""
    return abs(lam)


def reduced_form_density(spec: SurfaceSpec, lam: float, z: complex) -> float:
    """Coefficient of (-i/2) dz ^ dzbar in the reduced form on Y_lam."""
    z = complex(z)
    if z == 0:
        raise ValueError("z must be nonzero")
    fz = spec.f(z)
    fp = spec.fprime(z)
    denom = 2.0 * math.hypot(lam, abs(fz))
    # denom vanishes only at a node (lam = 0, z a simple root), where the form blows up
    first = abs(fp) ** 2 / denom if denom > 0 else math.inf
    return 0.5 * (first + 1.0 / abs(z) ** 2)


def symplectic_pairing(u, v, z, du1, dv1, dz1, du2, dv2, dz2):
    """omega(X1, X2) for omega = -(i/2)(du^dubar + dv^dvbar + dz^dzbar/|z|^2).

    Each -(i/2) dw ^ dwbar is dx ^ dy, i.e. Im(conj(X1) X2) on that factor.
    """
    return (
        np.imag(np.conj(du1) * du2)
        + np.imag(np.conj(dv1) * dv2)
        + np.imag(np.conj(dz1) * dz2) / np.abs(z) ** 2
    )


SurfaceMap = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class ParamSurface:
    """A map (t, alpha) -> (u, v, z) sampled on the grid ``t_values x alpha_values``.

    ``func`` must accept broadcastable float arrays and return three complex
    arrays; it is evaluated off-grid for the finite-difference stencil.
    """

    func: SurfaceMap
    t_values: np.ndarray
    alpha_values: np.ndarray
    spec: SurfaceSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        t = np.atleast_1d(np.asarray(self.t_values, dtype=float))
        a = np.atleast_1d(np.asarray(self.alpha_values, dtype=float))
        object.__setattr__(self, "t_values", t)
        object.__setattr__(self, "alpha_values", a)
        if t.size == 0 or a.size == 0:
            raise ValueError("degenerate grid: empty parameter axis")
        if self.spec is not None:
            self.check_on_surface(self.spec)

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.t_values, self.alpha_values, indexing="ij")

    def evaluate(self, t, alpha):
        u, v, z = self.func(np.asarray(t, dtype=float), np.asarray(alpha, dtype=float))
        return np.asarray(u, complex), np.asarray(v, complex), np.asarray(z, complex)

    def check_on_surface(self, spec: SurfaceSpec) -> None:
        u, v, z = self.evaluate(*self.grid())
        if np.any(z == 0):
            raise ValueError("surface meets z = 0")
        fz = spec.f(z)
        err = np.abs(u * v - fz) - spec.tol * (1.0 + np.abs(fz))
        if np.any(err > 0):
            raise ValueError("surface leaves Y: uv != f(z) at some grid point")


def lagrangian_defect(surface: ParamSurface, step: float = DEFAULT_STEP) -> float:
    """Max over the grid of |omega(d/dt, d/dalpha)| with central-difference tangents."""
    if not step > 0 or not math.isfinite(step):
        raise ValueError("step must be a positive finite number")
    T, A = surface.grid()
    u, v, z = surface.evaluate(T, A)
    up, vp, zp = surface.evaluate(T + step, A)
    um, vm, zm = surface.evaluate(T - step, A)
    ut, vt, zt = (up - um) / (2 * step), (vp - vm) / (2 * step), (zp - zm) / (2 * step)
    up, vp, zp = surface.evaluate(T, A + step)
    um, vm, zm = surface.evaluate(T, A - step)
    ua, va, za = (up - um) / (2 * step), (vp - vm) / (2 * step), (zp - zm) / (2 * step)
    if not (np.all(np.isfinite(ut)) and np.all(np.isfinite(ua))):
        raise ValueError("degenerate grid: non-finite tangent vectors")
    omega = symplectic_pairing(u, v, z, ut, vt, zt, ua, va, za)
    return float(np.max(np.abs(omega)))


def _phase_terms(spec: SurfaceSpec, s, theta) -> np.ndarray:
    """Continuous branches of arg(z - a_k) along z = exp(s + i theta), theta lifted.

    Outside the circle |z| = |a_k| the branch is theta + arg(1 - a_k/z), inside
    it is arg(-a_k) + arg(1 - z/a_k); both principal args stay off their cut.
    Shape (n + 1, ...).
    """
    s = np.asarray(s, dtype=float)
    theta = np.asarray(theta, dtype=float)
    z = np.exp(s + 1j * theta)
    terms = []
    for a, sa in zip(spec.roots, spec.log_moduli):
        outer = theta + np.angle(1 - a / z)
        inner = cmath.phase(-a) + np.angle(1 - z / a)
        terms.append(np.where(s > sa, outer, inner))
    return np.stack(terms)


def lifted_phase(spec: SurfaceSpec, s, theta) -> np.ndarray:
    """A continuous branch of arg f along z = exp(s + i theta), smooth off the circles |a_k|."""
    return _phase_terms(spec, s, theta).sum(axis=0)


def _fiber_radii(mod_f, lam: float):
    """|u|, |v| with |u||v| = |f| and |u|^2 - |v|^2 = 2 lam, without cancellation."""
    root = np.sqrt(lam**2 + mod_f**2)
    if lam >= 0:
        r_u = np.sqrt(lam + root)
        r_v = np.divide(mod_f, r_u, out=np.zeros_like(r_u), where=r_u > 0)
    else:
        r_v = np.sqrt(-lam + root)
        r_u = np.divide(mod_f, r_v, out=np.zeros_like(r_v), where=r_v > 0)
    return r_u, r_v


def _angle_clock(spec: SurfaceSpec, s: float):
    """Monotone t(theta) = theta + c sum_k sigma_k phi_k that slows theta near the roots.

    sigma_k = +1 for roots inside the circle, -1 outside, c = 1/(n+1), so
    dt/dtheta >= 1/2 everywhere and grows like 1/dist(z, a_k) close to a_k.
    """
    sign = np.where(np.array(spec.log_moduli) < s, 1.0, -1.0)
    c = 1.0 / (spec.n + 1)

    def clock(theta):
        terms = _phase_terms(spec, np.full_like(theta, s), theta)
        return theta + c * np.tensordot(sign, terms, axes=1)

    return clock


def fiber_surface(
    spec: SurfaceSpec,
    s: float,
    lam: float,
    num_theta: int = 12,
    num_alpha: int = 12,
) -> ParamSurface:
    """Torus fiber over (s, lam), parameterized by (t, alpha).

    u = |u| e^{i(phase/2 + alpha)}, v = |v| e^{i(phase/2 - alpha)} with phase a
    continuous arg f. arg z = theta(t) inverts a clock that runs faster where
    arg f turns quickly, so the tangent vectors stay bounded as the fiber
    passes near a node and the difference stencil stays accurate. Both choices
    only reparameterize the same torus. After one period in t the point at
    alpha reappears at alpha + pi m, m the number of roots inside |z| = e^s.
    """
    clock = _angle_clock(spec, s)
    t_start = float(clock(np.zeros(1))[0])
    period = float(clock(np.full(1, 2 * np.pi))[0]) - t_start
    scale = 2 * np.pi / period
    # arg f winds once per root inside the circle; when that count is odd, tilt
    # the split by theta/2 so u and v each return to themselves after one turn
    tilt = 0.5 * (sum(sa < s for sa in spec.log_moduli) % 2)

    def theta_of(t):
        target = t + t_start
        # clock(theta) = theta / scale + (a term bounded by pi), so theta lies within 2 pi of t * scale
        lo = t * scale - 4 * np.pi
        hi = t * scale + 4 * np.pi
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            above = clock(mid) > target
            hi = np.where(above, mid, hi)
            lo = np.where(above, lo, mid)
        return 0.5 * (lo + hi)

    def func(t, alpha):
        t, alpha = np.broadcast_arrays(np.asarray(t, float), np.asarray(alpha, float))
        theta = theta_of(t)
        zz = np.exp(s + 1j * theta)
        ru, rv = _fiber_radii(np.abs(spec.f(zz)), lam)
        half = 0.5 * lifted_phase(spec, np.full_like(theta, s), theta)
        return ru * np.exp(1j * (half + alpha)), rv * np.exp(1j * (half - alpha)), zz

    ts = np.linspace(0.0, period, num_theta, endpoint=False)
    alpha = np.linspace(0.0, 2 * np.pi, num_alpha, endpoint=False)
    return ParamSurface(func, ts, alpha, spec)


def path_surface(
    spec: SurfaceSpec,
    lift: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    t_values: Sequence[float],
    num_alpha: int = 12,
) -> ParamSurface:
    """The surface {|u| = |v|} over the curve z = exp(s(t) + i theta(t)) given by ``lift``."""

    def func(t, alpha):
        s, theta = lift(t)
        zz = np.exp(s + 1j * theta)
        r = np.sqrt(np.abs(spec.f(zz)))
        # |u| = |v|, so an even split of the phase of f matches the stencils of u and v
        half = 0.5 * lifted_phase(spec, s, theta)
        return r * np.exp(1j * (half + alpha)), r * np.exp(1j * (half - alpha)), zz

    alpha = np.linspace(0.0, 2 * np.pi, num_alpha, endpoint=False)
    return ParamSurface(func, np.asarray(t_values, dtype=float), alpha, spec)
