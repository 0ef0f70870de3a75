"""The SYZ transform on objects: A-branes on Y to B-branes on the mirror."""
from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .affine_base import TWO_PI, global_w
from .branes import (
    ConormalBrane,
    LiftedPath,
    NotAdmissible,
    is_strongly_admissible,
    reference_path,
    winding_number,
)
from .geometry_core import SurfaceSpec
from .toric_mirror import MirrorPoint

__all__ = [
    "BBrane",
    "CHERN_RESIDUAL",
    "transform_fiber",
    "transform_sphere_brane",
    "transform_conormal",
    "curvature_02_coefficients",
    "curvature_02_defect",
    "chern_degree",
    "conormal_from_path",
]

CHERN_RESIDUAL = 1e-6


@dataclass(frozen=True)
class BBrane:
    """A B-brane on the mirror.

    ``support`` is ``"point"`` (skyscraper at ``point``), ``"E_i"`` (line bundle
    O(``degree``) on the exceptional curve ``i``) or ``"cycle"`` (the locus
    z_j = A_j carrying the connection data of ``source``).
    """

    support: str
    point: MirrorPoint | None = None
    i: int | None = None
    degree: int | None = None
    cycle: tuple[complex, ...] = ()
    source: Any = None
    winding: int | None = None

    def __post_init__(self):
        if self.support not in ("point", "E_i", "cycle"):
            raise ValueError(f"unknown support kind {self.support!r}")
        if self.support == "point" and self.point is None:
            raise ValueError("a skyscraper needs a point")
        if self.support == "E_i" and (self.i is None or self.i < 1 or self.degree is None):
            raise ValueError("an exceptional-curve brane needs i >= 1 and a degree")
        if any(a == 0 for a in self.cycle):
            raise ValueError("cycle constants A_j must be nonzero")

    def to_json(self) -> dict:
        out: dict[str, Any] = {"support": self.support}
        if self.support == "point":
            out["point"] = self.point.to_json()
        elif self.support == "E_i":
            out["i"] = self.i
            out["degree"] = self.degree
            if self.winding is not None:
                out["winding"] = self.winding
        else:
            out["A"] = [[a.real, a.imag] for a in self.cycle]
            if isinstance(self.source, ConormalBrane):
                out["n"], out["k"] = self.source.n, self.source.k
        return out


def _strip_index(spec: SurfaceSpec, s: float) -> int:
    """k with s_{k-1} < s < s_k (0 below s_0, n+1 above s_n)."""
    return bisect.bisect_left(spec.log_moduli, s)


def transform_fiber(spec: SurfaceSpec, s: float, lam: float, h1: complex, h2: complex) -> BBrane:
    """Skyscraper mirror to the torus fiber T_{s,lam} with holonomies (h1, h2).

    Working convention: the left affine coordinate is x1(s) = s, so
    u_k = exp(-2 pi s) conj(h1) on the strip s_{k-1} < s < s_k.
    """
    tol = spec.tol
    h1, h2 = complex(h1), complex(h2)
    if abs(abs(h1) - 1) > tol:
        raise ValueError("holonomy h1 must be unitary")
    w = global_w(lam, h2, tol)
    s_vals = spec.log_moduli
    on_wall = any(abs(s - si) <= tol for si in s_vals)
    if abs(lam) <= tol:
        if on_wall:
            raise ValueError("(s, lam) lies in the discriminant locus")
        if not s_vals[0] < s < s_vals[-1]:
            raise ValueError("on lam = 0 the fiber must sit over some S_i = (s_{i-1}, s_i)")
    k = _strip_index(spec, s)
    u_k = cmath.exp(-TWO_PI * s) * h1.conjugate()
    h = 1 + w
    n = spec.n
    if k <= n:
        point = MirrorPoint(k, u_k, h / u_k)
    else:
        # beyond s_n: u_{n+1} = v_{n+1}^{-1}
        point = MirrorPoint(n, h * u_k, 1 / u_k)
    return BBrane("point", point=point)


def transform_sphere_brane(spec: SurfaceSpec, path: LiftedPath) -> BBrane:
    """(L_gamma, nabla_0) goes to O(-w(gamma)) on the exceptional curve E_i."""
    try:
        strong = is_strongly_admissible(spec, path)
    except NotAdmissible as exc:
        raise NotAdmissible(f"path is not admissible: {exc}") from None
    if not strong:
        raise NotAdmissible("path is not strongly admissible")
    i = path.index
    w = winding_number(path, reference_path(spec, i), spec.tol)
    return BBrane("E_i", i=i, degree=-w, winding=w)


def transform_conormal(brane: ConormalBrane) -> BBrane:
    """C = {z_j = exp 2pi(c_j - i b_j), j > k}, carrying nabla-check built from (a, xi)."""
    cycle = tuple(cmath.exp(TWO_PI * complex(c, -b)) for c, b in zip(brane.c, brane.b))
    return BBrane("cycle", cycle=cycle, source=brane)


def _jacobian(field, x: np.ndarray, step: float) -> np.ndarray:
    """J[j, l] = d field_j / d x_l by central differences; x has shape (k, ...)."""
    k = x.shape[0]
    cols = []
    for l in range(k):
        e = np.zeros_like(x)
        e[l] = step
        cols.append((np.asarray(field(x + e)) - np.asarray(field(x - e))) / (2 * step))
    return np.stack(cols, axis=1)


def curvature_02_coefficients(brane: ConormalBrane, x: np.ndarray, step: float = 1e-4) -> np.ndarray:
    """Coefficients of dzbar_j/zbar_j ^ dzbar_l/zbar_l (j > l) in F^{0,2}.

    c_{jl} = -(i pi / 2)(da_j/dx_l - da_l/dx_j) + (pi / 2)(dxi_j/dx_l - dxi_l/dx_j).
    Returned with shape (k, k, ...), antisymmetric in the first two axes.
    """
    ja = _jacobian(brane.a, x, step)
    jx = _jacobian(brane.xi, x, step)
    curl_a = ja - np.swapaxes(ja, 0, 1)
    curl_xi = jx - np.swapaxes(jx, 0, 1)
    return -0.5j * math.pi * curl_a + 0.5 * math.pi * curl_xi


def curvature_02_defect(brane: ConormalBrane, step: float = 1e-4, num: int = 9) -> float:
    """max over a num^k grid on the brane's domain of |F^{0,2}| coefficients."""
    if not step > 0 or num < 1:
        raise ValueError("degenerate grid")
    if brane.k == 1:
        return 0.0
    grids = np.meshgrid(*brane.grid_axes(num), indexing="ij")
    coeff = curvature_02_coefficients(brane, np.stack(grids), step)
    return float(np.max(np.abs(coeff)))


def chern_degree(brane: ConormalBrane, interval: tuple[float, float] | None = None) -> int:
    """Degree of the line bundle on the compactified curve: -(xi_1(end) - xi_1(start))."""
    if brane.k != 1:
        raise ValueError("chern_degree needs a k = 1 brane")
    x0, x1 = interval if interval is not None else brane.domain[0]
    ends = np.asarray(brane.xi(np.array([[x0, x1]], dtype=float)), dtype=float)[0]
    value = -(ends[1] - ends[0])
    d = round(value)
    if not math.isfinite(value) or abs(value - d) > CHERN_RESIDUAL:
        raise ValueError(f"non-integral degree {value!r}: brane does not compactify")
    return int(d)


def conormal_from_path(spec: SurfaceSpec, path: LiftedPath) -> ConormalBrane:
    """The k = 1 brane over S_i read off a strongly admissible path.

    xi_1(s) is the angle of the path minus that of the reference path, in
    turns, both measured from the common start; the brane sits at x_2 = 0
    with b = 1/2 so its cycle is w = -1.
    """
    if not is_strongly_admissible(spec, path):
        raise NotAdmissible("path is not strongly admissible")
    i = path.index
    ref = reference_path(spec, i)
    s = spec.log_moduli
    t0, r0 = path.vertices[0][1], ref.vertices[0][1]

    def xi(x):
        x = np.asarray(x, dtype=float)
        sv = np.clip(x[0], s[i - 1], s[i])
        return ((path.theta_of_s(sv) - t0) - (ref.theta_of_s(sv) - r0))[None, ...] / TWO_PI

    return ConormalBrane(2, 1, (0.0,), (0.5,), xi, domain=((s[i - 1], s[i]),))
