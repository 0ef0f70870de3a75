import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_roots
from pathgen import TWO_PI, circle_crossings, looping_path, ray_crossing_winding, spiral_path
from syzmirror.branes import (
    ConormalBrane,
    LiftedPath,
    NotAdmissible,
    Potential,
    SphereBrane,
    admissibility_violation,
    flatness_defect,
    intersection_count,
    is_admissible,
    is_strongly_admissible,
    lagrangian_symmetry_defect,
    reference_path,
    sample_field,
    sphere_surface,
    winding_number,
)
from syzmirror.geometry_core import SurfaceSpec, lagrangian_defect

SPEC12 = SurfaceSpec((1, 2))
L2 = math.log(2)
SPIRAL = LiftedPath((0, 1), ((0, 0), (L2 / 2, math.pi), (L2, TWO_PI)))


# ---- LiftedPath ----

def test_lifted_path_validation_and_json():
    with pytest.raises(ValueError):
        LiftedPath((0, 2), ((0, 0), (1, 0)))
    with pytest.raises(ValueError):
        LiftedPath((0, 1), ((0, 0),))
    with pytest.raises(ValueError):
        LiftedPath((0, 1), ((0, 0), (0, 0), (1, 0)))
    with pytest.raises(ValueError):
        LiftedPath.from_json({"vertices": [[0, 0], [1, 0]]})
    assert LiftedPath.loads('{"target": [0, 1], "vertices": [[0, 0], [0.5, 1]]}').index == 1
    assert LiftedPath.from_json(SPIRAL.to_json()) == SPIRAL


def test_lift_and_z():
    s, th = SPIRAL.lift([0, 1, 2, 1.5])
    np.testing.assert_allclose(s, [0, L2 / 2, L2, 0.75 * L2])
    np.testing.assert_allclose(th, [0, math.pi, TWO_PI, 1.5 * math.pi])
    np.testing.assert_allclose(SPIRAL.z([0, 2]), [1, 2], atol=1e-12)
    with pytest.raises(ValueError):
        LiftedPath((0, 1), ((0, 0), (0.5, 1), (0.2, 2), (L2, 0))).theta_of_s(0.1)


# ---- admissibility ----

def test_admissibility_examples():
    assert is_admissible(SPEC12, reference_path(SPEC12, 1))
    spec3 = SurfaceSpec((1, -2, 3))
    # from a_0 = 1 to a_1 = -2 but passing over the lift of a_2 = 3 at (log 3, 0)
    through = LiftedPath((0, 1), ((0, 0), (math.log(3), 0), (L2, math.pi)))
    assert not is_admissible(spec3, through)
    assert "a_2" in admissibility_violation(spec3, through)
    wrong_end = LiftedPath((0, 1), ((0, 0), (L2, 1.0)))
    assert not is_admissible(SPEC12, wrong_end)
    wrong_start = LiftedPath((0, 1), ((0.1, 0), (L2, 0)))
    assert "first vertex" in admissibility_violation(SPEC12, wrong_start)
    assert "outside" in admissibility_violation(SPEC12, LiftedPath((1, 2), ((L2, 0), (1, 0))))


def test_passing_through_own_endpoint_lift_again_is_rejected():
    # starts at a_0 = 1, comes back through the lift (0, 2 pi) of a_0
    back = LiftedPath((0, 1), ((0, 0), (0.2, math.pi), (0.0, TWO_PI), (-0.2, 3 * math.pi), (L2, 4 * math.pi)))
    assert not is_admissible(SPEC12, back)


def test_strong_admissibility_examples(data_dir):
    assert is_strongly_admissible(SPEC12, reference_path(SPEC12, 1))
    assert is_strongly_admissible(SPEC12, SPIRAL)
    back = LiftedPath.loads((data_dir / "backtrack_path.json").read_text())
    assert is_admissible(SPEC12, back)
    assert not is_strongly_admissible(SPEC12, back)
    # oracle: a backtracking path meets some intermediate circle more than once
    assert circle_crossings(back, 0.35) > 1
    assert circle_crossings(SPIRAL, 0.35) == 1
    with pytest.raises(NotAdmissible):
        is_strongly_admissible(SPEC12, LiftedPath((0, 1), ((0, 0), (L2, 1.0))))


@given(st.integers(0, 10**6), st.integers(-3, 3))
def test_strong_admissibility_matches_circle_oracle(seed, w):
    rng = np.random.default_rng(seed)
    spec = SurfaceSpec(random_roots(rng, 2))
    path = spiral_path(spec, 2, w, rng)
    if rng.random() < 0.5:
        # swap two interior s values to force a backtrack
        verts = list(path.vertices)
        verts[1], verts[2] = (verts[2][0], verts[1][1]), (verts[1][0], verts[2][1])
        path = LiftedPath(path.target, tuple(verts))
    # crossing counts of a PL path are constant between consecutive vertex radii
    levels = np.unique(path.s)
    radii = 0.5 * (levels[1:] + levels[:-1])
    once = all(circle_crossings(path, r) == 1 for r in radii)
    assert is_strongly_admissible(spec, path) == once


# ---- reference path and winding ----

def test_reference_path_examples():
    assert reference_path(SPEC12, 1).vertices == ((0, 0), (L2, 0))
    ref = reference_path(SurfaceSpec((1, -2)), 1)
    assert ref.vertices[0] == (0, 0)
    assert ref.vertices[1] == pytest.approx((L2, math.pi))
    ref = reference_path(SurfaceSpec((1, complex(-2, -1e-12))), 1)
    assert ref.vertices[1][1] == pytest.approx(-math.pi)
    with pytest.raises(IndexError):
        reference_path(SPEC12, 2)


@given(st.integers(0, 10**6))
def test_reference_turns_at_most_pi(seed):
    spec = SurfaceSpec(random_roots(np.random.default_rng(seed), 3))
    for i in range(1, 4):
        ref = reference_path(spec, i)
        d = ref.vertices[1][1] - ref.vertices[0][1]
        assert -math.pi < d <= math.pi
        assert is_strongly_admissible(spec, ref)
        assert winding_number(ref, ref) == 0


def test_winding_examples():
    ref = reference_path(SPEC12, 1)
    assert winding_number(ref, ref) == 0
    assert winding_number(SPIRAL, ref) == 1
    for k in (-2, 1, 3):
        loops = looping_path(SPEC12, 1, k)
        assert is_admissible(SPEC12, loops) and not is_strongly_admissible(SPEC12, loops)
        assert winding_number(loops, ref) == k == ray_crossing_winding(loops, ref)


def test_winding_errors():
    ref = reference_path(SPEC12, 1)
    with pytest.raises(ValueError):
        winding_number(LiftedPath((0, 1), ((0, 0), (L2, 1.0))), ref)
    with pytest.raises(ValueError):
        winding_number(LiftedPath((0, 1), ((0.3, 0), (L2, 0))), ref)
    # the start lift is normalized away; the path still turns twice relative to the reference
    shifted = LiftedPath((0, 1), ((0, TWO_PI), (L2, 3 * TWO_PI)))
    assert winding_number(shifted, ref) == 2


def test_winding_matches_ray_oracle_on_random_paths():
    rng = np.random.default_rng(11)
    for case in range(200):
        n = int(rng.integers(1, 4))
        spec = SurfaceSpec(random_roots(rng, n))
        i = int(rng.integers(1, n + 1))
        w = int(rng.integers(-3, 4))
        path = spiral_path(spec, i, w, rng, segments=int(rng.integers(2, 6)))
        assert is_strongly_admissible(spec, path)
        ref = reference_path(spec, i)
        assert winding_number(path, ref) == ray_crossing_winding(path, ref) == w, case


@given(st.integers(0, 10**6), st.integers(1, 5))
def test_winding_invariant_under_refinement(seed, pieces):
    rng = np.random.default_rng(seed)
    spec = SurfaceSpec(random_roots(rng, 1))
    path = spiral_path(spec, 1, int(rng.integers(-3, 4)), rng)
    ref = reference_path(spec, 1)
    assert winding_number(path.refine(pieces), ref) == winding_number(path, ref)
    assert is_strongly_admissible(spec, path.refine(pieces))


@given(st.integers(0, 10**6))
def test_winding_invariant_under_homotopy_moves(seed):
    # moving an interior vertex inside the open strip never crosses a root lift
    rng = np.random.default_rng(seed)
    spec = SurfaceSpec(random_roots(rng, 2))
    path = spiral_path(spec, 1, int(rng.integers(-3, 4)), rng, segments=5)
    ref = reference_path(spec, 1)
    w = winding_number(path, ref)
    s0, s1 = spec.log_moduli[0], spec.log_moduli[1]
    for _ in range(10):
        verts = list(path.vertices)
        k = int(rng.integers(1, len(verts) - 1))
        s_new = float(np.clip(verts[k][0] + rng.normal(0, 0.1), s0 + 1e-3, s1 - 1e-3))
        verts[k] = (s_new, verts[k][1] + rng.normal(0, 2.0))
        if rng.random() < 0.3:
            verts.insert(k, (float(rng.uniform(s0 + 1e-3, s1 - 1e-3)), float(rng.normal(0, 5))))
        path = LiftedPath(path.target, tuple(verts))
        assert is_admissible(spec, path)
        assert winding_number(path, ref) == w == ray_crossing_winding(path, ref)


# ---- intersection counts ----

def test_intersection_count_examples():
    assert intersection_count(2, 2, 5) == 2
    assert intersection_count(2, 3, 5) == 1
    assert intersection_count(1, 4, 5) == 0
    with pytest.raises(IndexError):
        intersection_count(0, 1, 5)


@given(st.integers(1, 12), st.data())
def test_intersection_count_symmetric(n, data):
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(1, n))
    assert intersection_count(i, j, n) == intersection_count(j, i, n)


# ---- sphere branes ----

def test_sphere_is_lagrangian():
    assert lagrangian_defect(sphere_surface(SPEC12, SPIRAL), 1e-4) <= 1e-6
    spec = SurfaceSpec((1, -2, 3j))
    path = spiral_path(spec, 2, -2, np.random.default_rng(2))
    assert lagrangian_defect(sphere_surface(spec, path), 1e-4) <= 1e-6


def test_sphere_brane_holonomy():
    SphereBrane(SPIRAL)
    with pytest.raises(ValueError):
        SphereBrane(SPIRAL, holonomy=2)


# ---- Lagrangian and flatness defects ----

AXES = [np.linspace(-1, 1, 21), np.linspace(-1, 1, 21)]
STEP = 0.1


def test_symmetry_defect_examples():
    phi = lambda x: np.stack([2 * x[0] + x[1], x[0]])  # grad of x1^2 + x1 x2
    assert lagrangian_symmetry_defect(sample_field(phi, AXES), STEP) <= 1e-6
    rot = lambda x: np.stack([x[1], 0 * x[0]])
    assert lagrangian_symmetry_defect(sample_field(rot, AXES), STEP) == pytest.approx(1.0)
    one = sample_field(lambda x: np.sin(x), [np.linspace(0, 1, 11)])
    assert lagrangian_symmetry_defect(one, 0.1) == 0.0


def test_flatness_defect_examples():
    # grad of x1^2 x2 + x2^3: quadratic, so central differences are exact
    psi = lambda x: np.stack([2 * x[0] * x[1], x[0] ** 2 + 3 * x[1] ** 2])
    assert flatness_defect(sample_field(psi, AXES), STEP) <= 1e-6
    assert flatness_defect(sample_field(lambda x: np.stack([x[1], 0 * x[0]]), AXES), STEP) == pytest.approx(1.0)
    assert flatness_defect(sample_field(lambda x: np.ones_like(x), AXES), STEP) == 0.0


def test_defect_grid_errors():
    with pytest.raises(ValueError):
        flatness_defect(np.zeros((2, 2, 5)), 0.1)
    with pytest.raises(ValueError):
        flatness_defect(np.zeros((2, 5, 5)), 0.0)
    with pytest.raises(ValueError):
        flatness_defect(np.zeros((3, 5, 5)), 0.1)
    with pytest.raises(ValueError):
        sample_field(lambda x: x[:1], AXES)


# ---- conormal branes ----

def test_conormal_brane_validation():
    pot = Potential(lambda x: 0.5 * (x**2).sum(0), lambda x: x)
    brane = ConormalBrane.from_potentials(3, 2, [0.1], [0.2], pot, domain=[(0, 1), (0, 2)])
    assert brane.c == (0.1,) and brane.potential_generated
    assert [a[-1] for a in brane.grid_axes(5)] == [1.0, 2.0]
    assert not brane.with_perturbation(dxi=lambda x: 0 * x).potential_generated
    with pytest.raises(ValueError):
        ConormalBrane(2, 3, (), (), pot.gradient)
    with pytest.raises(ValueError):
        ConormalBrane(3, 1, (0.0,), (0.0, 0.0), pot.gradient)
    with pytest.raises(ValueError):
        ConormalBrane(2, 1, (0.0,), (0.0,), pot.gradient, domain=((1, 0),))
