from math import acosh, cosh, pi, sinh, sqrt

import numpy as np
import pytest

from coxtile.coxeter import CoxeterSystem, enumerate_ball
from coxtile.errors import GeometryError
from coxtile.hyperbolic import (
    BASEPOINT,
    HPolygon,
    build_polygon,
    convexity_check,
    default_magnitudes,
    geodesic_point,
    hyp_dist,
    lorentz_dot,
    on_hyperboloid,
    place_tiles,
    polar_point,
    preserves_lorentz_form,
    reflection_matrices,
    render_svg,
    sample_overlap_fraction,
    to_klein,
)
from coxtile.pipeline import render_bundle


def law_of_cosines_angle(b, a, c):
    # hyperbolic law of cosines: cos(angle at b) from the three side lengths
    bc = hyp_dist(b, c)
    ba = hyp_dist(b, a)
    ac = hyp_dist(a, c)
    cosg = (cosh(ba) * cosh(bc) - cosh(ac)) / (sinh(ba) * sinh(bc))
    return np.arccos(np.clip(cosg, -1, 1))


def test_build_polygon_right_angles():
    poly = build_polygon(3)
    assert poly.p == 6
    for k in range(6):
        ang = law_of_cosines_angle(
            poly.vertices[k], poly.vertices[k - 1], poly.vertices[(k + 1) % 6]
        )
        assert abs(ang - pi / 2) < 1e-9
    # known circumradius of the right-angled hexagon: cosh R = sqrt(3)
    assert abs(hyp_dist(poly.vertices[0], BASEPOINT) - acosh(sqrt(3))) < 1e-9


def test_build_polygon_rotation_invariance():
    poly = build_polygon(4)
    th = 2 * pi / 8
    rot = np.array(
        [[np.cos(th), -np.sin(th), 0], [np.sin(th), np.cos(th), 0], [0, 0, 1]]
    )
    rotated = (rot @ poly.vertices.T).T
    rolled = np.roll(poly.vertices, -1, axis=0)
    assert np.max(np.abs(rotated - rolled)) < 1e-9


def test_build_polygon_nonexistence():
    with pytest.raises(GeometryError):
        build_polygon(2)


def test_reflection_matrices_properties():
    poly = build_polygon(3)
    mats = reflection_matrices(poly)
    assert len(mats) == 6
    for R in mats:
        assert preserves_lorentz_form(R, tol=1e-9)
        assert np.max(np.abs(R @ R - np.eye(3))) < 1e-9
    for k in range(6):
        prod = mats[k] @ mats[(k + 1) % 6]
        assert np.max(np.abs(np.linalg.matrix_power(prod, 2) - np.eye(3))) < 1e-8
    # non-adjacent products have no small power equal to the identity
    for k in range(6):
        for j in range(6):
            if j in (k, (k + 1) % 6, (k - 1) % 6):
                continue
            prod = mats[k] @ mats[j]
            M = np.eye(3)
            for power in range(1, 13):
                M = M @ prod
                assert np.max(np.abs(M - np.eye(3))) > 1e-4


def test_place_tiles_counts_and_constraints():
    system = CoxeterSystem.right_angled_polygon(6)
    ball = enumerate_ball(system, 3)
    poly = build_polygon(3)
    mats = reflection_matrices(poly)
    placed = place_tiles(ball, poly, mats)
    assert len(placed) == len(ball)
    assert np.max(np.abs(placed[0].vertices - poly.vertices)) == 0
    for t in placed:
        for v in t.vertices:
            assert abs(lorentz_dot(v, v) + 1) < 1e-8 and v[2] > 0


def test_neighbors_share_full_side():
    system = CoxeterSystem.right_angled_polygon(6)
    ball = enumerate_ball(system, 2)
    poly = build_polygon(3)
    mats = reflection_matrices(poly)
    placed = place_tiles(ball, poly, mats)
    by_word = {t.word: t for t in placed}
    for (i, s), j in ball.edges.items():
        a = by_word[ball.words[i]]
        b = by_word[ball.words[j]]
        # the shared side is side s of both placements
        pa = [a.vertices[s], a.vertices[(s + 1) % 6]]
        pb = [b.vertices[s], b.vertices[(s + 1) % 6]]
        for va, vb in zip(pa, pb):
            # coordinate distance: acosh amplifies dot-product roundoff far
            # beyond the actual agreement of the points
            assert np.linalg.norm(va - vb) < 1e-7


def test_overlap_fraction_small():
    system = CoxeterSystem.right_angled_polygon(6)
    ball = enumerate_ball(system, 2)
    poly = build_polygon(3)
    placed = place_tiles(ball, poly, reflection_matrices(poly))
    assert sample_overlap_fraction(placed, samples_per_tile=30, seed=0) < 1e-6


def test_convexity_check_basics():
    poly = build_polygon(3)
    assert convexity_check(poly.vertices)
    # pull one vertex inward past the chord of its neighbors
    bad = poly.vertices.copy()
    bad[0] = geodesic_point(bad[0], BASEPOINT, 0.9)
    assert not convexity_check(bad)


def test_convexity_check_self_intersection():
    poly = build_polygon(3)
    crossed = poly.vertices.copy()
    crossed[[0, 2]] = crossed[[2, 0]]
    with pytest.raises(GeometryError):
        convexity_check(crossed)


def test_default_magnitudes_distinct():
    a = [("a", (i, j)) for i in range(3) for j in range(3)]
    b = [("b", (i, j)) for i in range(3) for j in range(3)]
    mag = default_magnitudes(a, b, 1.0)
    values = {mag(ca, cb) for ca in a for cb in b}
    assert len(values) == 81


def test_deformation_zero_magnitude_is_identity():
    bundle = render_bundle(3, 1, refine=False, deform=True, epsilon_factor=0.0)
    placed = place_tiles(bundle.ball, bundle.polygon, bundle.matrices, max_norm=1)
    for t0, t1 in zip(placed, bundle.tiles):
        assert np.max(np.abs(t0.vertices - t1.vertices)) < 1e-12


def test_deformed_tiles_convex_and_face_to_face():
    bundle = render_bundle(3, 2, refine=True, deform=True)
    ball = bundle.ball
    by_word = {t.word: t for t in bundle.tiles}
    for t in bundle.tiles:
        assert convexity_check(t.vertices)
    for (i, s), j in ball.edges.items():
        wa, wb = ball.words[i], ball.words[j]
        if wa not in by_word or wb not in by_word:
            continue
        a, b = by_word[wa], by_word[wb]
        for va, vb in [
            (a.vertices[s], b.vertices[s]),
            (a.vertices[(s + 1) % 6], b.vertices[(s + 1) % 6]),
        ]:
            assert np.linalg.norm(va - vb) < 1e-7


def test_deformed_hyperboloid_constraint():
    bundle = render_bundle(3, 2, refine=True, deform=True)
    for t in bundle.tiles:
        for v in t.vertices:
            assert abs(lorentz_dot(v, v) + 1) < 1e-8


def test_render_svg_empty_and_single():
    empty = render_svg([])
    assert empty.count("<circle") == 1
    assert "<g" not in empty
    poly = build_polygon(3)
    system = CoxeterSystem.right_angled_polygon(6)
    ball = enumerate_ball(system, 0)
    placed = place_tiles(ball, poly, reflection_matrices(poly))
    one = render_svg(placed)
    assert one.count("<g ") == 1
    assert 'data-word="e"' in one


def test_render_svg_tile_count_and_determinism():
    bundle = render_bundle(3, 1, refine=False, deform=False)
    svg1 = render_svg(bundle.tiles, bundle.face_data)
    svg2 = render_svg(bundle.tiles, bundle.face_data)
    assert svg1 == svg2
    assert svg1.count("<g ") == 7  # |B_1| of the hexagon group


def test_render_points_inside_disk():
    bundle = render_bundle(3, 1, refine=False, deform=False)
    for t in bundle.tiles:
        for v in t.vertices:
            x, y = v[0] / (1 + v[2]), v[1] / (1 + v[2])
            assert x * x + y * y < 1.0


def test_deform_simplicity_error_names_vertex():
    # with the 81 refined magnitudes, a large epsilon collides vertices
    with pytest.raises(GeometryError, match="vertex"):
        render_bundle(3, 2, refine=True, deform=True, epsilon_factor=10.0)


def test_max_convex_epsilon_probe():
    from coxtile.hyperbolic import max_convex_epsilon

    def probe(eps):
        try:
            bundle = render_bundle(3, 2, refine=True, deform=True, epsilon_factor=eps)
        except GeometryError:
            return False
        return all(convexity_check(t.vertices) for t in bundle.tiles)

    eps_max = max_convex_epsilon(probe, lo=0.05, hi=1.0, steps=8)
    assert eps_max >= 0.05
    assert probe(eps_max)
    assert not probe(10.0)


def test_total_area_bounded_by_covering_disk():
    # each right-angled 2n-gon has area (2n-2)pi - 2n*(pi/2) by angle defect;
    # the tiles pack disjointly, so total area fits inside the disk that
    # covers every vertex
    from math import cosh, pi

    bundle = render_bundle(3, 2, refine=False, deform=False)
    tile_area = (6 - 2) * pi - 6 * (pi / 2)
    total = len(bundle.tiles) * tile_area
    r_max = max(
        hyp_dist(BASEPOINT, v) for t in bundle.tiles for v in t.vertices
    )
    disk_area = 2 * pi * (cosh(r_max) - 1)
    assert total <= disk_area
