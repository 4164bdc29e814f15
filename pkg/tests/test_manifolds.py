import numpy as np
import pytest

from boxarena import geometry as geo
from boxarena.engine import (
    manifold_circle_circle,
    manifold_polygon_circle,
    manifold_polygon_polygon,
)

from conftest import circle_body, polygon_body, convex_overlap_area, sat_depth, random_convex_quad

UNIT_SQUARE = geo.rect_vertices(0.5, 0.5)


class TestCircleCircle:
    def test_overlapping(self):
        a = circle_body(0.5, (0.0, 0.0))
        b = circle_body(0.5, (0.8, 0.0))
        m = manifold_circle_circle(a, b)
        assert m.active
        np.testing.assert_allclose(m.normal, [1, 0], atol=1e-6)
        assert m.penetration == pytest.approx(0.2, abs=1e-6)
        np.testing.assert_allclose(m.position, [0.5, 0], atol=1e-6)

    def test_separated(self):
        m = manifold_circle_circle(circle_body(0.5, (0, 0)), circle_body(0.5, (2.0, 0)))
        assert not m.active
        assert m.penetration == pytest.approx(-1.0, abs=1e-6)

    def test_exact_touch_is_inactive(self):
        m = manifold_circle_circle(circle_body(0.5, (0, 0)), circle_body(0.5, (1.0, 0)))
        assert not m.active

    def test_coincident_centers_default_normal(self):
        m = manifold_circle_circle(circle_body(0.5, (0, 0)), circle_body(0.5, (0, 0)))
        assert m.active
        np.testing.assert_allclose(m.normal, [1, 0])

    def test_restitution_target_from_approach_speed(self):
        a = circle_body(0.5, (0, 0), velocity=(1, 0), restitution=0.5)
        b = circle_body(0.5, (0.8, 0), velocity=(-1, 0), restitution=1.0)
        m = manifold_circle_circle(a, b)
        # e = min(e_a, e_b) = 0.5, approach speed 2
        assert m.restitution_velocity_target == pytest.approx(1.0, abs=1e-6)

    def test_separating_pair_has_zero_target(self):
        a = circle_body(0.5, (0, 0), velocity=(-1, 0), restitution=1.0)
        b = circle_body(0.5, (0.8, 0), velocity=(1, 0), restitution=1.0)
        m = manifold_circle_circle(a, b)
        assert m.restitution_velocity_target == 0.0


class TestPolygonCircle:
    def test_face_contact(self):
        poly = polygon_body(UNIT_SQUARE, (0, 0))
        circ = circle_body(0.3, (0.7, 0.0))
        m = manifold_polygon_circle(poly, circ)
        assert m.active
        np.testing.assert_allclose(m.position, [0.5, 0], atol=1e-6)
        np.testing.assert_allclose(m.normal, [1, 0], atol=1e-6)
        assert m.penetration == pytest.approx(0.1, abs=1e-6)

    def test_far_away_inactive(self):
        m = manifold_polygon_circle(polygon_body(UNIT_SQUARE, (0, 0)), circle_body(0.3, (3, 3)))
        assert not m.active

    def test_corner_contact(self):
        # circle on the diagonal beyond the (0.5, 0.5) corner
        d = 0.1
        m = manifold_polygon_circle(
            polygon_body(UNIT_SQUARE, (0, 0)), circle_body(0.3, (0.5 + d, 0.5 + d))
        )
        assert m.active
        s = np.sqrt(2) / 2
        np.testing.assert_allclose(m.normal, [s, s], atol=1e-6)
        assert m.penetration == pytest.approx(0.3 - d * np.sqrt(2), abs=1e-6)
        np.testing.assert_allclose(m.position, [0.5, 0.5], atol=1e-6)

    def test_center_inside_polygon(self):
        # center swallowed 0.1 deep behind the right face
        m = manifold_polygon_circle(
            polygon_body(UNIT_SQUARE, (0, 0)), circle_body(0.3, (0.4, 0.0))
        )
        assert m.active
        np.testing.assert_allclose(m.normal, [1, 0], atol=1e-6)
        assert m.penetration == pytest.approx(0.3 + 0.1, abs=1e-6)

    def test_rotated_polygon(self):
        # square rotated 45 degrees: its corner reaches sqrt(2)/2 along +x
        poly = polygon_body(UNIT_SQUARE, (0, 0), rotation=np.pi / 4)
        gap = 0.05
        cx = np.sqrt(2) / 2 + 0.3 - gap
        m = manifold_polygon_circle(poly, circle_body(0.3, (cx, 0.0)))
        assert m.active
        np.testing.assert_allclose(m.normal, [1, 0], atol=1e-5)
        assert m.penetration == pytest.approx(gap, abs=1e-5)


class TestPolygonPolygon:
    def test_face_face_two_points(self):
        a = polygon_body(UNIT_SQUARE, (0, 0))
        b = polygon_body(UNIT_SQUARE, (0.9, 0))
        m1, m2 = manifold_polygon_polygon(a, b)
        assert m1.active and m2.active
        for m in (m1, m2):
            np.testing.assert_allclose(m.normal, [1, 0], atol=1e-6)
            assert m.penetration == pytest.approx(0.1, abs=1e-6)
        ys = sorted([m1.position[1], m2.position[1]])
        np.testing.assert_allclose(ys, [-0.5, 0.5], atol=1e-6)

    def test_separated(self):
        a = polygon_body(UNIT_SQUARE, (0, 0))
        b = polygon_body(UNIT_SQUARE, (3.0, 0))
        m1, m2 = manifold_polygon_polygon(a, b)
        assert not m1.active and not m2.active

    def test_corner_overlap_single_point(self):
        a = polygon_body(UNIT_SQUARE, (0, 0))
        b = polygon_body(UNIT_SQUARE, (0.5 + np.sqrt(2) / 2 - 0.05, 0), rotation=np.pi / 4)
        m1, m2 = manifold_polygon_polygon(a, b)
        assert sum([m1.active, m2.active]) == 1
        m = m1 if m1.active else m2
        np.testing.assert_allclose(m.normal, [1, 0], atol=1e-5)
        assert m.penetration == pytest.approx(0.05, abs=1e-5)

    def test_antisymmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            qa = random_convex_quad(rng)
            qb = random_convex_quad(rng) + rng.uniform(-0.5, 0.5, 2)
            a = polygon_body(qa, geo.vertex_centroid(qa))
            b = polygon_body(qb, geo.vertex_centroid(qb))
            f1, f2 = manifold_polygon_polygon(a, b)
            r1, r2 = manifold_polygon_polygon(b, a)
            if not (f1.active or f2.active):
                continue
            fwd = f1 if f1.active else f2
            rev = r1 if r1.active else r2
            assert rev.active
            np.testing.assert_allclose(rev.normal, -fwd.normal, atol=1e-5)
            assert abs(rev.penetration - fwd.penetration) < 1e-4

    def test_sat_matches_intersection_oracle(self):
        # small version of the acceptance run: activity against an exact
        # convex-intersection oracle, away from the grazing band
        rng = np.random.default_rng(11)
        checked = 0
        for _ in range(500):
            qa = random_convex_quad(rng)
            qb = random_convex_quad(rng) + rng.uniform(-1.5, 1.5, 2)
            if abs(sat_depth(qa, qb)) < 1e-4:
                continue
            a = polygon_body(qa, geo.vertex_centroid(qa))
            b = polygon_body(qb, geo.vertex_centroid(qb))
            m1, m2 = manifold_polygon_polygon(a, b)
            overlap = convex_overlap_area(qa, qb) > 0.0
            assert (m1.active or m2.active) == overlap
            checked += 1
        assert checked > 300


class TestAntisymmetryMixed:
    def test_circle_circle(self):
        a = circle_body(0.4, (0, 0))
        b = circle_body(0.3, (0.5, 0.2))
        f = manifold_circle_circle(a, b)
        r = manifold_circle_circle(b, a)
        np.testing.assert_allclose(r.normal, -f.normal, atol=1e-6)
        assert r.penetration == pytest.approx(f.penetration, abs=1e-6)
