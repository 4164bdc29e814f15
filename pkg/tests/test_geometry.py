import numpy as np
import pytest
from hypothesis import given, strategies as st

from boxarena import geometry as geo


class TestCross:
    def test_unit_basis(self):
        assert geo.cross_vv(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 1.0

    def test_scalar_vector_is_quarter_turn(self):
        np.testing.assert_allclose(geo.cross_sv(1.0, np.array([1.0, 0.0])), [0.0, 1.0])

    def test_parallel_vanishes(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            v = rng.normal(size=2)
            assert geo.cross_vv(v, v) == 0.0

    def test_antisymmetry(self):
        a, b = np.array([2.0, -3.0]), np.array([0.5, 4.0])
        assert geo.cross_vv(a, b) == -geo.cross_vv(b, a)


class TestTransform:
    def test_identity(self):
        np.testing.assert_allclose(geo.transform_point([1, 0], [0, 0], 0.0), [1, 0])

    def test_quarter_turn(self):
        np.testing.assert_allclose(
            geo.transform_point([1, 0], [0, 0], np.pi / 2), [0, 1], atol=1e-12
        )

    def test_half_turn_with_offset(self):
        # R(pi) @ (1,1) = (-1,-1); plus (2,3) gives (1,2)
        np.testing.assert_allclose(
            geo.transform_point([1, 1], [2, 3], np.pi), [1, 2], atol=1e-12
        )

    @given(
        st.floats(-10, 10), st.floats(-10, 10),
        st.floats(-10, 10), st.floats(-10, 10),
        st.floats(-10, 10),
    )
    def test_round_trip(self, px, py, tx, ty, angle):
        p = np.array([px, py])
        pos = np.array([tx, ty])
        back = geo.inverse_transform_point(geo.transform_point(p, pos, angle), pos, angle)
        np.testing.assert_allclose(back, p, atol=1e-9)


class TestClip:
    def test_halfway(self):
        out = geo.clip_segment_to_halfplane(
            np.array([[-1.0, 0.0], [1.0, 0.0]]), np.array([1.0, 0.0]), 0.0
        )
        np.testing.assert_allclose(out, [[-1, 0], [0, 0]])

    def test_fully_inside_unchanged(self):
        seg = np.array([[-1.0, 0.0], [-0.5, 0.2]])
        out = geo.clip_segment_to_halfplane(seg, np.array([1.0, 0.0]), 0.0)
        np.testing.assert_allclose(out, seg)

    def test_fully_outside_empty(self):
        out = geo.clip_segment_to_halfplane(
            np.array([[1.0, 0.0], [2.0, 1.0]]), np.array([1.0, 0.0]), 0.5
        )
        assert out.shape == (0, 2)

    def test_endpoint_on_plane_retained(self):
        out = geo.clip_segment_to_halfplane(
            np.array([[0.0, 0.0], [-1.0, 0.0]]), np.array([1.0, 0.0]), 0.0
        )
        assert len(out) == 2
        np.testing.assert_allclose(out[0], [0, 0])

    def test_outputs_stay_on_segment(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            seg = rng.uniform(-2, 2, size=(2, 2))
            n = rng.normal(size=2)
            n /= np.linalg.norm(n)
            off = rng.uniform(-1, 1)
            out = geo.clip_segment_to_halfplane(seg, n, off)
            d = seg[1] - seg[0]
            length = np.linalg.norm(d)
            if length < 1e-9:
                continue
            for q in out:
                # distance from q to the segment's carrier line
                perp = abs((q[0] - seg[0][0]) * d[1] - (q[1] - seg[0][1]) * d[0]) / length
                assert perp < 1e-9


class TestPolygon:
    def test_rect_is_convex_ccw(self):
        assert geo.is_convex_ccw(geo.rect_vertices(0.5, 0.3))

    def test_cw_input_rewound(self):
        cw = geo.rect_vertices(1.0, 1.0)[::-1]
        out = geo.normalize_polygon(cw)
        assert geo.signed_area(out) > 0

    def test_concave_rejected(self):
        concave = np.array([[0, 0], [2, 0], [0.2, 0.2], [0, 2]], dtype=float)
        with pytest.raises(ValueError):
            geo.normalize_polygon(concave)

    def test_centroid_moved_to_origin(self):
        v = geo.rect_vertices(0.4, 0.2) + np.array([3.0, -1.0])
        out = geo.normalize_polygon(v)
        np.testing.assert_allclose(geo.vertex_centroid(out), [0, 0], atol=1e-12)

    def test_rect_mass_properties(self):
        # solid rectangle w x h: m = rho*w*h, I = m*(w^2+h^2)/12
        w, h, rho = 1.2, 0.8, 2.0
        m, i = geo.polygon_mass_properties(geo.rect_vertices(w / 2, h / 2), rho)
        assert m == pytest.approx(rho * w * h, rel=1e-12)
        assert i == pytest.approx(m * (w * w + h * h) / 12, rel=1e-12)

    def test_circle_mass_properties(self):
        m, i = geo.circle_mass_properties(0.5, 2.0)
        assert m == pytest.approx(2.0 * np.pi * 0.25, rel=1e-12)
        assert i == pytest.approx(m * 0.125, rel=1e-12)

    def test_bounding_radius(self):
        assert geo.bounding_radius(geo.rect_vertices(3, 4)) == pytest.approx(5.0)
