"""Bezier and Perlin baseline family tests."""

import math

import numpy as np
import pytest

from fdsl.baselines import (
    BezierCategory,
    PerlinCategory,
    generate_bezier_categories,
    generate_perlin_categories,
    perlin_field,
    rasterize_strokes,
    render_bezier,
    render_perlin,
)
from fdsl.errors import InvalidCount
from fdsl.render import RenderConfig, filling_rate

CFG = RenderConfig(width=64, height=64, point_count=1, draw_mode="point")


class TestBezierCategories:
    def test_grid_144(self):
        cats = generate_bezier_categories(144, seed=1)
        assert len(cats) == 144
        combos = {(c.control_point_count, c.stroke_count, c.thickness) for c in cats}
        assert len(combos) == 144

    def test_count_1024(self):
        cats = generate_bezier_categories(1024, seed=1)
        assert len(cats) == 1024
        assert [c.category_id for c in cats] == list(range(1024))
        assert len({c.seed for c in cats}) == 1024
        for c in cats:
            assert c.control_point_count in (3, 4, 5, 6)
            assert 1 <= c.stroke_count <= 6
            assert 1 <= c.thickness <= 6

    def test_single_deterministic(self):
        assert generate_bezier_categories(1, 9) == generate_bezier_categories(1, 9)

    def test_invalid_count(self):
        with pytest.raises(InvalidCount):
            generate_bezier_categories(0, 1)


class TestBezierRender:
    def test_corner_to_corner_line(self):
        # a degree-1 curve is the segment itself; its coverage is about
        # one pixel of width per row at thickness 1
        ctrl = np.array([[0.0, 0.0], [1.0, 1.0]])
        img = rasterize_strokes([ctrl], 1, CFG)
        rate = filling_rate(img)
        expect = max(CFG.width, CFG.height) * 1 / (CFG.width * CFG.height)
        assert rate == pytest.approx(expect, rel=0.35)

    def test_constant_curve_is_brush_dot(self):
        ctrl = np.array([[0.5, 0.5]] * 4)
        for thickness, pixels in [(1, 1), (2, 5), (3, 9)]:
            img = rasterize_strokes([ctrl], thickness, CFG)
            assert int(np.count_nonzero(img)) == pixels

    def test_instances_differ(self):
        cat = generate_bezier_categories(10, seed=3)[7]
        a = render_bezier(cat, instance_seed=1, cfg=CFG)
        b = render_bezier(cat, instance_seed=2, cfg=CFG)
        assert not np.array_equal(a, b)

    def test_deterministic(self):
        cat = generate_bezier_categories(5, seed=4)[2]
        a = render_bezier(cat, instance_seed=11, cfg=CFG)
        b = render_bezier(cat, instance_seed=11, cfg=CFG)
        assert np.array_equal(a, b)

    def test_binary_values(self):
        cat = generate_bezier_categories(3, seed=5)[1]
        img = render_bezier(cat, instance_seed=0, cfg=CFG)
        assert set(np.unique(img)) <= {CFG.background_value, CFG.pixel_value}
        assert img.any()


class TestPerlinCategories:
    def test_grid_100(self):
        cats = generate_perlin_categories(100, seed=1)
        assert len(cats) == 100
        assert {(c.freq_x, c.freq_y) for c in cats} == {
            (fx, fy) for fx in range(1, 11) for fy in range(1, 11)}

    def test_grid_1296(self):
        cats = generate_perlin_categories(1296, seed=1)
        assert len(cats) == 1296
        combos = {(c.freq_x, c.freq_y, c.octaves, c.threshold) for c in cats}
        assert len(combos) == 1296
        assert {c.octaves for c in cats} == {1, 2, 3, 4, 5, 6}
        assert {c.freq_x for c in cats} == {1, 2, 3, 4, 5, 6}

    def test_single(self):
        (cat,) = generate_perlin_categories(1, seed=2)
        assert cat.category_id == 0
        assert cat.freq_x == 1 and cat.freq_y == 1

    def test_invalid_count(self):
        with pytest.raises(InvalidCount):
            generate_perlin_categories(-3, 1)


class TestPerlinRender:
    def cat(self, threshold=0.5, octaves=3, fx=4, fy=4, seed=77):
        return PerlinCategory(category_id=0, freq_x=fx, freq_y=fy,
                              octaves=octaves, threshold=threshold, seed=seed)

    def test_low_threshold_fills(self):
        img = render_perlin(self.cat(threshold=0.001), 0, CFG)
        assert filling_rate(img) > 0.99

    def test_high_threshold_empties(self):
        img = render_perlin(self.cat(threshold=0.999), 0, CFG)
        assert filling_rate(img) < 0.01

    def test_field_in_unit_interval(self):
        field = perlin_field(self.cat(), 3, 64, 64)
        assert field.min() >= 0.0
        assert field.max() <= 1.0

    def test_deterministic(self):
        a = render_perlin(self.cat(), 5, CFG)
        b = render_perlin(self.cat(), 5, CFG)
        assert np.array_equal(a, b)

    def test_instances_differ(self):
        a = render_perlin(self.cat(), 1, CFG)
        b = render_perlin(self.cat(), 2, CFG)
        assert not np.array_equal(a, b)

    def test_adjacent_pixel_lipschitz_bound(self):
        # one octave's worth of slope: fade' peaks at 15/8, the blended
        # corner difference is at most 2*sqrt(2), and the gradient term
        # adds 1; scale per octave by amplitude and lattice step, then
        # divide by the sqrt(2)*sum(amp) normalization
        cat = self.cat(octaves=3, fx=6, fy=6)
        w = h = 64
        field = perlin_field(cat, 9, w, h)
        l_unit = 1.875 * 2.0 * math.sqrt(2.0) + 1.0
        amp_sum = sum(0.5 ** o for o in range(cat.octaves))
        bound_x = sum(0.5 ** o * l_unit * (cat.freq_x << o) / w
                      for o in range(cat.octaves)) / (math.sqrt(2.0) * amp_sum)
        bound_y = sum(0.5 ** o * l_unit * (cat.freq_y << o) / h
                      for o in range(cat.octaves)) / (math.sqrt(2.0) * amp_sum)
        assert np.abs(np.diff(field, axis=1)).max() <= bound_x
        assert np.abs(np.diff(field, axis=0)).max() <= bound_y

    def test_binary_values(self):
        img = render_perlin(self.cat(), 4, CFG)
        assert set(np.unique(img)) <= {CFG.background_value, CFG.pixel_value}
