import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skintone import colorspace

# Frozen oracle values.  lin(119/255) evaluated independently as
# ((119/255 + 0.055) / 1.055) ** 2.4; YCbCr red via the BT.601 full-range
# matrix by hand.
LIN_119 = 0.184474994500441


class TestSrgbTransfer:
    def test_black_fixed_point(self):
        assert colorspace.srgb_to_linear(0.0) == 0.0

    def test_white_fixed_point(self):
        assert colorspace.srgb_to_linear(1.0) == pytest.approx(1.0, abs=1e-12)

    def test_mid_gray(self):
        assert colorspace.srgb_to_linear(119 / 255) == pytest.approx(LIN_119, abs=1e-12)

    def test_monotonic(self):
        grid = np.linspace(0, 1, 2001)
        out = colorspace.srgb_to_linear(grid)
        assert np.all(np.diff(out) > 0)

    def test_inverse(self):
        grid = np.linspace(0, 1, 501)
        back = colorspace.linear_to_srgb(colorspace.srgb_to_linear(grid))
        assert np.allclose(back, grid, atol=1e-12)


class TestRgbToYcbcr:
    def test_black_neutral_chroma(self):
        assert np.allclose(colorspace.rgb_to_ycbcr([0, 0, 0]), [0, 128, 128])

    def test_white_neutral_chroma(self):
        assert np.allclose(colorspace.rgb_to_ycbcr([255, 255, 255]), [255, 128, 128])

    def test_red(self):
        y, cb, cr = colorspace.rgb_to_ycbcr([255, 0, 0])
        assert y == pytest.approx(76.245, abs=1e-9)
        assert cb == pytest.approx(84.97232, abs=1e-9)
        assert cr == 255.0  # 255.5 before clamping

    def test_achromatic_line(self):
        grays = np.stack([np.arange(256)] * 3, axis=-1)
        out = colorspace.rgb_to_ycbcr(grays)
        assert np.all(np.abs(out[:, 1] - 128) <= 0.5)
        assert np.all(np.abs(out[:, 2] - 128) <= 0.5)

    @given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
    def test_range(self, r, g, b):
        out = colorspace.rgb_to_ycbcr([r, g, b])
        assert np.all(out >= 0) and np.all(out <= 255)


class TestRgbToLab:
    def test_white(self):
        l, a, b = colorspace.rgb_to_lab([255, 255, 255])
        assert l == pytest.approx(100.0, abs=1e-6)
        assert abs(a) < 0.01 and abs(b) < 0.01

    def test_black(self):
        assert np.allclose(colorspace.rgb_to_lab([0, 0, 0]), [0, 0, 0], atol=1e-9)

    def test_18_gray_anchor(self):
        l, a, b = colorspace.rgb_to_lab([119, 119, 119])
        assert l == pytest.approx(50.0, abs=0.1)
        assert abs(a) < 0.1 and abs(b) < 0.1

    def test_against_skimage_oracle(self):
        skimage_color = pytest.importorskip("skimage.color")
        rng = np.random.default_rng(7)
        rgb = rng.integers(0, 256, size=(200, 3), dtype=np.uint8)
        ours = colorspace.rgb_to_lab(rgb)
        theirs = skimage_color.rgb2lab(rgb[np.newaxis] / 255.0)[0]
        # Published sRGB->XYZ matrices differ in the 5th decimal; allow that.
        assert np.allclose(ours, theirs, atol=0.05)

    def test_achromatic_line(self):
        grays = np.stack([np.arange(256)] * 3, axis=-1)
        lab = colorspace.rgb_to_lab(grays)
        assert np.all(np.abs(lab[:, 1]) < 0.1)
        assert np.all(np.abs(lab[:, 2]) < 0.1)

    def test_round_trip_4096_grid(self):
        levels = np.arange(0, 256, 17)  # 16 levels per channel
        grid = np.stack(np.meshgrid(levels, levels, levels, indexing="ij"), axis=-1)
        grid = grid.reshape(-1, 3)
        back = colorspace.lab_to_rgb(colorspace.rgb_to_lab(grid))
        assert np.max(np.abs(back.astype(int) - grid)) <= 1


class TestIta:
    def test_zero_numerator(self):
        assert colorspace.ita(50.0, 10.0) == 0.0

    def test_45_degrees(self):
        assert float(colorspace.ita(70.0, 20.0)) == pytest.approx(45.0, abs=1e-9)

    def test_minus_45_degrees(self):
        assert float(colorspace.ita(30.0, 20.0)) == pytest.approx(-45.0, abs=1e-9)

    def test_b_zero_limit(self):
        assert float(colorspace.ita(60.0, 0.0)) == 90.0
        assert float(colorspace.ita(40.0, 0.0)) == -90.0

    def test_negative_b_folds_into_range(self):
        # Folded result equals using |b|.
        assert float(colorspace.ita(70.0, -20.0)) == pytest.approx(45.0, abs=1e-9)
        assert float(colorspace.ita(30.0, -20.0)) == pytest.approx(-45.0, abs=1e-9)

    def test_antisymmetry(self):
        d = np.linspace(0, 50, 1000)
        b = 12.5
        assert np.allclose(
            colorspace.ita(50 + d, b), -colorspace.ita(50 - d, b), atol=1e-9
        )

    def test_monotone_in_l(self):
        l = np.linspace(0, 100, 500)
        out = colorspace.ita(l, 15.0)
        assert np.all(np.diff(out) > 0)

    def test_monotone_decreasing_in_b(self):
        b = np.linspace(0.1, 60, 500)
        out = colorspace.ita(72.0, b)
        assert np.all(np.diff(out) < 0)

    @given(st.floats(0, 100), st.floats(-60, 60))
    def test_range(self, l, b):
        assert -90.0 <= float(colorspace.ita(l, b)) <= 90.0
