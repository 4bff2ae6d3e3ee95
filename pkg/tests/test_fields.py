import math

import numpy as np
import pytest
from scipy.integrate import quad

from lplab import (
    Grid,
    SampledField,
    ScaleGrid,
    SpectralField,
    field_from_function,
    from_spectrum,
    lp_norm,
    scale_integral,
    to_spectrum,
    weighted_lp_norm,
)


def gaussian_field(grid):
    return field_from_function(grid, lambda x: np.exp(-np.pi * x[0] ** 2))


class TestGrid:
    def test_spacing_times_points_is_period(self):
        for p in (4, 64, 4096):
            g = Grid(1, p, 16.0)
            assert g.spacing * g.points_per_axis == 2.0 * g.half_extent

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            Grid(1, 100, 16.0)
        with pytest.raises(ValueError):
            Grid(1, 2, 16.0)

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValueError):
            Grid(3, 64, 16.0)

    def test_frequency_grid_spacing_is_reciprocal_period(self):
        g = Grid(1, 1024, 16.0)
        fg = g.frequency_grid()
        assert fg.spacing == pytest.approx(1.0 / (2.0 * g.half_extent), abs=0)


class TestTransforms:
    def test_gaussian_is_own_transform(self, grid1d_small):
        F = to_spectrum(gaussian_field(grid1d_small))
        xi = F.grid.axis_coords()
        assert np.max(np.abs(F.values - np.exp(-np.pi * xi**2))) <= 1e-10

    def test_zero_maps_to_zero(self, grid1d_small):
        F = to_spectrum(SampledField(grid1d_small, np.zeros(1024)))
        assert np.all(F.values == 0)

    def test_modulation_splits_the_peak(self, grid1d_small):
        f = field_from_function(
            grid1d_small, lambda x: np.exp(-np.pi * x[0] ** 2) * np.cos(2 * np.pi * x[0])
        )
        F = to_spectrum(f)
        xi = F.grid.axis_coords()
        expect = 0.5 * (np.exp(-np.pi * (xi - 1) ** 2) + np.exp(-np.pi * (xi + 1) ** 2))
        assert np.max(np.abs(F.values - expect)) <= 1e-10
        peaks = xi[np.argsort(np.abs(F.values))[-2:]]
        assert set(np.round(np.abs(peaks), 6)) == {1.0}

    def test_round_trip(self, grid1d_small, rng):
        vals = rng.standard_normal(1024) + 1j * rng.standard_normal(1024)
        f = SampledField(grid1d_small, vals)
        back = from_spectrum(to_spectrum(f))
        assert np.max(np.abs(back.values - vals)) <= 1e-12 * np.max(np.abs(vals))

    def test_inverse_of_zero(self, grid1d_small):
        fg = grid1d_small.frequency_grid()
        f = from_spectrum(SpectralField(fg, np.zeros(1024)))
        assert np.all(f.values == 0)

    def test_inverse_of_spectral_gaussian(self, grid1d_small):
        fg = grid1d_small.frequency_grid()
        xi = fg.axis_coords()
        f = from_spectrum(SpectralField(fg, np.exp(-np.pi * xi**2)))
        x = grid1d_small.axis_coords()
        assert np.max(np.abs(f.values - np.exp(-np.pi * x**2))) <= 1e-10

    def test_parseval_on_band_limited_fields(self, grid1d, rng):
        fg = grid1d.frequency_grid()
        xi = fg.axis_coords()
        for _ in range(3):
            spec = np.exp(-((np.abs(xi) - 2.0) ** 2)) * rng.standard_normal(xi.size)
            spec = spec + spec[::-1]  # real field
            f = from_spectrum(SpectralField(fg, spec))
            space = lp_norm(f, 2.0)
            freq = math.sqrt(float(np.sum(np.abs(spec) ** 2)) * fg.cell_volume)
            assert abs(space - freq) <= 1e-10 * freq


class TestLpNorm:
    def test_zero(self, grid1d_small):
        assert lp_norm(SampledField(grid1d_small, np.zeros(1024)), 1.0) == 0.0

    def test_gaussian_l2(self, grid1d_small):
        # integral of exp(-2 pi x^2) is 2^(-1/2)
        assert lp_norm(gaussian_field(grid1d_small), 2.0) == pytest.approx(2**-0.25, abs=1e-6)

    def test_unit_mass_bump_l1(self):
        grid = Grid(1, 4096, 4.0)
        mass = quad(lambda s: math.exp(-1.0 / (1.0 - s * s)), -1, 1)[0]

        def bump(x):
            inside = np.abs(x[0]) < 1
            out = np.zeros(x.shape[1:])
            out[inside] = np.exp(-1.0 / (1.0 - x[0][inside] ** 2)) / mass
            return out

        f = field_from_function(grid, bump)
        assert lp_norm(f, 1.0) == pytest.approx(1.0, abs=1e-6)

    def test_rejects_nonpositive_p(self, grid1d_small):
        with pytest.raises(ValueError):
            lp_norm(gaussian_field(grid1d_small), 0.0)

    def test_quasi_norm_accepts_small_p(self, grid1d_small):
        assert lp_norm(gaussian_field(grid1d_small), 0.5) > 0

    def test_translation_invariance(self, grid1d_small, rng):
        # shifts permute the summands; pairwise summation may regroup them,
        # so invariance holds to round-off rather than bitwise
        vals = rng.standard_normal(1024)
        a = lp_norm(SampledField(grid1d_small, vals), 1.7)
        b = lp_norm(SampledField(grid1d_small, np.roll(vals, 137)), 1.7)
        assert b == pytest.approx(a, rel=1e-13)

    def test_homogeneity(self, grid1d_small, rng):
        vals = rng.standard_normal(1024)
        f = SampledField(grid1d_small, vals)
        g = SampledField(grid1d_small, -2.5 * vals)
        for p in (0.5, 1.0, 2.0):
            assert lp_norm(g, p) == pytest.approx(2.5 * lp_norm(f, p), rel=1e-13)


class TestWeightedNorm:
    def test_unit_weight_matches_lp(self, grid1d_small, rng):
        vals = rng.standard_normal(1024)
        f = SampledField(grid1d_small, vals)
        w = SampledField(grid1d_small, np.ones(1024))
        for p in (0.7, 2.0):
            assert weighted_lp_norm(f, w, p) == lp_norm(f, p)

    def test_zero_field(self, grid1d_small):
        w = SampledField(grid1d_small, np.ones(1024))
        assert weighted_lp_norm(SampledField(grid1d_small, np.zeros(1024)), w, 2.0) == 0.0

    def test_gaussian_against_quadrature(self, grid1d_small):
        f = gaussian_field(grid1d_small)
        x = grid1d_small.axis_coords()
        w = SampledField(grid1d_small, 1.0 + x**2)
        oracle = quad(lambda s: math.exp(-2 * math.pi * s * s) * (1 + s * s), -16, 16)[0]
        assert weighted_lp_norm(f, w, 2.0) == pytest.approx(math.sqrt(oracle), abs=1e-8)

    def test_grid_mismatch_rejected(self, grid1d_small, grid1d):
        f = gaussian_field(grid1d_small)
        w = SampledField(grid1d, np.ones(4096))
        with pytest.raises(ValueError):
            weighted_lp_norm(f, w, 2.0)

    def test_negative_weight_rejected(self, grid1d_small):
        f = gaussian_field(grid1d_small)
        w = SampledField(grid1d_small, -np.ones(1024))
        with pytest.raises(ValueError):
            weighted_lp_norm(f, w, 2.0)


class TestScaleGrid:
    def test_scales_strictly_decreasing(self):
        with pytest.raises(ValueError):
            ScaleGrid(np.array([1.0, 1.0, 0.5]))
        with pytest.raises(ValueError):
            ScaleGrid(np.array([0.5, 1.0]))
        with pytest.raises(ValueError):
            ScaleGrid(np.array([1.0, -0.5]))

    def test_geometric_ratio_constant(self):
        sg = ScaleGrid.geometric(4.0, 0.5, 8)
        ratios = sg.scales[1:] / sg.scales[:-1]
        assert np.allclose(ratios, 0.5, rtol=1e-14)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            ScaleGrid(np.array([]))


class TestScaleIntegral:
    def test_zero(self):
        sg = ScaleGrid.log_spaced(1e-2, 1e2, 32)
        assert scale_integral(np.zeros(32), sg, 2.0) == 0.0

    def test_exponential_profile(self):
        # integral of (t e^-t)^2 dt/t = 1/4, so the q=2 value is 1/2
        sg = ScaleGrid.log_spaced(1e-3, 1e2, 400)
        u = sg.scales * np.exp(-sg.scales)
        assert scale_integral(u, sg, 2.0) == pytest.approx(0.5, abs=1e-3)

    def test_constant_integrand(self):
        sg = ScaleGrid.geometric(1.0, 0.25, 9)
        assert scale_integral(np.ones(9), sg, 1.0) == pytest.approx(
            9 * math.log(4.0), abs=1e-12
        )

    def test_rejects_nonpositive_q(self):
        sg = ScaleGrid.log_spaced(1e-2, 1e2, 8)
        with pytest.raises(ValueError):
            scale_integral(np.ones(8), sg, 0.0)

    def test_broadcasts_over_space(self):
        sg = ScaleGrid.geometric(1.0, 0.5, 4)
        u = np.ones((4, 7))
        out = scale_integral(u, sg, 1.0)
        assert out.shape == (7,)
        assert np.allclose(out, 4 * math.log(2.0))


class TestImmutability:
    def test_field_values_read_only(self, grid1d_small):
        f = gaussian_field(grid1d_small)
        with pytest.raises(ValueError):
            f.values[0] = 1.0


class TestDefaultScaleGrid:
    def test_range_tracks_half_extent(self, grid1d_small):
        from lplab import default_scale_grid

        sg = default_scale_grid(grid1d_small)
        assert sg.t_max == pytest.approx(2.0 * grid1d_small.half_extent)
        assert sg.t_min == pytest.approx(grid1d_small.half_extent / 1024.0)
        assert sg.count == 96
