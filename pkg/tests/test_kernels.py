import math

import numpy as np
import pytest

from lplab import (
    DecaySpec,
    Grid,
    KernelFamily,
    KernelSpec,
    ScaleGrid,
    check_cancellation,
    check_decay_class,
    check_low_frequency_growth,
    check_nondegeneracy,
    make_builtin,
    sample_kernel,
    to_spectrum,
)
from lplab.kernels import radial_symbol


def ray(vals):
    return np.asarray(vals, dtype=float)[np.newaxis, :]


WIDE_SCALES = ScaleGrid.log_spaced(1e-3, 1e2, 768)


class TestBuiltins:
    def test_poisson_derivative_symbol_values(self, poissonq):
        assert poissonq.symbol(ray([0.0]))[0] == 0.0
        v = poissonq.symbol(ray([1.0 / (2 * math.pi)]))[0]
        assert v == pytest.approx(-math.exp(-1), abs=1e-12)

    def test_annulus_plateau_and_support(self, annulus):
        assert annulus.symbol(ray([1.5]))[0] == 1.0
        assert annulus.symbol(ray([1.0]))[0] == 1.0
        assert annulus.symbol(ray([2.0]))[0] == 1.0
        assert annulus.symbol(ray([0.4]))[0] == 0.0
        assert annulus.symbol(ray([4.5]))[0] == 0.0

    def test_annulus_custom_radii(self):
        k = make_builtin("annulus_bump", [1.0, 1.2, 1.7, 2.0])
        assert k.symbol(ray([1.5]))[0] == 1.0
        assert k.symbol(ray([0.99]))[0] == 0.0
        assert k.symbol(ray([2.01]))[0] == 0.0

    def test_gaussian_width_override(self):
        k = make_builtin("gaussian", [2.0])
        assert k.symbol(ray([0.5]))[0] == pytest.approx(math.exp(-math.pi), rel=1e-14)

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            make_builtin("sinc")


class TestSampling:
    def test_gaussian_samples_closed_form(self, gaussian, grid1d_small):
        f = sample_kernel(gaussian, grid1d_small, 1.0)
        x = grid1d_small.axis_coords()
        assert np.max(np.abs(f.values - np.exp(-np.pi * x**2))) <= 1e-10

    def test_dilation_relates_spectra_exactly(self, poissonq, grid1d_small):
        f1 = sample_kernel(poissonq, grid1d_small, 1.0)
        f2 = sample_kernel(poissonq, grid1d_small, 2.0)
        xi = grid1d_small.frequency_grid().coords()
        s1 = to_spectrum(f1).values
        s2 = to_spectrum(f2).values
        expect = poissonq.symbol(2.0 * xi)
        assert np.max(np.abs(s2 - expect)) <= 1e-12
        assert np.max(np.abs(s1 - poissonq.symbol(xi))) <= 1e-12

    def test_mean_zero_kernel_integrates_to_zero(self, poissonq, grid1d_small):
        f = sample_kernel(poissonq, grid1d_small, 1.0)
        assert abs(np.sum(f.values) * grid1d_small.spacing) <= 1e-8

    def test_rejects_nonpositive_scale(self, gaussian, grid1d_small):
        with pytest.raises(ValueError):
            sample_kernel(gaussian, grid1d_small, 0.0)

    def test_radial_symbol_gives_even_samples(self, poissonq, grid1d_small):
        f = sample_kernel(poissonq, grid1d_small, 1.0)
        vals = f.values
        # x -> -x on the periodic grid: index i maps to (P - i) mod P
        flipped = np.roll(vals[::-1], 1)
        assert np.max(np.abs(vals - flipped)) <= 1e-10 * np.max(np.abs(vals))


class TestCancellation:
    def test_poisson_derivative_passes(self, poissonq):
        res = check_cancellation(poissonq)
        assert res.passed and res.residual == 0.0

    def test_gaussian_fails_with_unit_residual(self, gaussian):
        res = check_cancellation(gaussian)
        assert not res.passed
        assert res.residual == pytest.approx(1.0, abs=1e-14)

    def test_mexican_hat_passes(self):
        assert check_cancellation(make_builtin("mexican_hat")).passed


class TestNondegeneracy:
    def test_poisson_derivative_hits_inverse_e(self, poissonq):
        # closed form: sup of 2 pi s exp(-2 pi s) is e^-1 at s = 1/(2 pi)
        val = check_nondegeneracy(poissonq, WIDE_SCALES)
        assert val == pytest.approx(math.exp(-1), abs=1e-6)

    def test_gaussian_difference_matches_scan_oracle(self):
        spec = KernelSpec(
            "gauss_diff",
            radial_symbol(lambda r: np.exp(-np.pi * r**2) - np.exp(-4 * np.pi * r**2)),
        )
        val = check_nondegeneracy(spec, WIDE_SCALES)
        s = np.exp(np.linspace(np.log(1e-4), np.log(1e3), 2_000_001))
        oracle = float(np.max(np.exp(-np.pi * s**2) - np.exp(-4 * np.pi * s**2)))
        assert val == pytest.approx(oracle, abs=1e-6)

    def test_zero_symbol_is_degenerate(self):
        spec = KernelSpec("null", radial_symbol(lambda r: np.zeros_like(r)))
        assert check_nondegeneracy(spec, WIDE_SCALES) == 0.0

    def test_scale_invariance(self, poissonq):
        lam = 3.7
        dilated = KernelSpec(
            "dilated", lambda xi: poissonq.symbol(lam * np.asarray(xi))
        )
        a = check_nondegeneracy(poissonq, WIDE_SCALES)
        b = check_nondegeneracy(dilated, WIDE_SCALES)
        assert abs(a - b) <= 1e-6

    def test_family_sums_members(self, poissonq, gaussian):
        fam = KernelFamily((poissonq, gaussian))
        val = check_nondegeneracy(fam, WIDE_SCALES)
        # gaussian alone contributes 1 near t = 0
        assert val >= 1.0

    def test_requires_four_decades(self, poissonq):
        with pytest.raises(ValueError):
            check_nondegeneracy(poissonq, ScaleGrid.log_spaced(0.1, 1.0, 64))

    def test_two_dimensional_directions(self, poissonq):
        val = check_nondegeneracy(poissonq, WIDE_SCALES, directions=16, dimension=2)
        assert val == pytest.approx(math.exp(-1), abs=1e-6)


class TestDecayClass:
    def test_poisson_derivative_beats_polynomial(self, poissonq):
        res = check_decay_class(poissonq, DecaySpec(2, 3.0), [2, 4, 8, 16, 32, 64])
        assert res.passed
        assert all(s < -3.0 for s in res.slopes.values())

    def test_compact_support_passes_vacuously(self, annulus):
        res = check_decay_class(annulus, DecaySpec(1, 7.0), [8, 16, 32])
        assert res.passed
        assert all(s is None for s in res.slopes.values())

    def test_slow_tail_fails(self):
        spec = KernelSpec(
            "inv", radial_symbol(lambda r: np.where(r > 1, 1.0 / np.maximum(r, 1e-30), 1.0))
        )
        res = check_decay_class(spec, DecaySpec(0, 2.0), [2, 4, 8, 16, 32])
        assert not res.passed
        assert res.slopes[(0,)] == pytest.approx(-1.0, abs=0.05)

    def test_rejects_radii_inside_neighborhood(self, poissonq):
        with pytest.raises(ValueError):
            check_decay_class(poissonq, DecaySpec(0, 1.0, neighborhood_radius=2.0), [1.5, 4])


class TestLowFrequencyGrowth:
    def test_poisson_derivative_is_linear(self, poissonq):
        assert check_low_frequency_growth(poissonq) == pytest.approx(1.0, abs=0.05)

    def test_mexican_hat_is_quadratic(self):
        eps = check_low_frequency_growth(make_builtin("mexican_hat"))
        assert eps == pytest.approx(2.0, abs=0.05)

    def test_gaussian_has_no_growth(self, gaussian):
        assert check_low_frequency_growth(gaussian) < 0.1

    def test_vanishing_ray_rejected(self, annulus):
        with pytest.raises(ValueError):
            check_low_frequency_growth(annulus)


class TestFamilyValidation:
    def test_empty_family_rejected(self):
        with pytest.raises(ValueError):
            KernelFamily(())


class TestCancellationClaims:
    def test_claimed_symbols_vanish_along_a_ray(self):
        for name in ("poissonQ", "mexican_hat", "annulus_bump"):
            k = make_builtin(name)
            assert k.claims_cancellation
            r = np.array([1e-9, 1e-8, 1e-7])
            assert np.max(np.abs(k.symbol(ray(r)))) <= 1e-6

    def test_gaussian_claims_none(self, gaussian):
        assert not gaussian.claims_cancellation
