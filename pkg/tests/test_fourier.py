import json

import numpy as np
import pytest

from group_pdo.errors import PrecisionError
from group_pdo.fourier import (
    FourierCoefficients,
    GridFunction,
    forward,
    forward_direct,
    grid_l2_norm,
    inverse,
    l2_norm,
    random_bandlimited,
)
from group_pdo.named_functions import dirichlet_kernel


class TestForward:
    def test_constant_function(self, t1):
        grid = t1.haar_grid(16)
        f = GridFunction(grid, np.ones(16))
        coeffs = forward(f, t1.band_of_native(5))
        for xi, b in zip(coeffs.duals, coeffs.blocks):
            expected = 1.0 if xi.label == (0,) else 0.0
            assert b[0, 0] == pytest.approx(expected, abs=1e-14)

    def test_cosine(self, t1):
        grid = t1.haar_grid(16)
        f = GridFunction(grid, np.cos(grid.nodes[:, 0]))
        coeffs = forward(f, t1.band_of_native(5))
        for xi, b in zip(coeffs.duals, coeffs.blocks):
            expected = 0.5 if xi.label in ((1,), (-1,)) else 0.0
            assert b[0, 0] == pytest.approx(expected, abs=1e-14)

    def test_single_matrix_coefficient(self, su2):
        grid = su2.haar_grid(8)
        xi0 = su2.dual_index(3)
        table = grid.rep_table(xi0)
        f = GridFunction(grid, table[:, 1, 3])
        coeffs = forward(f, su2.band_of_native(4))
        for xi, b in zip(coeffs.duals, coeffs.blocks):
            expected = np.zeros((xi.dim, xi.dim))
            if xi.label == 3:
                expected[3, 1] = 1.0 / xi.dim
            np.testing.assert_allclose(b, expected, atol=1e-12)

    def test_fft_matches_direct_summation(self, t1, t2, rng):
        for group, res in ((t1, 32), (t2, 9)):
            grid = group.haar_grid(res)
            f = random_bandlimited(grid, group.band_of_native((res - 1) // 2), rng)
            fast = forward(f, group.band_of_native((res - 1) // 2))
            slow = forward_direct(f, group.band_of_native((res - 1) // 2))
            for a, b in zip(fast.blocks, slow.blocks):
                np.testing.assert_allclose(a, b, atol=1e-12)

    def test_band_beyond_exactness_refused(self, t1):
        grid = t1.haar_grid(8)
        f = GridFunction(grid, np.ones(8))
        with pytest.raises(PrecisionError):
            forward(f, t1.band_of_native(4))


class TestInverse:
    def test_trivial_rep_gives_constant(self, su2):
        grid = su2.haar_grid(4)
        coeffs = FourierCoefficients(
            su2, 1.0, (su2.dual_index(0),), [np.array([[1.0 + 0j]])]
        )
        f = inverse(coeffs, grid)
        np.testing.assert_allclose(f.values, 1.0, atol=1e-14)

    def test_dirichlet_kernel_t1(self, t1):
        grid = t1.haar_grid(16)
        f = dirichlet_kernel(grid, t1.band_of_native(2))
        x = grid.nodes[:, 0]
        np.testing.assert_allclose(f.values, 1 + 2 * np.cos(x) + 2 * np.cos(2 * x), atol=1e-13)

    @pytest.mark.parametrize("spec", [("t1", 64, 25), ("t2", 11, 3), ("su2", 9, 9)])
    def test_round_trip(self, spec, t1, t2, su2, rng):
        group = {"t1": t1, "t2": t2, "su2": su2}[spec[0]]
        grid = group.haar_grid(spec[1])
        band = group.band_of_native(spec[2])
        for _ in range(5):
            f = random_bandlimited(grid, band, rng)
            back = inverse(forward(f, band), grid)
            assert np.abs(back.values - f.values).max() < 1e-10


class TestParsevalAndLinearity:
    @pytest.mark.parametrize("spec", [("t1", 64, 20), ("su2", 10, 10)])
    def test_parseval_both_directions(self, spec, t1, su2, rng):
        group = {"t1": t1, "su2": su2}[spec[0]]
        grid = group.haar_grid(spec[1])
        band = group.band_of_native(spec[2])
        for _ in range(5):
            f = random_bandlimited(grid, band, rng)
            coeffs = forward(f, band)
            assert l2_norm(coeffs) == pytest.approx(grid_l2_norm(f), abs=1e-10)

    def test_unit_character_norm(self, t1):
        grid = t1.haar_grid(32)
        f = GridFunction(grid, np.exp(1j * 3 * grid.nodes[:, 0]))
        assert l2_norm(forward(f, t1.band_of_native(5))) == pytest.approx(1.0, abs=1e-12)

    def test_linearity(self, su2, rng):
        grid = su2.haar_grid(6)
        band = su2.band_of_native(6)
        f = random_bandlimited(grid, band, rng)
        g = random_bandlimited(grid, band, rng)
        a, b = 0.7 - 0.2j, 1.3 + 0.5j
        combo = GridFunction(grid, a * f.values + b * g.values)
        cf, cg, cc = forward(f, band), forward(g, band), forward(combo, band)
        for bf, bg, bc in zip(cf.blocks, cg.blocks, cc.blocks):
            np.testing.assert_allclose(bc, a * bf + b * bg, atol=1e-12)

    def test_translation_covariance(self, t1, rng):
        grid = t1.haar_grid(64)
        band = t1.band_of_native(20)
        f = random_bandlimited(grid, band, rng)
        shift = 9
        a = 2 * np.pi * shift / 64
        shifted = GridFunction(grid, np.roll(f.values, shift))  # f(x - a)
        cf, cs = forward(f, band), forward(shifted, band)
        for xi, bf, bs in zip(cf.duals, cf.blocks, cs.blocks):
            k = xi.label[0]
            assert bs[0, 0] == pytest.approx(bf[0, 0] * np.exp(-1j * k * a), abs=1e-10)


class TestSerialization:
    def test_json_round_trip(self, su2, rng):
        grid = su2.haar_grid(4)
        band = su2.band_of_native(3)
        coeffs = forward(random_bandlimited(grid, band, rng), band)
        payload = json.loads(json.dumps(coeffs.to_json_dict()))
        assert payload["group"] == "su2"
        back = FourierCoefficients.from_json_dict(payload)
        assert back.band == coeffs.band
        for b1, b2 in zip(coeffs.blocks, back.blocks):
            np.testing.assert_allclose(b1, b2, atol=1e-15)
