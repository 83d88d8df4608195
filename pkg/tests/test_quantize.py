import numpy as np
import pytest

from conftest import weighted_smax
from group_pdo.errors import PrecisionError
from group_pdo.fourier import GridFunction, forward, random_bandlimited
from group_pdo.quantize import apply, kernel, realize
from group_pdo.symbols import (
    identity_symbol,
    multiplier_power,
    schrodinger_phase,
    vector_field_plus_c,
    z_plus_c_inverse,
)


class TestApply:
    def test_identity_symbol_is_identity(self, su2, rng):
        grid = su2.haar_grid(6)
        band = su2.band_of_native(6)
        f = random_bandlimited(grid, band, rng)
        out = apply(identity_symbol(su2, band), f)
        np.testing.assert_allclose(out.values, f.values, atol=1e-11)

    def test_spectral_derivative(self, t1):
        grid = t1.haar_grid(32)
        x = grid.nodes[:, 0]
        sig = vector_field_plus_c(t1, 0, 0.0, t1.band_of_native(8))
        out = apply(sig, GridFunction(grid, np.sin(x)))
        np.testing.assert_allclose(out.values, np.cos(x), atol=1e-10)

    def test_z_plus_c_inverse_inverts(self, su2, rng):
        band = su2.band_of_native(16)  # l <= 8
        grid = su2.grid_for_band(band)
        for c in (1.0, 0.3):
            zc = vector_field_plus_c(su2, 2, c, band)
            zci = z_plus_c_inverse(c, band)
            f = random_bandlimited(grid, band, rng)
            back = apply(zci, apply(zc, f))
            assert np.abs(back.values - f.values).max() < 1e-9

    def test_band_violation_rejected(self, t1):
        grid = t1.haar_grid(32)
        sig = multiplier_power(t1, 0.0, t1.band_of_native(3))
        rough = GridFunction(grid, np.sign(np.cos(grid.nodes[:, 0])) + 0.1)
        with pytest.raises(PrecisionError):
            apply(sig, rough)

    def test_multiplier_diagonalization(self, su2, rng):
        band = su2.band_of_native(5)
        grid = su2.haar_grid(5)
        sig = multiplier_power(su2, -1.0, band)
        f = random_bandlimited(grid, band, rng)
        lhs = forward(apply(sig, f), band)
        rhs = forward(f, band)
        for xi, bl, br in zip(lhs.duals, lhs.blocks, rhs.blocks):
            np.testing.assert_allclose(bl, sig.block(xi.label) @ br, atol=1e-10)

    def test_composition_of_multipliers(self, t1, rng):
        band = t1.band_of_native(10)
        grid = t1.haar_grid(32)
        s1 = multiplier_power(t1, -1.0, band)
        s2 = multiplier_power(t1, 0.5, band)
        prod = s1.map_blocks(lambda xi, b: b @ s2.block(xi.label))
        f = random_bandlimited(grid, band, rng)
        lhs = apply(s1, apply(s2, f))
        rhs = apply(prod, f)
        np.testing.assert_allclose(lhs.values, rhs.values, atol=1e-9)


class TestKernel:
    def test_dirichlet_kernel_t1(self, t1):
        grid = t1.haar_grid(16)
        ktab = kernel(identity_symbol(t1, t1.band_of_native(2)), grid)
        x = grid.nodes[:, 0]
        diff = x[:, None] - x[None, :]
        np.testing.assert_allclose(
            ktab.values, 1 + 2 * np.cos(diff) + 2 * np.cos(2 * diff), atol=1e-12
        )

    def test_invariant_kernel_depends_on_quotient(self, su2):
        band = su2.band_of_native(3)
        grid = su2.haar_grid(3)
        ktab = kernel(multiplier_power(su2, -1.0, band), grid)
        # spot check K(x, y) = F^-1 sigma (y^-1 x) at random node pairs
        from group_pdo.fourier import inverse

        kfun = inverse(multiplier_power(su2, -1.0, band).slice_coefficients(), grid)
        idx = np.random.default_rng(3).integers(0, grid.node_count, size=(20, 2))
        for i, j in idx:
            z = su2.multiply(su2.inverse(grid.nodes[j]), grid.nodes[i])
            expected = sum(
                xi.dim * np.trace(su2.rep_matrix(xi, z) @ b)
                for xi, b in zip(kfun.grid and multiplier_power(su2, -1.0, band).duals,
                                 multiplier_power(su2, -1.0, band).blocks)
            )
            assert ktab.values[i, j] == pytest.approx(expected, abs=1e-10)

    def test_x_dependent_factor(self, t1, rng):
        band = t1.band_of_native(4)
        grid = t1.haar_grid(20)
        a = random_bandlimited(grid, t1.band_of_native(3), rng).values
        sig = identity_symbol(t1, band, grid=grid).map_blocks(
            lambda xi, b: a[:, None, None] * b
        )
        ktab = kernel(sig, grid)
        base = kernel(identity_symbol(t1, band), grid)
        np.testing.assert_allclose(ktab.values, a[:, None] * base.values, atol=1e-11)

    def test_apply_via_kernel_quadrature(self, su2, rng):
        band = su2.band_of_native(4)
        grid = su2.haar_grid(4)
        sig = multiplier_power(su2, -0.5, band)
        f = random_bandlimited(grid, band, rng)
        ktab = kernel(sig, grid)
        via_kernel = ktab.values @ (grid.weights * f.values)
        direct = apply(sig, f)
        np.testing.assert_allclose(via_kernel, direct.values, atol=1e-8)


class TestRealize:
    def test_projection_idempotent(self, t1):
        grid = t1.haar_grid(24)
        m = realize(identity_symbol(t1, t1.band_of_native(6)), grid).matrix
        np.testing.assert_allclose(m @ m, m, atol=1e-8)

    def test_row_sums_reproduce_constants(self, su2):
        grid = su2.haar_grid(6)
        m = realize(identity_symbol(su2, su2.band_of_native(6)), grid).matrix
        np.testing.assert_allclose(m.sum(axis=1), 1.0, atol=1e-10)

    @pytest.mark.parametrize("s", [-1.0, 0.5])
    def test_norm_matches_sup_symbol(self, s, t1):
        band = t1.band_of_native(12)
        grid = t1.haar_grid(40)
        sig = multiplier_power(t1, s, band)
        op = realize(sig, grid)
        smax = weighted_smax(op)
        expected = max(sig.sup_op_norm(xi) for xi in sig.duals)
        assert smax == pytest.approx(expected, rel=1e-6)

    def test_two_path_agreement(self, t1, su2, rng):
        for group, res, cut in ((t1, 32, 9), (su2, 5, 5)):
            band = group.band_of_native(cut)
            grid = group.haar_grid(res)
            sig = multiplier_power(group, -1.0, band)
            op = realize(sig, grid)
            for _ in range(10):
                f = random_bandlimited(grid, band, rng)
                np.testing.assert_allclose(
                    op.matrix @ f.values, apply(sig, f).values, atol=1e-8
                )

    def test_adjoint_matches_adjoint_symbol(self, t1, rng):
        band = t1.band_of_native(8)
        grid = t1.haar_grid(24)  # uniform weights: plain conjugate transpose
        sig = z_plus_c = multiplier_power(t1, -1.0, band).map_blocks(
            lambda xi, b: b * np.exp(1j * xi.label[0])
        )
        op = realize(sig, grid)
        op_adj = realize(sig.adjoint(), grid)
        np.testing.assert_allclose(op.matrix.conj().T, op_adj.matrix, atol=1e-8)

    def test_csv_exports_carry_metadata(self, t1, tmp_path):
        grid = t1.haar_grid(10)
        sig = identity_symbol(t1, t1.band_of_native(3))
        ktab = kernel(sig, grid)
        op = realize(sig, grid)
        rows_k = list(ktab.csv_rows())
        rows_m = list(op.csv_rows())
        assert "group=t1" in rows_k[0][1] and "group=t1" in rows_m[0][1]
        assert len(rows_k) == 2 + grid.node_count
        assert len(rows_k[2]) == 2 * grid.node_count  # re, im pairs
        back = np.array(rows_m[2][0::2]) + 1j * np.array(rows_m[2][1::2])
        np.testing.assert_allclose(back, op.matrix[0], atol=1e-15)

    def test_gridded_symbol_two_path(self, t1, rng):
        grid = t1.haar_grid(40)
        band = t1.band_of_native(8)
        f0 = GridFunction(grid, np.cos(grid.nodes[:, 0]))
        sig = schrodinger_phase(t1, 0.7, f0, 0.5, band)
        op = realize(sig, grid)
        for _ in range(5):
            f = random_bandlimited(grid, band, rng)
            np.testing.assert_allclose(op.matrix @ f.values, apply(sig, f).values, atol=1e-8)
