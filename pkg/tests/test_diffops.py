import dataclasses

import numpy as np
import pytest

from group_pdo.diffops import (
    admissible_collection,
    difference,
    invariant_derivative,
    laplace_difference,
    laplace_op,
)
from group_pdo.errors import BandExhaustedError, PrecisionError
from group_pdo.fourier import GridFunction
from group_pdo.symbols import identity_symbol, multiplier_power, schrodinger_phase


class TestAdmissibleCollection:
    def test_torus_counts_and_gradients(self, t1, t2):
        ops1 = admissible_collection(t1)
        assert len(ops1) == 2
        assert len(admissible_collection(t2)) == 4
        # gradient of exp(+-ix)-1 at 0 is +-i: rank 1 = dim
        h = 1e-6
        for q, sign in zip(ops1, (1, -1)):
            grad = (q.point_fn(np.array([[h]])) - q.point_fn(np.array([[-h]])))[0] / (2 * h)
            assert grad == pytest.approx(sign * 1j, abs=1e-6)

    def test_vanish_at_identity(self, t1, su2):
        for group in (t1, su2):
            for q in admissible_collection(group):
                assert abs(q.at_identity(group)) <= 1e-14

    def test_su2_strong_admissibility_scan(self, su2):
        ops = admissible_collection(su2)
        assert len(ops) == 4
        grid = su2.haar_grid(12)
        away = su2.distances(grid.nodes, su2.identity()) > 0.1
        total = sum(np.abs(q.values(grid)) ** 2 for q in ops)
        assert float(np.min(total[away])) > 1e-3
        # the centre -e is separated even though every character misses it
        minus_e = np.array([[-1.0, 0.0, 0.0, 0.0]])
        assert sum(abs(q.point_fn(minus_e)[0]) ** 2 for q in ops) > 1.0


class TestTorusShifts:
    def test_shift_value_weight_inverse(self, t1):
        sig = multiplier_power(t1, -1.0, t1.band_of_native(6))
        q_plus = admissible_collection(t1)[0]
        out = difference(q_plus, sig)
        assert out.block((1,))[0, 0] == pytest.approx(1 - 1 / np.sqrt(2), abs=1e-14)

    def test_shift_vs_kernel_side(self, t1):
        sig = multiplier_power(t1, -0.7, t1.band_of_native(9))
        for q in admissible_collection(t1):
            fast = difference(q, sig)
            slow = difference(dataclasses.replace(q, shift=None), sig)
            for xi in fast.duals:
                np.testing.assert_allclose(
                    fast.block(xi.label), slow.block(xi.label), atol=1e-11
                )

    def test_leibniz_product_of_shifts(self, t1):
        # Delta_{q1 q2} = Delta_{q1} Delta_{q2} for multiplication operators
        sig = multiplier_power(t1, -1.0, t1.band_of_native(8))
        q1, q2 = admissible_collection(t1)

        def q1q2(points):
            return q1.point_fn(points) * q2.point_fn(points)

        combined = dataclasses.replace(q1, name="q1q2", native_band=2, point_fn=q1q2, shift=None)
        lhs = difference(combined, sig)
        rhs = difference(q1, difference(q2, sig))
        for xi in lhs.duals:
            np.testing.assert_allclose(lhs.block(xi.label), rhs.block(xi.label), atol=1e-11)

    def test_annihilates_constant_in_xi(self, t1):
        sig = identity_symbol(t1, t1.band_of_native(6))
        for q in admissible_collection(t1):
            out = difference(q, sig)
            for b in out.blocks:
                np.testing.assert_allclose(b, 0, atol=1e-13)

    def test_band_accounting(self, t1):
        sig = multiplier_power(t1, -1.0, t1.band_of_native(3))
        q = admissible_collection(t1)[0]
        out = difference(q, difference(q, sig))
        assert out.native_band == pytest.approx(1.0)
        with pytest.raises(BandExhaustedError):
            difference(q, difference(q, out))


class TestSU2Difference:
    def test_identity_annihilated_on_inner_band(self, su2):
        sig = identity_symbol(su2, su2.band_of_native(6))
        for q in admissible_collection(su2):
            out = difference(q, sig)
            assert out.native_band == 5
            for b in out.blocks:
                np.testing.assert_allclose(b, 0, atol=1e-12)

    def test_difference_matches_exact_coupling(self, su2):
        # For sigma = diag multiplier f(<xi>) I the differenced symbol can be
        # checked against a brute-force quadrature of q * kernel per entry.
        band = su2.band_of_native(4)
        sig = multiplier_power(su2, -1.0, band)
        q = admissible_collection(su2)[1]  # off-diagonal spin-1/2 entry
        out = difference(q, sig)
        grid = su2.grid_for_band(band)
        from group_pdo.fourier import forward, inverse

        kernel_fn = inverse(sig.slice_coefficients(), grid)
        qk = GridFunction(grid, kernel_fn.values * q.values(grid))
        brute = forward(qk, out.band, duals=out.duals)
        for xi, b in zip(out.duals, brute.blocks):
            np.testing.assert_allclose(out.block(xi.label), b, atol=1e-12)

    def test_laplace_values(self, su2):
        pts = np.array([[1.0, 0, 0, 0], [-1.0, 0, 0, 0], [0.0, 1.0, 0, 0]])
        vals = laplace_op(su2).point_fn(pts)
        np.testing.assert_allclose(vals, [0.0, 4.0, 2.0], atol=1e-14)

    def test_laplace_nonnegative_on_grid(self, su2, t2):
        for group, res in ((su2, 8), (t2, 7)):
            grid = group.haar_grid(res)
            vals = laplace_op(group).values(grid)
            assert np.abs(vals.imag).max() < 1e-12
            assert vals.real.min() >= -1e-12

    def test_laplace_difference_identity(self, su2):
        sig = identity_symbol(su2, su2.band_of_native(5))
        out = laplace_difference(sig)
        for b in out.blocks:
            np.testing.assert_allclose(b, 0, atol=1e-12)


class TestInvariantDerivative:
    def test_invariant_symbol_gives_zero(self, t1):
        sig = multiplier_power(t1, -1.0, t1.band_of_native(5))
        out = invariant_derivative((1,), sig)
        for b in out.blocks:
            np.testing.assert_allclose(b, 0)

    def test_matches_finite_differences_t1(self, t1):
        grid = t1.haar_grid(64)
        x = grid.nodes[:, 0]
        f = GridFunction(grid, np.cos(x))
        sig = schrodinger_phase(t1, 1.3, f, 0.0, t1.band_of_native(8))
        out = invariant_derivative((1,), sig)
        # d/dx exp(1.3 i cos x) = -1.3 i sin(x) exp(1.3 i cos x)
        expected = -1.3j * np.sin(x) * np.exp(1.3j * np.cos(x))
        for xi in out.duals:
            np.testing.assert_allclose(out.block(xi.label)[:, 0, 0], expected, atol=1e-10)

    def test_su2_second_derivative_composes(self, su2):
        grid = su2.haar_grid(8)
        f = GridFunction(grid, grid.nodes[:, 0].astype(complex))  # q0, band j2=1
        sig = schrodinger_phase(su2, 0.4, f, 0.0, su2.band_of_native(2))
        dz = invariant_derivative((0, 0, 1), sig)
        dzz_direct = invariant_derivative((0, 0, 2), sig)
        dzz_composed = invariant_derivative((0, 0, 1), dz)
        for xi in dzz_direct.duals:
            np.testing.assert_allclose(
                dzz_direct.block(xi.label), dzz_composed.block(xi.label), atol=1e-8
            )

    def test_su2_mixed_order_is_left_to_right(self, su2):
        grid = su2.haar_grid(8)
        f = GridFunction(grid, grid.nodes[:, 2].astype(complex))
        sig = schrodinger_phase(su2, 0.9, f, 0.0, su2.band_of_native(2))
        dxy = invariant_derivative((1, 1, 0), sig)
        dx_of_dy = invariant_derivative((1, 0, 0), invariant_derivative((0, 1, 0), sig))
        for xi in dxy.duals:
            np.testing.assert_allclose(dxy.block(xi.label), dx_of_dy.block(xi.label), atol=1e-9)

    def test_aliased_input_rejected(self, t1):
        grid = t1.haar_grid(8)
        x = grid.nodes[:, 0]
        # exp(6 i cos x) has substantial spectrum past |k| = 3
        f = GridFunction(grid, np.cos(x))
        sig = schrodinger_phase(t1, 6.0, f, 0.0, t1.band_of_native(2))
        with pytest.raises(PrecisionError):
            invariant_derivative((1,), sig)
