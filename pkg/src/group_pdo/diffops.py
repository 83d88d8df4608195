"""Difference operators on the dual and invariant x-derivatives.

A difference operator Delta_q acts on Fourier coefficients by
Delta_q fhat = (q f)^ for a function q vanishing at the identity.  Symbols
are differenced kernel-side: transform sigma(x, .) to its kernel on a grid
whose exactness covers the band, multiply by q, transform back on the
shrunken trusted band.  On the torus the shifts q = exp(+-i x_j) - 1 admit
an exact index rule which is used as a fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import BandExhaustedError, PrecisionError
from .fourier import GridFunction, forward, inverse
from .groups import SU2, DualIndex, Torus
from .symbols import Symbol

_TOL = 1e-9


@dataclass
class DifferenceOp:
    """First or higher order difference operator Delta_q.

    point_fn evaluates q at arbitrary group points; native_band is the dual
    band q occupies (|k| units on the torus, doubled spin on SU(2)), which is
    what one application consumes from a symbol's trusted band.  shift, when
    set, is the exact torus rule (axis, step): Delta sigma(k) =
    sigma(k - step e_axis) - sigma(k).
    """

    name: str
    order: int
    native_band: int
    point_fn: Callable[[np.ndarray], np.ndarray]
    shift: Optional[tuple[int, int]] = None

    def values(self, grid) -> np.ndarray:
        return self.point_fn(grid.nodes)

    def at_identity(self, group) -> complex:
        return complex(self.point_fn(np.asarray([group.identity()]))[0])


def admissible_collection(group) -> list[DifferenceOp]:
    """The strongly admissible first-order collection used everywhere.

    Torus: q(x) = exp(+-i x_j) - 1 per coordinate.  SU(2): the four
    spin-1/2 coefficients q_ab = D^{1/2}_ab - delta_ab, whose common zero
    set is exactly {e} (the defining representation is faithful, so the
    centre is covered).
    """
    if isinstance(group, Torus):
        ops = []
        for j in range(group.n):
            for step in (+1, -1):
                ops.append(
                    DifferenceOp(
                        name=f"q[{'+' if step > 0 else '-'}{j + 1}]",
                        order=1,
                        native_band=1,
                        point_fn=_torus_shift_fn(j, step),
                        shift=(j, step),
                    )
                )
        return ops
    if isinstance(group, SU2):
        ops = []
        for a in range(2):
            for b in range(2):
                ops.append(
                    DifferenceOp(
                        name=f"q[{a}{b}]",
                        order=1,
                        native_band=1,
                        point_fn=_su2_coeff_fn(a, b),
                    )
                )
        return ops
    raise TypeError(f"unsupported group {group!r}")


def laplace_op(group) -> DifferenceOp:
    """Second-order difference from rho^2(x) = sum over the basic collection
    of (d_xi - trace xi(x)); nonnegative, vanishing only at e."""
    if isinstance(group, Torus):

        def fn(points):
            return np.sum(2.0 - 2.0 * np.cos(points), axis=1).astype(complex)

        return DifferenceOp(name="laplace", order=2, native_band=1, point_fn=fn)
    if isinstance(group, SU2):

        def fn(points):
            return (2.0 - 2.0 * points[:, 0]).astype(complex)

        return DifferenceOp(name="laplace", order=2, native_band=1, point_fn=fn)
    raise TypeError(f"unsupported group {group!r}")


def _torus_shift_fn(axis: int, step: int):
    def fn(points):
        return np.exp(1j * step * points[:, axis]) - 1.0

    return fn


def _su2_coeff_fn(a: int, b: int):
    # spin-1/2 in the ascending weight basis, straight from the quaternion
    def fn(points):
        q0, q1, q2, q3 = points[:, 0], points[:, 1], points[:, 2], points[:, 3]
        mats = {
            (0, 0): q0 + 1j * q3,
            (0, 1): q2 - 1j * q1,
            (1, 0): -q2 - 1j * q1,
            (1, 1): q0 - 1j * q3,
        }
        val = mats[(a, b)].astype(complex)
        if a == b:
            val = val - 1.0
        return val

    return fn


# ---------------------------------------------------------------------------
# difference application


def difference(q: DifferenceOp, sigma: Symbol, grid=None) -> Symbol:
    """Delta_q sigma on the trusted band shrunk by q's native band."""
    new_native = sigma.native_band - q.native_band
    if new_native < -_TOL:
        raise BandExhaustedError(
            f"difference {q.name} would shrink the trusted band below the trivial "
            f"representation (native band {sigma.native_band})"
        )
    new_native = max(new_native, 0.0)
    if isinstance(sigma.group, SU2):
        new_native = int(round(new_native))
    new_band = sigma.group.band_of_native(new_native)
    target = [xi for xi in sigma.duals if _native_index(sigma.group, xi) <= new_native + _TOL]
    if isinstance(sigma.group, Torus) and q.shift is not None:
        blocks = _shifted_blocks(q, sigma, target)
    else:
        blocks = _kernel_side_blocks(q, sigma, target, new_band, grid)
    return Symbol(
        sigma.group,
        new_band,
        tuple(target),
        blocks,
        grid=sigma.grid,
        native_band=new_native,
        provenance=f"D[{q.name}]{sigma.provenance}",
    )


def _native_index(group, xi: DualIndex) -> float:
    if isinstance(group, Torus):
        return float(np.sqrt(xi.casimir))
    return float(xi.label)


def _shifted_blocks(q: DifferenceOp, sigma: Symbol, target) -> list:
    axis, step = q.shift
    blocks = []
    for xi in target:
        k = list(xi.label)
        k[axis] -= step
        shifted = tuple(k)
        left = sigma.block(shifted) if sigma.has_label(shifted) else 0.0
        blocks.append(left - sigma.block(xi.label))
    return blocks


def _kernel_side_blocks(q: DifferenceOp, sigma: Symbol, target, new_band: float, grid) -> list:
    if grid is None:
        grid = sigma.grid if sigma.grid is not None else sigma.group.grid_for_band(sigma.band)
    grid.require_band(sigma.band, what="symbol band")
    qvals = q.values(grid)
    target = tuple(target)
    if sigma.invariant:
        coeffs = sigma.slice_coefficients()
        k = inverse(coeffs, grid)
        out = forward(GridFunction(grid, k.values * qvals), new_band, duals=target)
        return list(out.blocks)
    n = grid.node_count
    blocks = [np.empty((n, xi.dim, xi.dim), dtype=complex) for xi in target]
    for node in range(n):
        k = inverse(sigma.slice_coefficients(node), grid)
        out = forward(GridFunction(grid, k.values * qvals), new_band, duals=target)
        for b, ob in zip(blocks, out.blocks):
            b[node] = ob
    return blocks


def laplace_difference(sigma: Symbol, grid=None) -> Symbol:
    return difference(laplace_op(sigma.group), sigma, grid=grid)


# ---------------------------------------------------------------------------
# invariant x-derivatives


def invariant_derivative(beta: tuple[int, ...], sigma: Symbol, alias_tol: float = 1e-8) -> Symbol:
    """d^beta sigma: left-invariant derivatives of the x-dependence.

    The x-dependence of each matrix entry is expanded in the group Fourier
    series on the symbol's grid, coefficient blocks are multiplied on the
    left by the vector-field symbols (composition left-to-right in beta,
    which matters on SU(2)), and the series is resummed.  Inputs whose
    x-spectrum is not resolved by the grid are rejected.
    """
    group = sigma.group
    if len(beta) != group.dim:
        raise ValueError(f"beta must have {group.dim} entries")
    if sigma.invariant or sum(beta) == 0:
        if sum(beta) == 0:
            return sigma
        zero = sigma.map_blocks(lambda xi, b: np.zeros_like(b))
        zero.provenance = f"d^{beta}{sigma.provenance}"
        return zero
    grid = sigma.grid
    x_band = grid.exactness_band
    x_duals = group.enumerate_dual(x_band)
    mults = []
    for eta in x_duals:
        s = np.eye(eta.dim, dtype=complex)
        for j, power in enumerate(beta):
            sx = group.vector_field_symbol(j, eta)
            for _ in range(power):
                s = s @ sx
        mults.append(s)
    blocks = []
    for xi, sblock in zip(sigma.duals, sigma.blocks):
        out = np.empty_like(sblock)
        for i in range(xi.dim):
            for j in range(xi.dim):
                g = GridFunction(grid, sblock[:, i, j])
                coeffs = forward(g, x_band, duals=x_duals)
                back = inverse(coeffs, grid)
                scale = max(float(np.max(np.abs(g.values))), 1.0)
                resid = float(np.max(np.abs(back.values - g.values)))
                if resid > alias_tol * scale:
                    raise PrecisionError(
                        f"x-dependence of sigma at xi={xi.label} entry ({i},{j}) is not "
                        f"resolved by the grid (round-trip residual {resid:.3g})"
                    )
                new_blocks = [m @ b for m, b in zip(mults, coeffs.blocks)]
                dcoeffs = type(coeffs)(coeffs.group, coeffs.band, coeffs.duals, new_blocks)
                out[:, i, j] = inverse(dcoeffs, grid).values
        blocks.append(out)
    return Symbol(
        group,
        sigma.band,
        sigma.duals,
        blocks,
        grid=grid,
        native_band=sigma.native_band,
        provenance=f"d^{beta}{sigma.provenance}",
    )
