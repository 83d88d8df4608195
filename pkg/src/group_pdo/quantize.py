"""Quantization: apply Op(sigma), Schwartz kernels, dense grid realizations.

Op(sigma) f(x) = sum_xi d_xi Tr(xi(x) sigma(x, xi) fhat(xi)); the kernel is
K(x, y) = sum_xi d_xi Tr(xi(y^-1 x) sigma(x, xi)) and the dense realization
is M[i, j] = K(x_i, y_j) w_j, the single object handed to the norm
estimators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PrecisionError
from .fourier import FourierCoefficients, GridFunction, forward, inverse, sup_norm
from .groups import SU2Grid, TorusGrid
from .symbols import Symbol

BAND_CHECK_TOL = 1e-8


@dataclass
class KernelTable:
    grid: object
    values: np.ndarray  # (N, N), K(x_i, y_j)
    band: float

    def csv_rows(self):
        yield ["# kernel-table", f"group={self.grid.group.name}", f"nodes={self.grid.node_count}", f"band={self.band!r}"]
        yield ["# row-major K(x_i, y_j); columns alternate re, im"]
        for row in self.values:
            out = []
            for z in row:
                out.extend((z.real, z.imag))
            yield out


@dataclass
class DenseOperator:
    grid: object
    matrix: np.ndarray  # (N, N), M = K * w (column-scaled)
    band: float
    provenance: str = ""

    @property
    def node_count(self) -> int:
        return self.matrix.shape[0]

    def csv_rows(self):
        yield ["# dense-operator", f"group={self.grid.group.name}", f"nodes={self.node_count}", f"band={self.band!r}", self.provenance]
        yield ["# row-major M[i, j] = K(x_i, y_j) w_j; columns alternate re, im"]
        for row in self.matrix:
            out = []
            for z in row:
                out.extend((z.real, z.imag))
            yield out


def same_grid(g1, g2) -> bool:
    if g1 is g2:
        return True
    return type(g1) is type(g2) and g1.meta() == g2.meta()


def apply(sigma: Symbol, f: GridFunction, check_band: bool = True) -> GridFunction:
    """Evaluate Op(sigma) f by the finite trace sum at every node.

    f must be band-limited within sigma's band; with check_band the input is
    round-tripped through the band and rejected if it does not come back.
    """
    grid = f.grid
    if not sigma.invariant and not same_grid(sigma.grid, grid):
        raise ValueError("gridded symbol and function live on different grids")
    grid.require_band(sigma.band, what="symbol band")
    coeffs = forward(f, sigma.band, duals=sigma.duals)
    if check_band:
        back = inverse(coeffs, grid)
        scale = max(sup_norm(f), 1.0)
        err = float(np.max(np.abs(back.values - f.values)))
        if err > BAND_CHECK_TOL * scale:
            raise PrecisionError(
                f"input is not band-limited within band {sigma.band:.6g} "
                f"(round-trip residual {err:.3g}); refuse to quantize an aliased input"
            )
    if sigma.invariant:
        out = FourierCoefficients(
            sigma.group,
            sigma.band,
            sigma.duals,
            [b @ c for b, c in zip(sigma.blocks, coeffs.blocks)],
        )
        return inverse(out, grid)
    vals = np.zeros(grid.node_count, dtype=complex)
    for xi, sblock, chat in zip(sigma.duals, sigma.blocks, coeffs.blocks):
        table = _rep_table(grid, xi)
        prod = sblock @ chat  # (N, d, d)
        vals += xi.dim * np.einsum("nab,nba->n", table, prod, optimize=True)
    return GridFunction(grid, vals)


def kernel(sigma: Symbol, grid=None) -> KernelTable:
    """K(x, y) = F^{-1} sigma(x, .)(y^{-1} x) tabulated on node pairs."""
    grid = _resolve_grid(sigma, grid)
    if isinstance(grid, TorusGrid):
        return KernelTable(grid, _kernel_torus(sigma, grid), sigma.band)
    if isinstance(grid, SU2Grid):
        return KernelTable(grid, _kernel_su2(sigma, grid), sigma.band)
    raise TypeError(f"unsupported grid {type(grid)!r}")


def _resolve_grid(sigma: Symbol, grid):
    if grid is None:
        grid = sigma.grid if sigma.grid is not None else sigma.group.grid_for_band(sigma.band)
    if not sigma.invariant and not same_grid(sigma.grid, grid):
        raise ValueError("gridded symbol cannot be tabulated on a different grid")
    grid.require_band(sigma.band, what="symbol band")
    return grid


def _kernel_torus(sigma: Symbol, grid: TorusGrid) -> np.ndarray:
    # Translation-closed grid: K(x_i, y_j) = k_{x_i}[(i - j) mod shape].
    n_nodes = grid.node_count
    shape = grid.shape
    if sigma.invariant:
        k = inverse(sigma.slice_coefficients(), grid).values
        if len(shape) == 1:
            return _circulant(k)
        return _row_from_translates(k, shape)
    out = np.empty((n_nodes, n_nodes), dtype=complex)
    for i in range(n_nodes):
        k = inverse(sigma.slice_coefficients(i), grid).values
        out[i] = _single_row(k, shape, i)
    return out


def _circulant(k: np.ndarray) -> np.ndarray:
    # K[i, j] = k[(i - j) mod N] as strided windows over a doubled copy
    n = k.size
    doubled = np.concatenate([k[::-1], k[::-1]])
    windows = np.lib.stride_tricks.sliding_window_view(doubled, n)
    return np.ascontiguousarray(windows[n - 1 :: -1])


def _row_from_translates(k: np.ndarray, shape) -> np.ndarray:
    n_nodes = int(np.prod(shape))
    out = np.empty((n_nodes, n_nodes), dtype=complex)
    for i in range(n_nodes):
        out[i] = _single_row(k, shape, i)
    return out


def _single_row(k: np.ndarray, shape, i: int) -> np.ndarray:
    # row[j] = k[(i - j) mod shape] over multi-indices
    cube = k.reshape(shape)
    iidx = np.unravel_index(i, shape)
    slices = []
    for ax, (ii, m) in enumerate(zip(iidx, shape)):
        ar = (ii - np.arange(m)) % m
        slices.append(ar)
    mesh = np.ix_(*slices)
    return cube[mesh].ravel()


def _kernel_su2(sigma: Symbol, grid: SU2Grid) -> np.ndarray:
    n = grid.node_count
    total = sum(xi.dim**2 for xi in sigma.duals)
    left = np.empty((n, total), dtype=complex)
    right = np.empty((n, total), dtype=complex)
    pos = 0
    for xi, sblock in zip(sigma.duals, sigma.blocks):
        table = grid.rep_table(xi)
        d2 = xi.dim**2
        if sigma.invariant:
            prod = np.einsum("nab,bc->nac", table, sblock, optimize=True)
        else:
            prod = np.einsum("nab,nbc->nac", table, sblock, optimize=True)
        left[:, pos : pos + d2] = xi.dim * prod.reshape(n, d2)
        right[:, pos : pos + d2] = table.reshape(n, d2)
        pos += d2
    return left @ right.conj().T


def realize(sigma: Symbol, grid=None) -> DenseOperator:
    """Dense matrix M[i, j] = K(x_i, y_j) w_j acting on grid values."""
    grid = _resolve_grid(sigma, grid)
    ktab = kernel(sigma, grid)
    m = ktab.values * grid.weights[None, :]
    return DenseOperator(grid, m, sigma.band, provenance=sigma.provenance)


def _rep_table(grid, xi) -> np.ndarray:
    if isinstance(grid, SU2Grid):
        return grid.rep_table(xi)
    return grid.group.rep_table(xi, grid.nodes)
