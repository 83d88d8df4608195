"""Matrix symbols sigma(x, xi) and the builders used by the experiments.

A symbol stores one ``d x d`` matrix per enumerated dual index, either
x-independent (invariant) or per grid node (gridded).  Alongside the weight
band it tracks a native truncation index (ball radius |k| on the torus,
doubled spin on SU(2)) so that difference operations can account for the
band they consume.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import SingularSymbolError
from .fourier import FourierCoefficients, GridFunction
from .groups import SU2, DualIndex, Torus


@dataclass
class Symbol:
    group: object
    band: float
    duals: tuple[DualIndex, ...]
    blocks: list[np.ndarray]
    grid: object = None
    native_band: float = None
    provenance: str = ""

    def __post_init__(self):
        self.blocks = [np.asarray(b, dtype=complex) for b in self.blocks]
        if self.native_band is None:
            self.native_band = self.group.native_cut(self.band)
        n = None if self.grid is None else self.grid.node_count
        for xi, b in zip(self.duals, self.blocks):
            want = (xi.dim, xi.dim) if n is None else (n, xi.dim, xi.dim)
            if b.shape != want:
                raise ValueError(f"block for {xi.label} has shape {b.shape}, wanted {want}")
        self._index = {xi.label: i for i, xi in enumerate(self.duals)}

    @property
    def invariant(self) -> bool:
        return self.grid is None

    def block(self, label) -> np.ndarray:
        return self.blocks[self._index[label]]

    def has_label(self, label) -> bool:
        return label in self._index

    def matrix(self, xi: DualIndex, node: Optional[int] = None) -> np.ndarray:
        b = self.block(xi.label)
        return b if self.invariant else b[node]

    def slice_coefficients(self, node: Optional[int] = None) -> FourierCoefficients:
        """sigma(x, .) at one node (or the invariant table) as coefficients."""
        if self.invariant:
            blocks = self.blocks
        else:
            blocks = [b[node] for b in self.blocks]
        return FourierCoefficients(self.group, self.band, self.duals, list(blocks))

    def map_blocks(self, fn: Callable[[DualIndex, np.ndarray], np.ndarray]) -> "Symbol":
        return Symbol(
            self.group,
            self.band,
            self.duals,
            [fn(xi, b) for xi, b in zip(self.duals, self.blocks)],
            grid=self.grid,
            native_band=self.native_band,
            provenance=self.provenance,
        )

    def adjoint(self) -> "Symbol":
        swap = (0, 2, 1) if not self.invariant else (1, 0)
        out = self.map_blocks(lambda xi, b: b.conj().transpose(swap))
        out.provenance = f"adjoint({self.provenance})"
        return out

    def op_norms(self, xi: DualIndex) -> np.ndarray:
        """||sigma(x, xi)||_op per node (a single value for invariant symbols)."""
        b = self.block(xi.label)
        if xi.dim == 1:
            return np.abs(b[..., 0, 0])
        return np.linalg.svd(b, compute_uv=False)[..., 0]

    def sup_op_norm(self, xi: DualIndex) -> float:
        return float(np.max(self.op_norms(xi)))

    def to_json_dict(self) -> dict:
        """Coefficient JSON layout extended with an x-node axis when gridded."""
        entries = []
        for xi, b in zip(self.duals, self.blocks):
            entries.append(
                {
                    "label": list(xi.label) if isinstance(xi.label, tuple) else xi.label,
                    "re": b.real.tolist(),
                    "im": b.imag.tolist(),
                }
            )
        out = {
            "group": self.group.name,
            "band": self.band,
            "invariant": self.invariant,
            "provenance": self.provenance,
            "entries": entries,
        }
        if not self.invariant:
            out["x_nodes"] = self.grid.node_count
        return out


# ---------------------------------------------------------------------------
# builders


def identity_symbol(group, band: float, grid=None) -> Symbol:
    duals = group.enumerate_dual(band)
    if grid is None:
        blocks = [np.eye(xi.dim, dtype=complex) for xi in duals]
    else:
        blocks = [
            np.broadcast_to(np.eye(xi.dim, dtype=complex), (grid.node_count, xi.dim, xi.dim)).copy()
            for xi in duals
        ]
    return Symbol(group, band, duals, blocks, grid=grid, provenance="identity")


def multiplier(group, band: float, fn: Callable[[DualIndex], np.ndarray], name: str = "multiplier") -> Symbol:
    """Invariant symbol from a per-dual matrix (or scalar) function."""
    duals = group.enumerate_dual(band)
    blocks = []
    for xi in duals:
        b = np.asarray(fn(xi), dtype=complex)
        if b.ndim == 0:
            b = b * np.eye(xi.dim)
        blocks.append(b)
    return Symbol(group, band, duals, blocks, provenance=name)


def multiplier_power(group, s: float, band: float) -> Symbol:
    """sigma(xi) = <xi>^s I, the symbol of (I - Laplacian)^(s/2)."""
    return multiplier(group, band, lambda xi: xi.weight**s * np.eye(xi.dim), name=f"multiplier_power(s={s})")


def hirschman_wainger(rho: float, nu: float, band: float, group: Torus = None) -> Symbol:
    """The sharpness multiplier sigma(k) = exp(i <k>^(1-rho)) <k>^(-nu) on T^1.

    The phase uses the weight <k> rather than |k| to avoid the kink at k = 0;
    the two choices differ by a lower-order symbol.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    if nu < 0.0:
        raise ValueError("nu must be >= 0")
    group = Torus(1) if group is None else group
    if not isinstance(group, Torus) or group.n != 1:
        raise ValueError("the Hirschman-Wainger symbol is defined on t1")
    a = 1.0 - rho

    def fn(xi: DualIndex):
        w = xi.weight
        return np.exp(1j * w**a) * w ** (-nu)

    return multiplier(group, band, fn, name=f"hirschman_wainger(rho={rho},nu={nu})")


def schrodinger_phase(group, t: float, f: GridFunction, delta: float, band: float) -> Symbol:
    """Gridded symbol exp(i t f(x) <xi>^delta) I, the free evolution phase."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must lie in [0, 1]")
    fv = f.values
    if np.max(np.abs(fv.imag)) > 1e-12:
        raise ValueError("schrodinger phase requires a real-valued f")
    grid = f.grid
    duals = group.enumerate_dual(band)
    blocks = []
    for xi in duals:
        phase = np.exp(1j * t * fv.real * xi.weight**delta)
        blocks.append(phase[:, None, None] * np.eye(xi.dim)[None, :, :])
    return Symbol(
        group, band, duals, blocks, grid=grid, provenance=f"schrodinger(t={t},delta={delta})"
    )


def z_plus_c_inverse(c: complex, band: float) -> Symbol:
    """Inverse symbol of Z + c on SU(2): diag(1 / (i m + c)) in the weight basis.

    Exists iff i c is not a half-integer; a resonant c is rejected with the
    offending mode named.
    """
    c = complex(c)
    ic = 1j * c
    if abs(ic.imag) <= 1e-12:
        m2 = round(2.0 * ic.real)
        if abs(ic.real - m2 / 2.0) <= 1e-12:
            mode = f"{m2}/2" if m2 % 2 else str(m2 // 2)
            raise SingularSymbolError(
                f"resonant constant c={c}: i*c lies in (1/2)Z, the symbol is singular at m = {mode}"
            )
    group = SU2()

    def fn(xi: DualIndex):
        m = np.arange(-xi.label, xi.label + 1, 2) / 2.0
        return np.diag(1.0 / (1j * m + c))

    return multiplier(group, band, fn, name=f"z_plus_c_inverse(c={c})")


def vector_field_plus_c(group, j: int, c: complex, band: float) -> Symbol:
    """Invariant symbol of the first-order operator X_j + c."""
    return multiplier(
        group,
        band,
        lambda xi: group.vector_field_symbol(j, xi) + complex(c) * np.eye(xi.dim),
        name=f"field({j})+{c}",
    )


# ---------------------------------------------------------------------------
# symbol extraction


def extract_symbol(op: Callable[[GridFunction], GridFunction], grid, band: float) -> Symbol:
    """Symbol of a black-box operator: sigma(x, xi) = xi(x)^* (A xi)(x).

    A is applied to each matrix coefficient of each representation in the
    band (as a grid function); the resulting matrices are assembled pointwise.
    """
    group = grid.group
    grid.require_band(band)
    duals = group.enumerate_dual(band)
    blocks = []
    for xi in duals:
        table = _rep_table(grid, xi)
        applied = np.empty_like(table)
        for i in range(xi.dim):
            for j in range(xi.dim):
                applied[:, i, j] = op(GridFunction(grid, table[:, i, j])).values
        blocks.append(np.einsum("nba,nbc->nac", table.conj(), applied, optimize=True))
    return Symbol(group, band, duals, blocks, grid=grid, provenance="extracted")


def _rep_table(grid, xi: DualIndex) -> np.ndarray:
    from .groups import SU2Grid

    if isinstance(grid, SU2Grid):
        return grid.rep_table(xi)
    return grid.group.rep_table(xi, grid.nodes)


# ---------------------------------------------------------------------------
# builder registry (the CLI surface)

BUILDER_NAMES = (
    "identity",
    "multiplier_power",
    "hirschman_wainger",
    "hlhw",
    "schrodinger",
    "z_plus_c_inverse",
)


def build_symbol(name: str, group, band: float, grid=None, params: dict = None, seed: int = 0) -> Symbol:
    """Construct a builder symbol by name with keyword parameters.

    identity                 ()
    multiplier_power         (s)
    hirschman_wainger/hlhw   (rho, nu)           [t1 only]
    schrodinger              (t, delta, f=name)  [gridded; f defaults to 'cos']
    z_plus_c_inverse         (c)                 [su2 only]
    """
    from .named_functions import named_function

    params = dict(params or {})
    name = name.strip().lower()
    if name == "identity":
        return identity_symbol(group, band, grid=grid)
    if name == "multiplier_power":
        return multiplier_power(group, float(params.get("s", 0.0)), band)
    if name in ("hirschman_wainger", "hlhw"):
        return hirschman_wainger(
            float(params.get("rho", 0.5)), float(params.get("nu", 0.25)), band, group=group
        )
    if name == "schrodinger":
        if grid is None:
            grid = group.grid_for_band(band)
        fname = str(params.get("f", "cos"))
        f = named_function(fname, grid, band=band, seed=seed)
        f = GridFunction(grid, f.values.real)
        return schrodinger_phase(
            group, float(params.get("t", 1.0)), f, float(params.get("delta", 0.0)), band
        )
    if name == "z_plus_c_inverse":
        if not isinstance(group, SU2):
            raise ValueError("z_plus_c_inverse is an su2 builder")
        return z_plus_c_inverse(complex(params.get("c", 1.0)), band)
    raise ValueError(f"unknown symbol builder {name!r}; known: {', '.join(BUILDER_NAMES)}")
