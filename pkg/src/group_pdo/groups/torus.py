"""The n-torus backend.

Points are angle vectors ``x`` in ``[0, 2*pi)^n``; the characters are
``xi_k(x) = exp(i k . x)`` for ``k`` in ``Z^n``, and the normalised Haar
measure is ``dx / (2*pi)^n``.  Every representation is one-dimensional, so
rep matrices are 1x1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..errors import PrecisionError
from .dual import DualIndex

_TOL = 1e-9


@dataclass(frozen=True)
class Torus:
    n: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("torus dimension must be >= 1")

    @property
    def dim(self) -> int:
        return self.n

    @property
    def name(self) -> str:
        return f"t{self.n}"

    @property
    def diameter(self) -> float:
        return np.pi * np.sqrt(self.n)

    # -- dual ------------------------------------------------------------

    def dual_index(self, label) -> DualIndex:
        k = tuple(int(v) for v in np.atleast_1d(label))
        if len(k) != self.n:
            raise ValueError(f"label {k} does not index the dual of {self.name}")
        return DualIndex(label=k, dim=1, casimir=float(sum(v * v for v in k)))

    def enumerate_dual(self, band: float) -> tuple[DualIndex, ...]:
        """All k with <k> <= band, sorted by (weight, label)."""
        if band < 1:
            raise ValueError("band must be >= 1")
        r2 = band * band - 1.0 + _TOL
        kmax = int(np.floor(np.sqrt(max(r2, 0.0))))
        out = []
        for k in itertools.product(range(-kmax, kmax + 1), repeat=self.n):
            if sum(v * v for v in k) <= r2:
                out.append(self.dual_index(k))
        out.sort(key=DualIndex.sort_key)
        return tuple(out)

    def native_cut(self, band: float) -> float:
        """Radius of the |k| ball enumerated at the given weight band."""
        return float(np.floor(np.sqrt(max(band * band - 1.0 + _TOL, 0.0))))

    def band_of_native(self, radius: float) -> float:
        return float(np.sqrt(1.0 + radius * radius))

    # -- group operations --------------------------------------------------

    def identity(self) -> np.ndarray:
        return np.zeros(self.n)

    def multiply(self, x, y) -> np.ndarray:
        return np.mod(np.asarray(x) + np.asarray(y), 2 * np.pi)

    def inverse(self, x) -> np.ndarray:
        return np.mod(-np.asarray(x), 2 * np.pi)

    def distance(self, x, y) -> float:
        d = np.abs(np.mod(np.asarray(x) - np.asarray(y), 2 * np.pi))
        d = np.minimum(d, 2 * np.pi - d)
        return float(np.sqrt(np.sum(d * d)))

    def distances(self, points: np.ndarray, center) -> np.ndarray:
        d = np.abs(np.mod(points - np.asarray(center)[None, :], 2 * np.pi))
        d = np.minimum(d, 2 * np.pi - d)
        return np.sqrt(np.sum(d * d, axis=1))

    def random_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(0.0, 2 * np.pi, size=(count, self.n))

    # -- representations ---------------------------------------------------

    def rep_matrix(self, xi: DualIndex, x) -> np.ndarray:
        self._check_dual(xi)
        k = np.asarray(xi.label, dtype=float)
        return np.array([[np.exp(1j * float(k @ np.atleast_1d(x)))]])

    def rep_table(self, xi: DualIndex, points: np.ndarray) -> np.ndarray:
        """xi evaluated at many points, shape (N, 1, 1)."""
        self._check_dual(xi)
        k = np.asarray(xi.label, dtype=float)
        vals = np.exp(1j * (points @ k))
        return vals[:, None, None]

    def vector_field_symbol(self, j: int, xi: DualIndex) -> np.ndarray:
        """sigma of d/dx_j at k, the 1x1 matrix [i k_j]."""
        self._check_dual(xi)
        if not 0 <= j < self.n:
            raise ValueError(f"no basis field {j} on {self.name}")
        return np.array([[1j * xi.label[j]]])

    def exp_field(self, j: int, t: float) -> np.ndarray:
        x = np.zeros(self.n)
        x[j] = t
        return np.mod(x, 2 * np.pi)

    def _check_dual(self, xi: DualIndex):
        if not (isinstance(xi.label, tuple) and len(xi.label) == self.n):
            raise ValueError(f"dual index {xi.label!r} does not belong to {self.name}")

    # -- quadrature ----------------------------------------------------------

    def haar_grid(self, resolution: int) -> "TorusGrid":
        """Uniform product grid with `resolution` nodes per axis.

        Exact for products of two characters when both lie in the centred
        band |k_j| <= (resolution - 1) // 2.
        """
        if resolution < 1:
            raise ValueError("resolution must be >= 1")
        return TorusGrid(group=self, shape=(int(resolution),) * self.n)

    def grid_for_band(self, band: float, margin: int = 0) -> "TorusGrid":
        """Smallest uniform grid whose exactness band covers `band`.

        `margin` adds native frequency headroom for difference operators.
        """
        radius = int(np.ceil(self.native_cut(band))) + int(margin)
        return self.haar_grid(2 * radius + 2)


@dataclass
class TorusGrid:
    group: Torus
    shape: tuple[int, ...]
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        axes = [2 * np.pi * np.arange(m) / m for m in self.shape]
        mesh = np.meshgrid(*axes, indexing="ij")
        self.nodes = np.stack([a.ravel() for a in mesh], axis=1)
        size = int(np.prod(self.shape))
        self.weights = np.full(size, 1.0 / size)

    @property
    def node_count(self) -> int:
        return self.nodes.shape[0]

    @property
    def native_exact(self) -> int:
        """Largest per-axis frequency K with pairwise-exact quadrature."""
        return min((m - 1) // 2 for m in self.shape)

    @property
    def exactness_band(self) -> float:
        """Largest weight band whose dual ball is pairwise-exactly integrable."""
        k = self.native_exact
        return float(np.sqrt(1.0 + k * k))

    def require_band(self, band: float, what: str = "band"):
        if self.group.native_cut(band) > self.native_exact + _TOL:
            raise PrecisionError(
                f"{what} {band:.6g} (|k| <= {self.group.native_cut(band):g}) exceeds grid "
                f"exactness |k| <= {self.native_exact} (shape {self.shape}); refuse to alias"
            )

    def meta(self) -> dict:
        return {
            "group": self.group.name,
            "shape": list(self.shape),
            "nodes": self.node_count,
            "exactness_band": self.exactness_band,
        }
