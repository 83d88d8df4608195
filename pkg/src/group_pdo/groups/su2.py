"""The SU(2) backend.

Points are unit quaternions ``q = (q0, q1, q2, q3)``; the defining 2x2
matrix is ``q0*I - i*(q1*s1 + q2*s2 + q3*s3)`` with Pauli matrices ``s_k``.
Representations are labelled by the doubled spin ``j2 = 2*l`` and realised
as Wigner D-matrices in z-y-z Euler angles ``phi in [0, 2*pi)``,
``theta in [0, pi]``, ``psi in [0, 4*pi)`` with Haar density
``sin(theta) / (16*pi^2)``:

    D^l_{m'm}(phi, theta, psi) = exp(-i m' phi) d^l_{m'm}(theta) exp(-i m psi)

in the ascending weight basis ``m = -l..l``.  The basis vector fields
``X, Y, Z`` are normalised so that the Casimir ``X^2 + Y^2 + Z^2`` acts as
``-l(l+1)`` and ``Z`` has symbol ``diag(i m)``; concretely
``exp(t X_k) = (cos(t/2), -sin(t/2) e_k)`` as a quaternion.  The geodesic
distance is the 3-sphere one for this normalisation,
``d(x, y) = 2*arccos(<x, y>)``, so ``d(e, -e) = 2*pi`` (antipodes are not
identified).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import PrecisionError
from .dual import DualIndex
from .wigner import angular_momentum_matrices, wigner_d_matrix, wigner_d_tables

_TOL = 1e-9


def quat_multiply(q, p) -> np.ndarray:
    q0, q1, q2, q3 = q
    p0, p1, p2, p3 = p
    return np.array(
        [
            q0 * p0 - q1 * p1 - q2 * p2 - q3 * p3,
            q0 * p1 + p0 * q1 + q2 * p3 - q3 * p2,
            q0 * p2 + p0 * q2 + q3 * p1 - q1 * p3,
            q0 * p3 + p0 * q3 + q1 * p2 - q2 * p1,
        ]
    )


def quat_inverse(q) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def euler_to_quat(phi: float, theta: float, psi: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array(
        [
            c * np.cos((phi + psi) / 2.0),
            -s * np.sin((phi - psi) / 2.0),
            s * np.cos((phi - psi) / 2.0),
            c * np.sin((phi + psi) / 2.0),
        ]
    )


def quat_to_euler(q) -> tuple[float, float, float]:
    """z-y-z Euler angles of a unit quaternion, phi in [0,2pi), psi in [0,4pi).

    The pair (phi+psi, phi-psi) is only determined modulo 4pi by the two
    complex entries of the 2x2 matrix; the remaining two-fold ambiguity is a
    global sign and is resolved by comparing against the input quaternion.
    """
    q0, q1, q2, q3 = (float(v) for v in q)
    c = np.hypot(q0, q3)
    s = np.hypot(q1, q2)
    theta = 2.0 * np.arctan2(s, c)
    half_sum = np.arctan2(q3, q0) if c > 1e-15 else 0.0
    half_diff = np.arctan2(-q1, q2) if s > 1e-15 else 0.0
    phi = np.mod(half_sum + half_diff, 2 * np.pi)
    psi = np.mod(half_sum - half_diff, 4 * np.pi)
    rebuilt = euler_to_quat(phi, theta, psi)
    if rebuilt @ np.array([q0, q1, q2, q3]) < 0.0:
        psi = np.mod(psi + 2 * np.pi, 4 * np.pi)
    return float(phi), float(theta), float(psi)


@dataclass(frozen=True)
class SU2:
    @property
    def dim(self) -> int:
        return 3

    @property
    def name(self) -> str:
        return "su2"

    @property
    def diameter(self) -> float:
        return 2 * np.pi

    # -- dual ------------------------------------------------------------

    def dual_index(self, label) -> DualIndex:
        j2 = int(label)
        if j2 < 0:
            raise ValueError("doubled spin must be >= 0")
        return DualIndex(label=j2, dim=j2 + 1, casimir=j2 * (j2 + 2) / 4.0)

    def enumerate_dual(self, band: float) -> tuple[DualIndex, ...]:
        """All doubled spins j2 with <j2> <= band, in increasing order."""
        if band < 1:
            raise ValueError("band must be >= 1")
        out = []
        j2 = 0
        while True:
            xi = self.dual_index(j2)
            if xi.weight > band + _TOL:
                break
            out.append(xi)
            j2 += 1
        return tuple(out)

    def native_cut(self, band: float) -> int:
        """Largest doubled spin enumerated at the given weight band."""
        duals = self.enumerate_dual(band)
        return duals[-1].label

    def band_of_native(self, j2: float) -> float:
        if j2 < 0:
            raise ValueError("band exhausted below the trivial representation")
        return float(np.sqrt(1.0 + j2 * (j2 + 2) / 4.0))

    # -- group operations --------------------------------------------------

    def identity(self) -> np.ndarray:
        return np.array([1.0, 0.0, 0.0, 0.0])

    def multiply(self, x, y) -> np.ndarray:
        return quat_multiply(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    def inverse(self, x) -> np.ndarray:
        return quat_inverse(np.asarray(x, dtype=float))

    def distance(self, x, y) -> float:
        # 2*arccos(<x, y>) in the cancellation-free half-angle form
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return 4.0 * float(np.arctan2(np.linalg.norm(x - y), np.linalg.norm(x + y)))

    def distances(self, points: np.ndarray, center) -> np.ndarray:
        center = np.asarray(center, dtype=float)
        lo = np.linalg.norm(points - center[None, :], axis=1)
        hi = np.linalg.norm(points + center[None, :], axis=1)
        return 4.0 * np.arctan2(lo, hi)

    def random_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        v = rng.normal(size=(count, 4))
        return v / np.linalg.norm(v, axis=1, keepdims=True)

    # -- representations ---------------------------------------------------

    def rep_matrix(self, xi: DualIndex, x) -> np.ndarray:
        self._check_dual(xi)
        j2 = xi.label
        phi, theta, psi = quat_to_euler(x)
        m2 = np.arange(-j2, j2 + 1, 2)
        d = wigner_d_matrix(j2, theta)
        return (
            np.exp(-0.5j * m2 * phi)[:, None] * d * np.exp(-0.5j * m2 * psi)[None, :]
        )

    def rep_table(self, xi: DualIndex, points: np.ndarray) -> np.ndarray:
        self._check_dual(xi)
        return np.stack([self.rep_matrix(xi, q) for q in points])

    def vector_field_symbol(self, j: int, xi: DualIndex) -> np.ndarray:
        """sigma_X(xi) = i J_x etc.; skew-Hermitian, Z diagonal diag(i m)."""
        self._check_dual(xi)
        if not 0 <= j < 3:
            raise ValueError("SU(2) has basis fields 0 (X), 1 (Y), 2 (Z)")
        return 1j * angular_momentum_matrices(xi.label)[j]

    def exp_field(self, j: int, t: float) -> np.ndarray:
        q = np.array([np.cos(t / 2.0), 0.0, 0.0, 0.0])
        q[1 + j] = -np.sin(t / 2.0)
        return q

    def _check_dual(self, xi: DualIndex):
        if not isinstance(xi.label, int):
            raise ValueError(f"dual index {xi.label!r} does not belong to su2")

    # -- quadrature ----------------------------------------------------------

    def haar_grid(self, resolution: int) -> "SU2Grid":
        """Product grid exact for pairs of coefficients with j2 <= resolution.

        resolution is the doubled spin the grid must handle: uniform angles in
        phi (resolution + 1 points) and psi (2*resolution + 2 points), and
        Gauss-Legendre nodes in cos(theta).
        """
        if resolution < 1:
            raise ValueError("resolution must be >= 1")
        return SU2Grid(group=self, j2max_exact=int(resolution))

    def grid_for_band(self, band: float, margin: int = 0) -> "SU2Grid":
        """Smallest product grid with exactness band >= band.

        `margin` adds doubled-spin headroom for difference operators.
        """
        return self.haar_grid(self.native_cut(band) + int(margin))


@dataclass
class SU2Grid:
    group: SU2
    j2max_exact: int
    phi: np.ndarray = field(init=False, repr=False)
    psi: np.ndarray = field(init=False, repr=False)
    cos_theta: np.ndarray = field(init=False, repr=False)
    gl_weights: np.ndarray = field(init=False, repr=False)
    euler: np.ndarray = field(init=False, repr=False)
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        j2 = self.j2max_exact
        p = j2 + 1
        q = 2 * j2 + 2
        t = j2 // 2 + 1
        self.phi = 2 * np.pi * np.arange(p) / p
        self.psi = 4 * np.pi * np.arange(q) / q
        self.cos_theta, self.gl_weights = np.polynomial.legendre.leggauss(t)
        theta = np.arccos(self.cos_theta)
        mesh = np.meshgrid(self.phi, theta, self.psi, indexing="ij")
        self.euler = np.stack([a.ravel() for a in mesh], axis=1)
        self.nodes = np.stack(
            [euler_to_quat(*row) for row in self.euler]
        )
        w = np.ones((p, 1, 1)) * (self.gl_weights / (2.0 * p * q))[None, :, None]
        self.weights = np.broadcast_to(w, (p, t, q)).ravel().copy()
        self._cache: dict = {}

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.phi.size, self.cos_theta.size, self.psi.size)

    @property
    def node_count(self) -> int:
        return self.nodes.shape[0]

    @property
    def native_exact(self) -> int:
        return self.j2max_exact

    @property
    def exactness_band(self) -> float:
        return self.group.band_of_native(self.j2max_exact)

    def require_band(self, band: float, what: str = "band"):
        if self.group.native_cut(band) > self.j2max_exact:
            raise PrecisionError(
                f"{what} {band:.6g} (j2 <= {self.group.native_cut(band)}) exceeds grid "
                f"exactness j2 <= {self.j2max_exact}; refuse to alias"
            )

    # Cached tables for the separated (phi, theta, psi) transforms.

    def phase_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """(E_phi, E_psi) with E_phi[m2, j] = exp(i m2 phi_j / 2), m2 in [-j2max, j2max]."""
        if "phase" not in self._cache:
            m2 = np.arange(-self.j2max_exact, self.j2max_exact + 1)
            ephi = np.exp(0.5j * np.outer(m2, self.phi))
            epsi = np.exp(0.5j * np.outer(m2, self.psi))
            self._cache["phase"] = (ephi, epsi)
        return self._cache["phase"]

    def m2_slot(self, m2: np.ndarray) -> np.ndarray:
        return m2 + self.j2max_exact

    def d_tables(self) -> list[np.ndarray]:
        """Wigner-d tables at the theta nodes for j2 = 0..j2max_exact."""
        if "dtab" not in self._cache:
            theta = np.arccos(self.cos_theta)
            self._cache["dtab"] = wigner_d_tables(self.j2max_exact, theta)
        return self._cache["dtab"]

    def rep_table(self, xi: DualIndex) -> np.ndarray:
        """D^xi at every node, shape (N, d, d), assembled separably and cached."""
        key = ("rep", xi.label)
        if key not in self._cache:
            j2 = xi.label
            if j2 > self.j2max_exact:
                raise PrecisionError(
                    f"representation j2={j2} exceeds grid tables (j2max {self.j2max_exact})"
                )
            ephi, epsi = self.phase_tables()
            m2 = np.arange(-j2, j2 + 1, 2)
            slots = self.m2_slot(m2)
            dt = self.d_tables()[j2]  # (t, d, d)
            table = np.einsum(
                "aj,tab,bk->jtkab", ephi[slots].conj(), dt, epsi[slots].conj()
            ).reshape(self.node_count, j2 + 1, j2 + 1)
            if self.node_count * (j2 + 1) ** 2 <= 40_000_000:
                self._cache[key] = table
            else:
                return table
        return self._cache[key]

    def meta(self) -> dict:
        return {
            "group": "su2",
            "shape": list(self.shape),
            "nodes": self.node_count,
            "exactness_band": self.exactness_band,
        }
