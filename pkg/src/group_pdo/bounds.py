"""Numerical verification lab for the quantitative operator bounds.

Hilbert-Schmidt identities, the L-infinity kernel bound, L2 multiplier
norms, lower bounds for Lp operator norms by dual power iteration, BMO
seminorms, the Fefferman-type interval and finite-regularity threshold
arithmetic, Weyl counts, and the Hirschman-Wainger sharpness experiment.

Lp norms are only ever *underestimated* (achieved quotients), so positive
boundedness statements manifest as plateaus of the lower-bound sequence and
sharpness as growth.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .fourier import FourierCoefficients, GridFunction, grid_lp_norm, inverse, sup_norm
from .groups import Torus
from .quantize import DenseOperator, apply, kernel, realize
from .symbols import Symbol, hirschman_wainger

GROWTH_SLOPE_TOL = 0.05


# ---------------------------------------------------------------------------
# norms with exact identities


def hs_norm_symbol(sigma: Symbol) -> float:
    """(integral over x of sum_xi d_xi ||sigma(x,xi)||_HS^2)^(1/2)."""
    total = 0.0
    for xi, b in zip(sigma.duals, sigma.blocks):
        sq = np.sum(np.abs(b) ** 2, axis=(-2, -1))
        if sigma.invariant:
            total += xi.dim * float(sq)
        else:
            total += xi.dim * float(sigma.grid.weights @ sq)
    return float(np.sqrt(total))


def hs_norm_kernel(sigma: Symbol, grid=None) -> float:
    """Double quadrature of |K|^2; equals hs_norm_symbol at finite band."""
    ktab = kernel(sigma, grid)
    w = ktab.grid.weights
    return float(np.sqrt(np.einsum("i,ij,j->", w, np.abs(ktab.values) ** 2, w)))


def linf_bound_constant(sigma: Symbol, grid=None) -> float:
    """max over x of the L1 norm of the kernel row F^-1 sigma(x,.)."""
    ktab = kernel(sigma, grid)
    return float(np.max(np.abs(ktab.values) @ ktab.grid.weights))


def l2_multiplier_norm(sigma: Symbol) -> float:
    """sup over the band of ||sigma(xi)||_op (invariant symbols only)."""
    if not sigma.invariant:
        raise ValueError("l2_multiplier_norm requires an invariant symbol")
    return max(sigma.sup_op_norm(xi) for xi in sigma.duals)


# ---------------------------------------------------------------------------
# Lp lower bounds by dual-exponent power iteration


@dataclass
class LpLowerBound:
    p: float
    value: float
    witness: np.ndarray
    history: list = field(default_factory=list)
    restarts: int = 0


def lp_lower_bound(
    op: DenseOperator,
    p: float,
    iterations: int = 30,
    seed: int = 0,
    random_starts: int = 5,
) -> LpLowerBound:
    """Lower bound for ||M||_{p->p} on the weighted grid Lp spaces.

    Runs the dual-exponent fixed-point iteration (x -> dual_{p'}(M* dual_p(M x)),
    with M* the adjoint for the weighted pairing) from a Dirichlet-kernel
    start plus `random_starts` seeded random starts, and reports the largest
    Rayleigh-type quotient encountered.  Every reported value is an achieved
    quotient, hence a certified lower bound.
    """
    if not (1.0 < p < np.inf):
        raise ValueError("p must be finite and > 1")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    m = op.matrix
    w = op.grid.weights
    q = p / (p - 1.0)
    rng = np.random.default_rng(seed)

    def norm(v, r):
        return float(np.sum(w * np.abs(v) ** r) ** (1.0 / r))

    def dual(v, r):
        a = np.abs(v)
        phase = np.where(a > 0, v / np.where(a > 0, a, 1.0), 0.0)
        return a ** (r - 1.0) * phase

    starts = [("dirichlet", _dirichlet_start(op))]
    for s in range(random_starts):
        starts.append(
            (f"random{s}", rng.normal(size=m.shape[1]) + 1j * rng.normal(size=m.shape[1]))
        )

    best = 0.0
    witness = starts[0][1]
    history = []
    restarts = 0
    for label, x in starts:
        nx = norm(x, p)
        if nx == 0.0:
            x = rng.normal(size=m.shape[1])
            nx = norm(x, p)
            restarts += 1
        x = x / nx
        prev = -1.0
        for it in range(iterations):
            y = m @ x
            quot = norm(y, p)
            history.append((label, it, quot))
            if quot > best:
                best = quot
                witness = x.copy()
            if quot == 0.0:
                x = rng.normal(size=m.shape[1]) + 1j * rng.normal(size=m.shape[1])
                x /= norm(x, p)
                restarts += 1
                warnings.warn("zero iterate in lp_lower_bound; restarted with a perturbed seed")
                continue
            # m^H v without materialising the conjugate transpose
            v = w * dual(y, p)
            z = np.conj(m.T @ np.conj(v)) / w
            x = dual(z, q)
            nx = norm(x, p)
            if nx == 0.0:
                break
            x = x / nx
            if abs(quot - prev) <= 1e-9 * max(quot, 1.0):
                break
            prev = quot
    return LpLowerBound(p=p, value=best, witness=witness, history=history, restarts=restarts)


def _dirichlet_start(op: DenseOperator) -> np.ndarray:
    group = op.grid.group
    duals = group.enumerate_dual(min(op.band, op.grid.exactness_band))
    coeffs = FourierCoefficients(
        group, op.band, duals, [np.eye(xi.dim, dtype=complex) for xi in duals]
    )
    return inverse(coeffs, op.grid).values


# ---------------------------------------------------------------------------
# BMO


@dataclass
class BmoReport:
    value: float
    radii: tuple
    centers: int
    skipped: int
    best_center: int
    best_radius: float


def bmo_seminorm(g: GridFunction, ball_radii) -> BmoReport:
    """max over (grid center, radius) of the mean oscillation on the ball.

    A lower bound for the BMO seminorm by construction; balls are taken in
    the geodesic distance, empty balls are skipped with a warning (cannot
    happen when centers are grid nodes).
    """
    grid = g.grid
    group = grid.group
    radii = tuple(float(r) for r in ball_radii)
    for r in radii:
        if not 0.0 < r <= group.diameter / 2.0 + 1e-12:
            raise ValueError(f"radius {r} outside (0, diameter/2]")
    vals = g.values
    w = grid.weights
    best = 0.0
    best_center = 0
    best_radius = radii[0]
    skipped = 0
    for c in range(grid.node_count):
        dist = group.distances(grid.nodes, grid.nodes[c])
        for r in radii:
            mask = dist <= r
            mu = float(np.sum(w[mask]))
            if mu <= 0.0:
                skipped += 1
                warnings.warn(f"ball (center {c}, radius {r}) captured no nodes; skipped")
                continue
            mean = complex(np.sum(w[mask] * vals[mask]) / mu)
            osc = float(np.sum(w[mask] * np.abs(vals[mask] - mean)) / mu)
            if osc > best:
                best, best_center, best_radius = osc, c, r
    return BmoReport(
        value=best,
        radii=radii,
        centers=grid.node_count,
        skipped=skipped,
        best_center=best_center,
        best_radius=best_radius,
    )


# ---------------------------------------------------------------------------
# interval / threshold arithmetic


@dataclass
class IntervalReport:
    n: int
    rho: float
    nu: float
    ratio: float
    half_width: float
    inv_p_minus: float  # 1/p_minus; inv_p_minus + inv_p_plus == 1 exactly
    inv_p_plus: float
    p_minus: float
    p_plus: float
    full_range: bool

    def one_line(self) -> str:
        hi = "inf" if not np.isfinite(self.p_plus) else f"{self.p_plus:.6g}"
        tag = " (full range 1<p<inf)" if self.full_range else ""
        return f"p in [{self.p_minus:.6g}, {hi}]{tag}"


def fefferman_interval(n: int, rho: float, nu: float) -> IntervalReport:
    """The Lp interval |1/p - 1/2| <= nu / (n (1 - rho)) around p = 2.

    Half-width capped at 1/2; nu >= n(1-rho)/2 is flagged as the full range
    1 < p < inf (the critical-order result applies).  The reported inverse
    exponents satisfy inv_p_minus + inv_p_plus = 1 exactly in floating point
    (the subtraction 1 - inv_p_minus is exact for arguments in [1/2, 1]).
    """
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    if nu < 0.0:
        raise ValueError("nu must be >= 0")
    if n < 1:
        raise ValueError("n must be >= 1")
    ratio = nu / (n * (1.0 - rho))
    half = min(ratio, 0.5)
    inv_minus = 0.5 + half
    inv_plus = 1.0 - inv_minus
    return IntervalReport(
        n=n,
        rho=rho,
        nu=nu,
        ratio=ratio,
        half_width=half,
        inv_p_minus=inv_minus,
        inv_p_plus=inv_plus,
        p_minus=1.0 / inv_minus,
        p_plus=np.inf if inv_plus == 0.0 else 1.0 / inv_plus,
        full_range=bool(nu >= n * (1.0 - rho) / 2.0 - 1e-15),
    )


@dataclass
class ThresholdReport:
    n: int
    p: float
    rho: float
    delta: float
    kappa: int
    ell: int
    int_part: int
    m0: float

    def one_line(self) -> str:
        return f"kappa={self.kappa} ell={self.ell} m0={self.m0:.6g}"


def finite_regularity_threshold(n: int, p: float, rho: float, delta: float) -> ThresholdReport:
    """kappa, ell and the order threshold m0 of the finite-regularity bound.

    kappa is the smallest even integer > n/2, ell the smallest integer > n/p,
    and m0 = kappa (1 - rho) |1/p - 1/2| + delta ([n/p] + 1).
    """
    if not 1.0 < p < np.inf:
        raise ValueError("p must lie in (1, inf)")
    if n < 1:
        raise ValueError("n must be >= 1")
    kappa = 2
    while kappa <= n / 2.0:
        kappa += 2
    ratio = n / p
    nearest = round(ratio)
    int_part = nearest if abs(ratio - nearest) < 1e-12 else int(np.floor(ratio))
    ell = int_part + 1
    m0 = kappa * (1.0 - rho) * abs(1.0 / p - 0.5) + delta * (int_part + 1)
    return ThresholdReport(
        n=n, p=p, rho=rho, delta=delta, kappa=kappa, ell=ell, int_part=int_part, m0=m0
    )


# ---------------------------------------------------------------------------
# Weyl counts and the dual series


@dataclass
class WeylReport:
    group: str
    alpha: float
    variant: str
    rows: list  # (lambda, sum, ratio to lambda^{(alpha+1) n})
    band_limit: float = None
    last_band_fraction: float = None


def weyl_count(group, lambdas, alpha: float, band_limit: float = None) -> WeylReport:
    """Exact dual sums sum d_xi^2 <xi>^(alpha n) over <xi> <= lambda.

    alpha > -1: cumulative variant, expected to scale like lambda^((alpha+1) n).
    alpha < -1: tail variant from lambda up to band_limit, with the fraction
    of the sum sitting in the last dyadic band reported as a truncation
    diagnostic.
    """
    lambdas = sorted(float(v) for v in lambdas)
    n = group.dim
    if alpha > -1.0:
        variant = "cumulative"
        top = lambdas[-1]
    elif alpha < -1.0:
        variant = "tail"
        if band_limit is None:
            raise ValueError("the tail variant (alpha < -1) requires band_limit")
        top = float(band_limit)
    else:
        raise ValueError("alpha = -1 separates the two variants; pick a side")
    duals = group.enumerate_dual(top)
    weights = np.array([xi.weight for xi in duals])
    terms = np.array([xi.dim**2 * xi.weight ** (alpha * n) for xi in duals])
    rows = []
    for lam in lambdas:
        if variant == "cumulative":
            s = float(terms[weights <= lam + 1e-9].sum())
        else:
            s = float(terms[(weights >= lam - 1e-9)].sum())
        rows.append((lam, s, s / lam ** ((alpha + 1.0) * n)))
    last_fraction = None
    if variant == "tail":
        total = float(terms[weights >= lambdas[0] - 1e-9].sum())
        last = float(terms[weights >= top / 2.0].sum())
        last_fraction = last / total if total > 0 else 0.0
    return WeylReport(
        group=group.name,
        alpha=alpha,
        variant=variant,
        rows=rows,
        band_limit=band_limit,
        last_band_fraction=last_fraction,
    )


@dataclass
class SeriesReport:
    group: str
    s: float
    rows: list  # (lambda, partial sum)
    last_band_fraction: float


def casimir_series(group, s: float, lambdas) -> SeriesReport:
    """Partial sums of sum d_xi^2 <xi>^(-s); converges iff s > dim G."""
    lambdas = sorted(float(v) for v in lambdas)
    duals = group.enumerate_dual(lambdas[-1])
    weights = np.array([xi.weight for xi in duals])
    terms = np.array([xi.dim**2 * xi.weight ** (-s) for xi in duals])
    rows = []
    for lam in lambdas:
        rows.append((lam, float(terms[weights <= lam + 1e-9].sum())))
    total = rows[-1][1]
    prev = rows[-2][1] if len(rows) > 1 else 0.0
    frac = (total - prev) / total if total > 0 else 0.0
    return SeriesReport(group=group.name, s=s, rows=rows, last_band_fraction=frac)


# ---------------------------------------------------------------------------
# sharpness experiment


@dataclass
class SharpnessSeries:
    rho: float
    nu0: float
    p: float
    lambdas: list
    bounds: list
    slope: float
    verdict: str
    expected_rate: float
    iterations: int
    seed: int


def sharpness_experiment(
    rho: float,
    nu0: float,
    p: float,
    lambdas,
    iterations: int = 30,
    seed: int = 0,
) -> SharpnessSeries:
    """Lower-bound growth of the truncated Hirschman-Wainger multiplier on T^1.

    For each native cutoff lambda the symbol is truncated to |k| <= lambda,
    realised densely on the matching grid, and probed with lp_lower_bound;
    the verdict compares the log-log slope over the last decade against the
    0.05 threshold.  The classical rate (1-rho)|1/2-1/p| - nu0 is attached
    as an order-of-magnitude expectation only.
    """
    return _sharpness_multi(rho, nu0, [p], lambdas, iterations, seed)[0]


def sharpness_experiment_multi(
    rho: float, nu0: float, ps, lambdas, iterations: int = 30, seed: int = 0
) -> list[SharpnessSeries]:
    """Sharpness series for several p sharing one realization per cutoff."""
    return _sharpness_multi(rho, nu0, list(ps), lambdas, iterations, seed)


def _sharpness_multi(rho, nu0, ps, lambdas, iterations, seed) -> list[SharpnessSeries]:
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    if not 0.0 <= nu0 < (1.0 - rho) / 2.0:
        raise ValueError("nu0 must satisfy 0 <= nu0 < (1 - rho)/2")
    group = Torus(1)
    lambdas = [int(v) for v in lambdas]
    if sorted(lambdas) != lambdas:
        raise ValueError("lambda list must be strictly increasing")
    bounds = {p: [] for p in ps}
    for lam in lambdas:
        grid = group.haar_grid(2 * lam + 2)
        sigma = hirschman_wainger(rho, nu0, band=group.band_of_native(lam))
        op = realize(sigma, grid)
        for p in ps:
            lb = lp_lower_bound(op, p, iterations=iterations, seed=seed)
            bounds[p].append(lb.value)
        del op
    out = []
    expected = {p: (1.0 - rho) * abs(0.5 - 1.0 / p) - nu0 for p in ps}
    for p in ps:
        slope = _last_decade_slope(lambdas, bounds[p])
        verdict = "growth" if slope > GROWTH_SLOPE_TOL else "plateau"
        out.append(
            SharpnessSeries(
                rho=rho,
                nu0=nu0,
                p=p,
                lambdas=list(lambdas),
                bounds=bounds[p],
                slope=slope,
                verdict=verdict,
                expected_rate=expected[p],
                iterations=iterations,
                seed=seed,
            )
        )
    return out


def _last_decade_slope(lambdas, values) -> float:
    lam = np.asarray(lambdas, dtype=float)
    val = np.asarray(values, dtype=float)
    mask = lam >= lam[-1] / 10.0
    if mask.sum() < 2 or np.any(val[mask] <= 0.0):
        return 0.0
    return float(np.polyfit(np.log(lam[mask]), np.log(val[mask]), 1)[0])


# ---------------------------------------------------------------------------
# bound audit


@dataclass
class AuditCheck:
    name: str
    value: float
    bound: float
    ok: bool
    note: str = ""


@dataclass
class AuditReport:
    checks: list

    @property
    def violations(self) -> int:
        return sum(1 for c in self.checks if not c.ok)


def bound_audit(sigma: Symbol, f_samples, grid=None) -> AuditReport:
    """Desk-check the kernel bounds on concrete samples.

    Verifies on each sample the L-infinity inequality against the kernel-L1
    constant, the Hilbert-Schmidt two-path identity, and (when the measured
    operator-norm decay exceeds dim/2) the dyadic Cauchy behaviour of the HS
    sum.
    """
    checks = []
    if grid is None:
        grid = sigma.grid if sigma.grid is not None else sigma.group.grid_for_band(sigma.band)
    const = linf_bound_constant(sigma, grid)
    for i, f in enumerate(f_samples):
        lhs = sup_norm(apply(sigma, f))
        rhs = (1.0 + 1e-8) * const * sup_norm(f) + 1e-300
        checks.append(
            AuditCheck(name=f"linf_bound[{i}]", value=lhs, bound=rhs, ok=bool(lhs <= rhs))
        )
    hs_s = hs_norm_symbol(sigma)
    hs_k = hs_norm_kernel(sigma, grid)
    rel = abs(hs_k - hs_s) / hs_s if hs_s > 0 else abs(hs_k - hs_s)
    checks.append(AuditCheck(name="hs_identity", value=rel, bound=1e-8, ok=bool(rel <= 1e-8)))

    weights = np.array([xi.weight for xi in sigma.duals])
    sups = np.array([sigma.sup_op_norm(xi) for xi in sigma.duals])
    sel = (weights >= 2.0) & (sups > 0.0)
    n = sigma.group.dim
    if sel.sum() >= 2:
        m_fit = -float(np.polyfit(np.log(weights[sel]), np.log(sups[sel]), 1)[0])
        checks.append(
            AuditCheck(
                name="decay_order_fit",
                value=m_fit,
                bound=n / 2.0,
                ok=True,
                note="measured decay order; informational",
            )
        )
        if m_fit > n / 2.0:
            hs_terms = np.array(
                [
                    xi.dim * float(np.max(np.sum(np.abs(b) ** 2, axis=(-2, -1))))
                    for xi, b in zip(sigma.duals, sigma.blocks)
                ]
            )
            edges = [2.0**j for j in range(1, int(np.log2(max(weights.max(), 2.0))) + 1)]
            incs = []
            lo = 0.0
            for hi in edges:
                band_mask = (weights > lo) & (weights <= hi)
                if band_mask.any():
                    incs.append((hi, float(hs_terms[band_mask].sum())))
                lo = hi
            if len(incs) >= 3:
                lam = np.log([v[0] for v in incs[-3:]])
                inc = np.log([max(v[1], 1e-300) for v in incs[-3:]])
                slope = float(np.polyfit(lam, inc, 1)[0])
                checks.append(
                    AuditCheck(
                        name="hs_dyadic_cauchy",
                        value=slope,
                        bound=0.0,
                        ok=bool(slope < 0.0),
                        note="log-log slope of dyadic HS increments; negative = Cauchy",
                    )
                )
    return AuditReport(checks=checks)
