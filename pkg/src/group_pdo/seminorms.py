"""Symbol-class seminorms and numerical class membership.

The seminorm of order l measures, for every composition Delta^alpha d^beta
with |alpha| + |beta| <= l over the admissible collection,

    sup over (x, <xi> <= Lambda) of ||Delta^alpha d^beta sigma|| / <xi>^(m - rho|alpha| + delta|beta|)

together with its sweep over a ladder of band windows.  A finite check can
only falsify or support membership: class_membership fits the log-log slope
of the partial sups and calls the symbol consistent when every entry is flat
(slope <= 0.05).

Compositions of a multiset alpha are evaluated in one canonical order (the
enumeration order of the admissible collection); difference operators given
by multiplication functions commute exactly, so this only pins down the
numerical path.  For delta >= rho the class itself may depend on the chosen
collection, which every report records.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .diffops import DifferenceOp, admissible_collection, difference, invariant_derivative
from .errors import BandExhaustedError
from .symbols import Symbol

SLOPE_TOL = 0.05


@dataclass(frozen=True)
class ClassParams:
    m: float
    rho: float
    delta: float
    l: int

    def __post_init__(self):
        if not (0.0 <= self.rho <= 1.0 and 0.0 <= self.delta <= 1.0):
            raise ValueError("rho and delta must lie in [0, 1]")
        if self.l < 0:
            raise ValueError("seminorm order l must be >= 0")


@dataclass
class SeminormEntry:
    alpha: tuple
    beta: tuple
    sup: float
    sweep: list  # (Lambda, partial sup over <xi> <= Lambda)


@dataclass
class SeminormReport:
    params: ClassParams
    windows: tuple
    entries: list
    collection: tuple
    collection_relative: bool
    note: str = ""

    @property
    def overall(self) -> float:
        return max((e.sup for e in self.entries), default=0.0)

    def entry(self, alpha, beta) -> SeminormEntry:
        for e in self.entries:
            if e.alpha == tuple(alpha) and e.beta == tuple(beta):
                return e
        raise KeyError((alpha, beta))


def _multi_indices(slots: int, max_total: int):
    for total in range(max_total + 1):
        for combo in itertools.combinations_with_replacement(range(slots), total):
            alpha = [0] * slots
            for c in combo:
                alpha[c] += 1
            yield tuple(alpha)


def seminorm(
    sigma: Symbol,
    params: ClassParams,
    windows=None,
    collection: list[DifferenceOp] = None,
    grid=None,
) -> SeminormReport:
    """Seminorm report of sigma for the given class parameters.

    windows is an increasing ladder of weight bands for the partial sups;
    it defaults to the largest band still trusted after l difference
    applications.  Each first-order difference consumes its native band, so
    sigma must carry enough margin for the deepest composition.
    """
    group = sigma.group
    ops = admissible_collection(group) if collection is None else list(collection)
    deepest_native = sigma.native_band - params.l * max((q.native_band for q in ops), default=0)
    if deepest_native < 0:
        raise BandExhaustedError(
            f"symbol band (native {sigma.native_band}) cannot support {params.l} differences"
        )
    deepest_band = group.band_of_native(deepest_native)
    if windows is None:
        windows = (deepest_band,)
    windows = tuple(sorted(float(v) for v in windows))
    if windows[-1] > deepest_band + 1e-9:
        raise BandExhaustedError(
            f"window {windows[-1]:.6g} exceeds the band trusted after {params.l} "
            f"differences ({deepest_band:.6g})"
        )
    if grid is None and sigma.grid is None and not _all_shift_exact(group, ops):
        grid = group.grid_for_band(sigma.band)

    entries = []
    for beta in _multi_indices(group.dim, params.l):
        nb = sum(beta)
        if nb > params.l:
            continue
        if sigma.invariant and nb > 0:
            for alpha in _multi_indices(len(ops), params.l - nb):
                entries.append(
                    SeminormEntry(alpha, beta, 0.0, [(lam, 0.0) for lam in windows])
                )
            continue
        tau_beta = invariant_derivative(beta, sigma) if nb > 0 else sigma
        cache = {(0,) * len(ops): tau_beta}
        for alpha in _multi_indices(len(ops), params.l - nb):
            if sum(alpha) > 0:
                i = next(idx for idx, a in enumerate(alpha) if a > 0)
                parent = list(alpha)
                parent[i] -= 1
                tau = difference(ops[i], cache[tuple(parent)], grid=grid)
                cache[alpha] = tau
            else:
                tau = cache[alpha]
            entries.append(_measure(tau, alpha, beta, params, windows))
    ops_names = tuple(q.name for q in ops)
    relative = params.delta >= params.rho
    note = (
        "collection-relative: delta >= rho, membership may depend on the "
        "difference collection" if relative else ""
    )
    return SeminormReport(
        params=params,
        windows=windows,
        entries=entries,
        collection=ops_names,
        collection_relative=relative,
        note=note,
    )


def _all_shift_exact(group, ops) -> bool:
    return all(q.shift is not None for q in ops)


def _measure(tau: Symbol, alpha, beta, params: ClassParams, windows) -> SeminormEntry:
    expo = params.m - params.rho * sum(alpha) + params.delta * sum(beta)
    weights = np.array([xi.weight for xi in tau.duals])
    ratios = np.array([tau.sup_op_norm(xi) for xi in tau.duals]) / weights**expo
    order = np.argsort(weights, kind="stable")
    cummax = np.maximum.accumulate(ratios[order])
    sorted_w = weights[order]
    sweep = []
    for lam in windows:
        idx = np.searchsorted(sorted_w, lam + 1e-9, side="right") - 1
        sweep.append((lam, float(cummax[idx]) if idx >= 0 else 0.0))
    return SeminormEntry(tuple(alpha), tuple(beta), sweep[-1][1], sweep)


@dataclass
class MembershipVerdict:
    consistent: bool
    slopes: list  # (alpha, beta, slope)
    worst_entry: tuple
    worst_slope: float
    report: SeminormReport = field(repr=False, default=None)

    def one_line(self) -> str:
        if self.consistent:
            return f"consistent (worst slope {self.worst_slope:+.4f})"
        a, b = self.worst_entry
        return f"growth-detected at alpha={a} beta={b} (slope {self.worst_slope:+.4f})"


def class_membership(
    sigma: Symbol,
    m: float,
    rho: float,
    delta: float,
    l: int,
    windows,
    slope_tol: float = SLOPE_TOL,
    collection=None,
    grid=None,
) -> MembershipVerdict:
    """Fit log(partial sup) against log(window) per entry; flat means consistent."""
    if len(windows) < 2:
        raise ValueError("class_membership needs at least two band windows")
    report = seminorm(
        sigma, ClassParams(m=m, rho=rho, delta=delta, l=l), windows, collection=collection, grid=grid
    )
    slopes = []
    worst = ((), ())
    worst_slope = -np.inf
    floor = max(1e-12 * report.overall, 1e-250)
    for e in report.entries:
        lam = np.array([v[0] for v in e.sweep])
        sup = np.array([v[1] for v in e.sweep])
        good = sup > floor
        if good.sum() < 2:
            slope = 0.0
        else:
            slope = float(np.polyfit(np.log(lam[good]), np.log(sup[good]), 1)[0])
        slopes.append((e.alpha, e.beta, slope))
        if slope > worst_slope:
            worst_slope = slope
            worst = (e.alpha, e.beta)
    return MembershipVerdict(
        consistent=bool(worst_slope <= slope_tol),
        slopes=slopes,
        worst_entry=worst,
        worst_slope=worst_slope,
        report=report,
    )
