"""Minimal-cost designs: reduced solves, the global verdict, and a brute-force grid oracle."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
from joblib import Parallel as _Jobs, delayed

from .bounds import ReducedProblem, SubcaseBound, lift, registry
from .evaluators import ConstraintParams, DomainError, _resistance, _response_force, evaluate
from .network import canonical_case

__all__ = [
    "GridSpec",
    "ReducedSolution",
    "SubcaseResult",
    "SolveReport",
    "BruteForceResult",
    "solve_reduced",
    "solve_all",
    "brute_force",
]

logger = logging.getLogger(__name__)

DEFAULT_LOWER = 1e-3
DEFAULT_UPPER = 3.0
# 2-D scans use at most this many points per axis
MAX_SCAN_POINTS = 1500
FEASIBILITY_TOL = 1e-9


@dataclass(frozen=True)
class GridSpec:
    lower: float = 0.02
    upper: float = 2.5
    step: float = 0.02

    def __post_init__(self):
        if not (self.lower > 0 and self.step > 0 and self.upper > self.lower):
            raise DomainError("grid needs 0 < lower < upper and step > 0")

    def points(self) -> np.ndarray:
        n = int(math.floor((self.upper - self.lower) / self.step + 1e-9)) + 1
        return self.lower + self.step * np.arange(n)


@dataclass(frozen=True)
class ReducedSolution:
    label: str
    x: Optional[tuple]
    cost: Optional[float]
    method: str
    active: tuple = ()
    warnings: tuple = ()

    @property
    def feasible(self) -> bool:
        return self.x is not None


def _bisect_feasible(problem, a, b):
    """Bisect the segment [a, b] (a infeasible, b feasible) down to rounding; return the feasible end."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    for _ in range(200):
        mid = (a + b) / 2
        if np.array_equal(mid, a) or np.array_equal(mid, b):
            break
        if problem.feasible(mid[None])[0]:
            b = mid
        else:
            a = mid
    return b


def _first_feasible_on_path(problem, start, end, n=2001):
    """Cheapest feasible point on the segment start -> end (cost increasing along it)."""
    t = np.linspace(0.0, 1.0, n)[:, None]
    pts = start + t * (end - start)
    ok = problem.feasible(pts)
    if not ok.any():
        return None
    i = int(np.argmax(ok))
    if i == 0:
        return pts[0]
    return _bisect_feasible(problem, pts[i - 1], pts[i])


def _active(problem, x, act_tol, lower, variables):
    b, p = problem.bound, problem.params
    x = np.asarray(x, float)
    active = []
    if abs(float(b.strength(x)) - p.f_min) <= act_tol:
        active.append("F>=f_min")
    if abs(float(b.F_tilde(x, p)) - p.fr_min) <= act_tol:
        active.append("FR>=fr_min")
    for name, xi in zip(variables, x):
        if xi - lower <= act_tol:
            active.append(f"{name}>={lower:g}")
    return tuple(active)


def _solve_1d(problem, tol, lower, upper, scan_step):
    b, p = problem.bound, problem.params
    h = scan_step or max(10 * tol, (upper - lower) / 1e6)
    xs = np.append(np.arange(lower, upper, h), upper)[:, None]
    ok = problem.feasible(xs)
    if not ok.any():
        return None, "scan", ("no feasible point in the search box",)
    i = int(np.argmax(ok))  # C_tilde increases with x, so the first feasible point is cheapest
    if i == 0:
        return xs[0], "scan", ()
    left, right = xs[i - 1], xs[i]
    threshold = np.array([p.f_min / b.strength_weights[0]])
    if left[0] < threshold[0] <= right[0] and problem.feasible(threshold[None])[0]:
        return threshold, "bisection", ()
    return _bisect_feasible(problem, left, right), "bisection", ()


def _strength_segment(bound, f_min, lower, upper):
    """End points of ``{strength(x) = f_min}`` inside the box, ordered by increasing cost."""
    w = np.asarray(bound.strength_weights, float)
    if w[1] == 0:
        x1 = f_min / w[0]
        if not lower <= x1 <= upper:
            return None
        a, b = np.array([x1, lower]), np.array([x1, upper])
    elif w[0] == 0:
        x2 = f_min / w[1]
        if not lower <= x2 <= upper:
            return None
        a, b = np.array([lower, x2]), np.array([upper, x2])
    else:
        lo1 = max(lower, (f_min - w[1] * upper) / w[0])
        hi1 = min(upper, (f_min - w[1] * lower) / w[0])
        if lo1 > hi1:
            return None
        a = np.array([lo1, (f_min - w[0] * lo1) / w[1]])
        b = np.array([hi1, (f_min - w[0] * hi1) / w[1]])
    if bound.C_tilde(b) < bound.C_tilde(a):
        a, b = b, a
    return a, b


def _zoom(problem, x0, h, tol, lower, upper):
    """Refine a scan optimum on successively finer local grids."""
    best = np.asarray(x0, float)
    best_cost = float(problem.objective(best))
    while h > tol:
        axes = [np.clip(np.linspace(xi - 2 * h, xi + 2 * h, 41), lower, upper) for xi in best]
        pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(best))
        ok = problem.feasible(pts)
        if ok.any():
            costs = problem.objective(pts[ok])
            j = int(np.argmin(costs))
            if costs[j] < best_cost:
                best, best_cost = pts[ok][j], float(costs[j])
        h /= 10
    return best


def _solve_2d(problem, tol, lower, upper, scan_step):
    b, p = problem.bound, problem.params
    warnings = []

    # geometric route: strength threshold active, bisection on the performance boundary
    x_boundary = None
    segment = _strength_segment(b, p.f_min, lower, upper)
    if segment is not None:
        x_boundary = _first_feasible_on_path(problem, *segment)
    if x_boundary is None:
        warnings.append("no feasible point with the strength threshold active; scan result used")

    # dense scan, authoritative when it disagrees; only points that could beat
    # the boundary solution need a feasibility check
    h = scan_step or max(10 * tol, (upper - lower) / (MAX_SCAN_POINTS - 1))
    axis = np.append(np.arange(lower, upper, h), upper)
    w = np.asarray(b.cost_weights, float)
    grid_cost = w[0] * axis[:, None] + w[1] * axis[None, :]
    if x_boundary is not None:
        i1, i2 = np.nonzero(grid_cost < float(problem.objective(x_boundary)) - 10 * tol)
    else:
        # a coarse pass over a subsample of the same axis bounds the fine optimum from above
        stride = max(1, len(axis) // 150)
        c1, c2 = np.meshgrid(axis[::stride], axis[::stride], indexing="ij")
        coarse = np.stack([c1.ravel(), c2.ravel()], axis=-1)
        coarse_ok = problem.feasible(coarse)
        if coarse_ok.any():
            i1, i2 = np.nonzero(grid_cost <= float(problem.objective(coarse[coarse_ok]).min()))
        else:
            i1, i2 = np.indices(grid_cost.shape).reshape(2, -1)
    pts = np.stack([axis[i1], axis[i2]], axis=-1)
    ok = problem.feasible(pts) if len(pts) else np.zeros(0, bool)
    if not ok.any():
        if x_boundary is not None:
            return x_boundary, "boundary", tuple(warnings)
        return None, "scan", ("no feasible point in the search box",)
    costs = problem.objective(pts[ok])
    x_scan = pts[ok][int(np.argmin(costs))]
    if x_boundary is not None:
        warnings.append(
            f"scan beats the strength-boundary solution by more than {10 * tol:g}; scan result used"
        )
    return _zoom(problem, x_scan, h, tol, lower, upper), "scan", tuple(warnings)


def solve_reduced(
    problem: ReducedProblem,
    tol: float = 1e-6,
    lower: float = DEFAULT_LOWER,
    upper: float = DEFAULT_UPPER,
    scan_step: Optional[float] = None,
) -> ReducedSolution:
    """Minimise the reduced cost over ``[lower, upper]^dim``.

    One-variable problems are scanned and the first feasible scan point is
    refined by bisection.  Two-variable problems are first solved along the
    line where the strength threshold is active (bisection on the performance
    boundary), then cross-checked against a dense scan; if the scan finds a
    point cheaper by more than ``10*tol`` the scan optimum is refined locally
    and reported instead, with a warning.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    if not 0 < lower < upper:
        raise DomainError("need 0 < lower < upper")
    b = problem.bound
    solve = _solve_1d if b.reduced_dim == 1 else _solve_2d
    x, method, warnings = solve(problem, tol, lower, upper, scan_step)
    if x is None:
        return ReducedSolution(b.label, None, None, method, (), warnings)
    x = np.asarray(x, float)
    active = _active(problem, x, max(10 * tol, 1e-9), lower, b.variables)
    return ReducedSolution(
        b.label, tuple(float(v) for v in x), float(b.C_tilde(x)), method, active, warnings
    )


@dataclass
class SubcaseResult:
    label: str
    status: str
    x: Optional[tuple]
    c: Optional[tuple]
    cost: Optional[float]
    active: tuple = ()
    method: str = ""
    warnings: tuple = ()


@dataclass
class SolveReport:
    params: ConstraintParams
    tol: float
    subcases: list
    best_label: Optional[str] = None
    best_c: Optional[tuple] = None
    best_cost: Optional[float] = None

    def result(self, label: str) -> SubcaseResult:
        for r in self.subcases:
            if r.label == label:
                return r
        raise KeyError(label)

    def to_text(self) -> str:
        def fmt(v):
            return "-" if v is None else "(" + ", ".join(f"{t:.6f}" for t in v) + ")"

        p = self.params
        lines = [
            f"alpha={p.alpha:g} beta={p.beta:g} f_min={p.f_min:g} fr_min={p.fr_min:g} tol={self.tol:g}",
            f"{'subcase':<8} {'status':<10} {'cost':>10}  {'x*':<24} {'c*':<42} active",
        ]
        for r in self.subcases:
            cost = "-" if r.cost is None else f"{r.cost:.6f}"
            lines.append(
                f"{r.label:<8} {r.status:<10} {cost:>10}  {fmt(r.x):<24} {fmt(r.c):<42} {','.join(r.active) or '-'}"
            )
            for w in r.warnings:
                lines.append(f"{'':<8} warning: {w}")
        if self.best_label is None:
            lines.append("BEST none (no feasible subcase)")
        else:
            lines.append(
                f"BEST case={self.best_label} cost={self.best_cost:.6f} c*={fmt(self.best_c)}"
            )
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        def fmt(v):
            return "" if v is None else ";".join(f"{t:.17g}" for t in v)

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["subcase", "status", "x*", "c*", "cost", "active_constraints"])
        for r in self.subcases:
            writer.writerow(
                [r.label, r.status, fmt(r.x), fmt(r.c), "" if r.cost is None else f"{r.cost:.17g}", ";".join(r.active)]
            )
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def solve_all(
    params: ConstraintParams = ConstraintParams(),
    tol: float = 1e-6,
    lower: float = DEFAULT_LOWER,
    upper: float = DEFAULT_UPPER,
    bounds: Optional[Sequence[SubcaseBound]] = None,
) -> SolveReport:
    """Solve every subcase, lift the reduced optima, and pick the cheapest design.

    Subcases whose cost ties the best within ``10*tol`` are all marked
    ``optimal``; the first of them in registry order is reported as the best.
    Feasible subcases above the best are ``dominated``.
    """
    bounds = registry() if bounds is None else list(bounds)
    results = []
    eligible = []
    for b in bounds:
        sol = solve_reduced(ReducedProblem(b, params), tol=tol, lower=lower, upper=upper)
        if not sol.feasible:
            results.append(SubcaseResult(b.label, "infeasible", None, None, None, (), sol.method, sol.warnings))
            continue
        warnings = list(sol.warnings)
        c = None
        try:
            c_arr = lift(b, sol.x)
            c = tuple(float(v) for v in c_arr)
            ev = evaluate(b.tree, c_arr, params, tol=FEASIBILITY_TOL)
            lifted_ok = ev.feasible and abs(ev.C - sol.cost) <= 1e-9 * max(1.0, sol.cost)
            if not lifted_ok:
                warnings.append("lifted design fails the full constraints; cost is only a lower bound")
        except DomainError as exc:
            lifted_ok = False
            warnings.append(f"lift failed: {exc}")
        results.append(SubcaseResult(b.label, "", sol.x, c, sol.cost, sol.active, sol.method, tuple(warnings)))
        if lifted_ok:
            eligible.append(len(results) - 1)

    report = SolveReport(params=params, tol=tol, subcases=results)
    best_cost = min((results[i].cost for i in eligible), default=None)
    for i, r in enumerate(results):
        if r.status:
            continue
        tied = i in eligible and r.cost <= best_cost + 10 * tol
        r.status = "optimal" if tied else "dominated"
        if tied and report.best_label is None:
            report.best_label, report.best_c, report.best_cost = r.label, r.c, r.cost
    return report


@dataclass
class BruteForceResult:
    case_id: int
    grid: GridSpec
    best_c: Optional[tuple]
    best_cost: Optional[float]
    feasible_count: int
    evaluated: int = field(default=0)


def _slab(tree, params, g, i):
    """Scan all points with c1 = g[i]; return (feasible count, best key or None)."""
    n = len(g)
    cols = [g[i], g[:, None, None], g[None, :, None], g[None, None, :]]
    force = _response_force(tree, cols)
    res = _resistance(tree, cols)
    ok = (force >= params.f_min) & (params.alpha * force + params.beta * res >= params.fr_min)
    ok = np.broadcast_to(ok, (n, n, n))
    count = int(ok.sum())
    if count == 0:
        return 0, None
    idx = np.arange(n)
    ksum = idx[:, None, None] + idx[None, :, None] + idx[None, None, :]
    ksum = np.where(ok, ksum, np.iinfo(np.int64).max)
    kmin = int(ksum.min())
    j, k, l = (int(v) for v in np.argwhere(ksum == kmin)[0])  # C order: lexicographic
    return count, (i + kmin, i, j, k, l)


def brute_force(
    case_id: int,
    params: ConstraintParams = ConstraintParams(),
    grid: GridSpec = GridSpec(),
    n_jobs: int = 1,
) -> BruteForceResult:
    """Exhaustively scan the full four-spring problem of ``case_id`` on a regular grid.

    Ties in cost go to the lexicographically smallest ``c``; costs are compared
    through integer grid indices so the choice is exact and independent of
    ``n_jobs``.
    """
    tree = canonical_case(case_id)
    g = grid.points()
    if n_jobs == 1:
        parts = [_slab(tree, params, g, i) for i in range(len(g))]
    else:
        parts = _Jobs(n_jobs=n_jobs)(delayed(_slab)(tree, params, g, i) for i in range(len(g)))
    count = sum(p[0] for p in parts)
    keys = [p[1] for p in parts if p[1] is not None]
    if not keys:
        return BruteForceResult(case_id, grid, None, None, 0, len(g) ** 4)
    _, *ijkl = min(keys)
    c = tuple(float(g[t]) for t in ijkl)
    return BruteForceResult(case_id, grid, c, float(sum(c)), count, len(g) ** 4)
