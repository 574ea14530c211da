"""Reduced one- and two-variable bounds for the ten four-spring cases.

Each :class:`SubcaseBound` covers one plastic regime of a case: the region of
limit vectors ``c`` in which the same springs turn plastic first.  On that
region the response force is an explicit sum of a few limits, and the
resistance and cost are bounded in terms of one or two reduced variables
``x = project(c)``::

    FR(c) = alpha*F(c) + beta*R(c) <= alpha*strength(x) + beta*R_bound(x) = FR_tilde(x)
    C(c) >= cost_weights . x = C_tilde(x)

so a reduced point that cannot reach a cost still cannot after lifting back to
four springs.  Every bound is tight: ``lift(x)`` is a four-spring design in the
region with ``C(lift(x)) = C_tilde(x)`` and ``FR(lift(x)) = FR_tilde(x)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from joblib import Parallel as _Jobs, delayed

from .evaluators import ConstraintParams, DomainError, _columns, _resistance, _response_force
from .network import canonical_case

__all__ = [
    "SubcaseBound",
    "ReducedProblem",
    "DominanceReport",
    "CertificationReport",
    "registry",
    "lookup",
    "subcases_of",
    "lift",
    "check_dominance",
    "certify",
    "check_proposition2",
    "registry_table",
]

# relative slack for the dominance comparisons; the bounds are tight on region
# boundaries, where the two sides differ only by rounding
ROUNDING_RTOL = 1e-12
SAMPLE_CHUNK = 20_000


def _c(c, i):
    return c[..., i - 1]


@dataclass(frozen=True)
class SubcaseBound:
    label: str
    case_id: int
    table: int
    variables: tuple
    domain_text: str
    force_text: str
    resistance_text: str
    _domain: Callable = field(repr=False)
    _project: Callable = field(repr=False)
    _force: Callable = field(repr=False)
    _resistance_bound: Callable = field(repr=False)
    strength_weights: tuple = ()
    cost_weights: tuple = ()
    _lift: Optional[Callable] = field(default=None, repr=False)
    _reduced_constraint: Optional[Callable] = field(default=None, repr=False)
    reduced_constraint_text: str = ""
    mirror_of: Optional[str] = None

    @property
    def reduced_dim(self) -> int:
        return len(self.variables)

    @property
    def has_lift(self) -> bool:
        return self._lift is not None

    @property
    def tree(self):
        return canonical_case(self.case_id)

    @property
    def cost_text(self) -> str:
        return " + ".join(
            v if w == 1 else f"{w:g}*{v}" if len(v) <= 2 else f"{w:g}*({v})"
            for w, v in zip(self.cost_weights, self.variables)
        )

    # -- full-space maps ----------------------------------------------------

    def in_domain(self, c) -> np.ndarray:
        """Whether ``c`` (shape ``(..., 4)``) lies in this regime."""
        c = np.asarray(c, dtype=float)
        return np.all(c > 0, axis=-1) & self._domain(c)

    def project(self, c) -> np.ndarray:
        return np.asarray(self._project(np.asarray(c, dtype=float)), dtype=float)

    def force(self, c):
        """Exact response force inside the regime."""
        return self._force(np.asarray(c, dtype=float))

    # -- reduced-space maps -------------------------------------------------

    def _x(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            x = x[None]
        if x.shape[-1] != self.reduced_dim:
            raise DomainError(f"{self.label}: expected {self.reduced_dim} reduced variables")
        return x

    def strength(self, x):
        return self._x(x) @ np.asarray(self.strength_weights, dtype=float)

    def C_tilde(self, x):
        return self._x(x) @ np.asarray(self.cost_weights, dtype=float)

    def R_bound(self, x):
        return self._resistance_bound(self._x(x))

    def F_tilde(self, x, params: ConstraintParams = ConstraintParams()):
        """Upper bound of the multi-functional performance in reduced variables."""
        x = self._x(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return params.alpha * self.strength(x) + params.beta * self.R_bound(x)

    def in_reduced_domain(self, x) -> np.ndarray:
        x = self._x(x)
        ok = np.all(x > 0, axis=-1)
        if self._reduced_constraint is not None:
            ok &= self._reduced_constraint(x)
        return ok

    def lift(self, x) -> np.ndarray:
        return lift(self, x)


def lift(bound: SubcaseBound, x) -> np.ndarray:
    """Four-spring design attaining the bound at reduced point ``x``.

    Raises DomainError when ``x`` is outside the reduced domain (the lifted
    design would need a non-positive limit).
    """
    if not bound.has_lift:
        raise DomainError(f"subcase {bound.label} has no lifting map")
    x = bound._x(x)
    if not np.all(bound.in_reduced_domain(x)):
        raise DomainError(f"{np.asarray(x).tolist()} is outside the reduced domain of {bound.label}")
    c = np.stack(bound._lift(x), axis=-1)
    if np.any(c <= 0):
        raise DomainError(f"lift of {np.asarray(x).tolist()} has a non-positive limit")
    return c


@dataclass(frozen=True)
class ReducedProblem:
    """Minimise ``C_tilde`` subject to the strength and performance thresholds in reduced variables."""

    bound: SubcaseBound
    params: ConstraintParams = ConstraintParams()

    def feasible(self, x, tol: float = 0.0) -> np.ndarray:
        b, p = self.bound, self.params
        x = b._x(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (
                b.in_reduced_domain(x)
                & (b.strength(x) >= p.f_min - tol)
                & (b.F_tilde(x, p) >= p.fr_min - tol)
            )

    def objective(self, x):
        return self.bound.C_tilde(x)


def _sub(*idx):
    return lambda c: sum(_c(c, i) for i in idx)


def _stack(*fns):
    return lambda c: np.stack([f(c) for f in fns], axis=-1)


def _x1(x):
    return x[..., 0]


def _x2(x):
    return x[..., 1]


def _build():
    one = lambda c: np.ones(c.shape[:-1], dtype=bool)  # noqa: E731
    entries = [
        SubcaseBound(
            "9.1", 9, 2, ("c1", "c2"),
            domain_text="c2 <= c3, c1 <= c2 + c4, c2 < 2*c1",
            force_text="c1",
            resistance_text="1/c1 + 1/(c1 - c2/2)",
            _domain=lambda c: (_c(c, 2) <= _c(c, 3))
            & (_c(c, 1) <= _c(c, 2) + _c(c, 4))
            & (_c(c, 2) < 2 * _c(c, 1)),
            _project=_stack(_sub(1), _sub(2)),
            _force=_sub(1),
            _resistance_bound=lambda x: 1 / _x1(x) + 1 / (_x1(x) - _x2(x) / 2),
            strength_weights=(1, 0),
            cost_weights=(2, 1),
            _lift=lambda x: (_x1(x), _x2(x), _x2(x), _x1(x) - _x2(x)),
            _reduced_constraint=lambda x: _x2(x) < _x1(x),
            reduced_constraint_text="c2 < c1",
        ),
        SubcaseBound(
            "9.2", 9, 2, ("c2", "c4"),
            domain_text="c2 <= c3, c1 >= c2 + c4",
            force_text="c2 + c4",
            resistance_text="1/(c2 + c4) + 1/(c2/2 + c4)",
            _domain=lambda c: (_c(c, 2) <= _c(c, 3)) & (_c(c, 1) >= _c(c, 2) + _c(c, 4)),
            _project=_stack(_sub(2), _sub(4)),
            _force=_sub(2, 4),
            _resistance_bound=lambda x: 1 / (_x1(x) + _x2(x)) + 1 / (_x1(x) / 2 + _x2(x)),
            strength_weights=(1, 1),
            cost_weights=(3, 2),
            _lift=lambda x: (_x1(x) + _x2(x), _x1(x), _x1(x), _x2(x)),
        ),
        SubcaseBound(
            "1.1", 1, 3, ("c1",),
            domain_text="c1 <= c4, c1 <= c2 + c3",
            force_text="c1",
            resistance_text="3/c1",
            _domain=lambda c: (_c(c, 1) <= _c(c, 4)) & (_c(c, 1) <= _c(c, 2) + _c(c, 3)),
            _project=_stack(_sub(1)),
            _force=_sub(1),
            _resistance_bound=lambda x: 3 / _x1(x),
            strength_weights=(1,),
            cost_weights=(3,),
            _lift=lambda x: (_x1(x), _x1(x) / 2, _x1(x) / 2, _x1(x)),
        ),
        SubcaseBound(
            "1.2", 1, 3, ("c2+c3",),
            domain_text="c2 + c3 <= c1 <= c4",
            force_text="c2 + c3",
            resistance_text="3/(c2 + c3)",
            _domain=lambda c: (_c(c, 2) + _c(c, 3) <= _c(c, 1)) & (_c(c, 1) <= _c(c, 4)),
            _project=_stack(_sub(2, 3)),
            _force=_sub(2, 3),
            _resistance_bound=lambda x: 3 / _x1(x),
            strength_weights=(1,),
            cost_weights=(3,),
            _lift=lambda x: (_x1(x), _x1(x) / 2, _x1(x) / 2, _x1(x)),
            mirror_of="1.1",
        ),
        SubcaseBound(
            "2", 2, 4, ("c1",),
            domain_text="c1 <= c2, c1 <= c3, c1 <= c4",
            force_text="c1",
            resistance_text="4/c1",
            _domain=lambda c: (_c(c, 1) <= _c(c, 2)) & (_c(c, 1) <= _c(c, 3)) & (_c(c, 1) <= _c(c, 4)),
            _project=_stack(_sub(1)),
            _force=_sub(1),
            _resistance_bound=lambda x: 4 / _x1(x),
            strength_weights=(1,),
            cost_weights=(4,),
            _lift=lambda x: (_x1(x),) * 4,
        ),
        SubcaseBound(
            "3", 3, 5, ("c1+c3",),
            domain_text="c1 <= c2, c3 <= c4",
            force_text="c1 + c3",
            resistance_text="2/(c1 + c3)",
            _domain=lambda c: (_c(c, 1) <= _c(c, 2)) & (_c(c, 3) <= _c(c, 4)),
            _project=_stack(_sub(1, 3)),
            _force=_sub(1, 3),
            _resistance_bound=lambda x: 2 / _x1(x),
            strength_weights=(1,),
            cost_weights=(2,),
            _lift=lambda x: (_x1(x) / 2,) * 4,
        ),
        SubcaseBound(
            "4", 4, 6, ("c1", "c4"),
            domain_text="c1 <= c2, c1 <= c3",
            force_text="c1 + c4",
            resistance_text="1/(c1/3 + c4)",
            _domain=lambda c: (_c(c, 1) <= _c(c, 2)) & (_c(c, 1) <= _c(c, 3)),
            _project=_stack(_sub(1), _sub(4)),
            _force=_sub(1, 4),
            _resistance_bound=lambda x: 1 / (_x1(x) / 3 + _x2(x)),
            strength_weights=(1, 1),
            cost_weights=(3, 1),
            _lift=lambda x: (_x1(x), _x1(x), _x1(x), _x2(x)),
        ),
        SubcaseBound(
            "5", 5, 7, ("c1", "c3+c4"),
            domain_text="c1 <= c2",
            force_text="c1 + c3 + c4",
            resistance_text="1/(c1/2 + c3 + c4)",
            _domain=lambda c: _c(c, 1) <= _c(c, 2),
            _project=_stack(_sub(1), _sub(3, 4)),
            _force=_sub(1, 3, 4),
            _resistance_bound=lambda x: 1 / (_x1(x) / 2 + _x2(x)),
            strength_weights=(1, 1),
            cost_weights=(2, 1),
            _lift=lambda x: (_x1(x), _x1(x), _x2(x) / 2, _x2(x) / 2),
        ),
        SubcaseBound(
            "6.1", 6, 8, ("c1",),
            domain_text="c1 <= c2 + c3 + c4",
            force_text="c1",
            resistance_text="2/c1",
            _domain=lambda c: _c(c, 1) <= _c(c, 2) + _c(c, 3) + _c(c, 4),
            _project=_stack(_sub(1)),
            _force=_sub(1),
            _resistance_bound=lambda x: 2 / _x1(x),
            strength_weights=(1,),
            cost_weights=(2,),
            _lift=lambda x: (_x1(x), _x1(x) / 3, _x1(x) / 3, _x1(x) / 3),
        ),
        SubcaseBound(
            "6.2", 6, 8, ("c2+c3+c4",),
            domain_text="c1 >= c2 + c3 + c4",
            force_text="c2 + c3 + c4",
            resistance_text="2/(c2 + c3 + c4)",
            _domain=lambda c: _c(c, 1) >= _c(c, 2) + _c(c, 3) + _c(c, 4),
            _project=_stack(_sub(2, 3, 4)),
            _force=_sub(2, 3, 4),
            _resistance_bound=lambda x: 2 / _x1(x),
            strength_weights=(1,),
            cost_weights=(2,),
            _lift=lambda x: (_x1(x), _x1(x) / 3, _x1(x) / 3, _x1(x) / 3),
            mirror_of="6.1",
        ),
        SubcaseBound(
            "7.1", 7, 9, ("c1+c3",),
            domain_text="c1 + c3 <= c2 + c4",
            force_text="c1 + c3",
            resistance_text="2/(c1 + c3)",
            _domain=lambda c: _c(c, 1) + _c(c, 3) <= _c(c, 2) + _c(c, 4),
            _project=_stack(_sub(1, 3)),
            _force=_sub(1, 3),
            _resistance_bound=lambda x: 2 / _x1(x),
            strength_weights=(1,),
            cost_weights=(2,),
            _lift=lambda x: (_x1(x) / 2,) * 4,
        ),
        SubcaseBound(
            "7.2", 7, 9, ("c2+c4",),
            domain_text="c1 + c3 >= c2 + c4",
            force_text="c2 + c4",
            resistance_text="2/(c2 + c4)",
            _domain=lambda c: _c(c, 1) + _c(c, 3) >= _c(c, 2) + _c(c, 4),
            _project=_stack(_sub(2, 4)),
            _force=_sub(2, 4),
            _resistance_bound=lambda x: 2 / _x1(x),
            strength_weights=(1,),
            cost_weights=(2,),
            _lift=lambda x: (_x1(x) / 2,) * 4,
            mirror_of="7.1",
        ),
        SubcaseBound(
            "8", 8, 10, ("c1+c2+c3+c4",),
            domain_text="all c > 0",
            force_text="c1 + c2 + c3 + c4",
            resistance_text="1/(c1 + c2 + c3 + c4)",
            _domain=one,
            _project=_stack(_sub(1, 2, 3, 4)),
            _force=_sub(1, 2, 3, 4),
            _resistance_bound=lambda x: 1 / _x1(x),
            strength_weights=(1,),
            cost_weights=(1,),
            _lift=lambda x: (_x1(x) / 4,) * 4,
        ),
        SubcaseBound(
            "10.1", 10, 11, ("c1", "c4"),
            domain_text="c1 <= c2 + c3",
            force_text="c1 + c4",
            resistance_text="1/(c4 + c1/2)",
            _domain=lambda c: _c(c, 1) <= _c(c, 2) + _c(c, 3),
            _project=_stack(_sub(1), _sub(4)),
            _force=_sub(1, 4),
            _resistance_bound=lambda x: 1 / (_x2(x) + _x1(x) / 2),
            strength_weights=(1, 1),
            cost_weights=(2, 1),
            _lift=lambda x: (_x1(x), _x1(x) / 2, _x1(x) / 2, _x2(x)),
        ),
        SubcaseBound(
            "10.2", 10, 11, ("c2+c3", "c4"),
            domain_text="c1 >= c2 + c3",
            force_text="c2 + c3 + c4",
            resistance_text="1/(c4 + (c2 + c3)/2)",
            _domain=lambda c: _c(c, 1) >= _c(c, 2) + _c(c, 3),
            _project=_stack(_sub(2, 3), _sub(4)),
            _force=_sub(2, 3, 4),
            _resistance_bound=lambda x: 1 / (_x2(x) + _x1(x) / 2),
            strength_weights=(1, 1),
            cost_weights=(2, 1),
            _lift=lambda x: (_x1(x), _x1(x) / 2, _x1(x) / 2, _x2(x)),
            mirror_of="10.1",
        ),
    ]
    return tuple(entries)


_REGISTRY = _build()
_BY_LABEL = {b.label: b for b in _REGISTRY}


def registry() -> list:
    """All fifteen subcase bounds, Case 9 first."""
    return list(_REGISTRY)


def lookup(label: str) -> SubcaseBound:
    try:
        return _BY_LABEL[str(label)]
    except KeyError:
        raise KeyError(f"unknown subcase {label!r}; known: {', '.join(_BY_LABEL)}") from None


def subcases_of(case_id: int) -> list:
    return [b for b in _REGISTRY if b.case_id == case_id]


# -- dominance sampling -----------------------------------------------------


@dataclass
class DominanceReport:
    label: str
    samples: int
    in_domain: int
    violations: list
    min_slack_fr: float
    max_slack_fr: float
    min_slack_cost: float
    max_slack_cost: float

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def max_gap(self) -> float:
        return max(self.max_slack_fr, self.max_slack_cost)


def _chunk_seeds(seed: int, samples: int):
    n_chunks = max(1, math.ceil(samples / SAMPLE_CHUNK))
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    sizes = [SAMPLE_CHUNK] * (n_chunks - 1) + [samples - SAMPLE_CHUNK * (n_chunks - 1)]
    return list(zip(children, sizes))


def _dominance_chunk(bound, params, seed_seq, size, eps, box):
    rng = np.random.default_rng(seed_seq)
    c = rng.uniform(eps, box, size=(size, 4))
    c = c[bound.in_domain(c)]
    if len(c) == 0:
        return 0, [], (np.inf, -np.inf, np.inf, -np.inf)
    tree = bound.tree
    cols = _columns(c)
    fr = params.alpha * _response_force(tree, cols) + params.beta * _resistance(tree, cols)
    full_cost = c.sum(axis=-1)
    x = bound.project(c)
    fr_tilde = bound.F_tilde(x, params)
    c_tilde = bound.C_tilde(x)
    slack_fr = fr_tilde - fr
    slack_cost = full_cost - c_tilde
    bad_fr = slack_fr < -ROUNDING_RTOL * np.maximum(1.0, np.abs(fr))
    bad_cost = slack_cost < -ROUNDING_RTOL * np.maximum(1.0, full_cost)
    bad_fr |= ~np.isfinite(fr_tilde)
    violations = [
        (c[i].tolist(), "FR_tilde >= FR" if bad_fr[i] else "C_tilde <= C")
        for i in np.flatnonzero(bad_fr | bad_cost)
    ]
    stats = (
        float(np.nanmin(slack_fr)),
        float(np.nanmax(slack_fr)),
        float(slack_cost.min()),
        float(slack_cost.max()),
    )
    return len(c), violations, stats


def check_dominance(
    bound: SubcaseBound,
    samples: int = 100_000,
    seed: int = 0,
    box: float = 3.0,
    params: ConstraintParams = ConstraintParams(),
    eps: float = 1e-6,
    n_jobs: int = 1,
) -> DominanceReport:
    """Sample ``c`` uniformly in ``(eps, box]^4`` and test both bound inequalities inside the regime.

    Points outside the regime are discarded.  The sample stream is split into
    fixed-size chunks seeded from ``seed``, so the result does not depend on
    ``n_jobs``.
    """
    if samples < 1 or not box > eps:
        raise DomainError("need samples >= 1 and box > eps")
    jobs = _chunk_seeds(seed, samples)
    if n_jobs == 1:
        parts = [_dominance_chunk(bound, params, s, n, eps, box) for s, n in jobs]
    else:
        parts = _Jobs(n_jobs=n_jobs)(
            delayed(_dominance_chunk)(bound, params, s, n, eps, box) for s, n in jobs
        )
    in_domain = sum(p[0] for p in parts)
    violations = [v for p in parts for v in p[1]]
    stats = np.array([p[2] for p in parts])
    return DominanceReport(
        label=bound.label,
        samples=samples,
        in_domain=in_domain,
        violations=violations,
        min_slack_fr=float(stats[:, 0].min()),
        max_slack_fr=float(stats[:, 1].max()),
        min_slack_cost=float(stats[:, 2].min()),
        max_slack_cost=float(stats[:, 3].max()),
    )


# -- certification against a target cost ------------------------------------


@dataclass
class CertificationReport:
    label: str
    c_star: float
    samples: int
    counterexamples: int
    best_x: Optional[list]
    best_cost: Optional[float]

    @property
    def certified(self) -> bool:
        return self.counterexamples == 0


def _clip(poly, a, b):
    """Clip a convex polygon (list of 2-D points) to the half-plane ``a . x <= b``."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp, fq = a @ p - b, a @ q - b
        if fp <= 0:
            out.append(p)
        if fp * fq < 0:
            out.append(p + (q - p) * (fp / (fp - fq)))
    return out


def _sublevel_region(bound, params, c_star, eps, box):
    """Vertices of ``{x in [eps, box]^d : strength(x) >= f_min, C_tilde(x) <= c_star}``."""
    ws = np.asarray(bound.strength_weights, dtype=float)
    wc = np.asarray(bound.cost_weights, dtype=float)
    if bound.reduced_dim == 1:
        lo = max(eps, params.f_min / ws[0])
        hi = min(box, c_star / wc[0])
        return [np.array([lo]), np.array([hi])] if lo <= hi else []
    poly = [np.array(p, dtype=float) for p in ((eps, eps), (box, eps), (box, box), (eps, box))]
    poly = _clip(poly, -ws, -params.f_min)
    if poly:
        poly = _clip(poly, wc, c_star)
    return poly


def _sample_region(poly, size, rng):
    if len(poly) == 2:
        return rng.uniform(poly[0][0], poly[1][0], size=(size, 1))
    v0 = poly[0]
    tris = [(v0, poly[i], poly[i + 1]) for i in range(1, len(poly) - 1)]
    areas = np.array(
        [abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) / 2 for a, b, c in tris]
    )
    if areas.sum() == 0:
        return np.repeat(v0[None], size, axis=0)
    pick = rng.choice(len(tris), size=size, p=areas / areas.sum())
    r1, r2 = rng.random(size), rng.random(size)
    s = np.sqrt(r1)
    a = np.array([t[0] for t in tris])[pick]
    b = np.array([t[1] for t in tris])[pick]
    c = np.array([t[2] for t in tris])[pick]
    return (1 - s)[:, None] * a + (s * (1 - r2))[:, None] * b + (s * r2)[:, None] * c


def certify(
    bound: SubcaseBound,
    c_star: float,
    samples: int = 100_000,
    seed: int = 0,
    box: float = 3.0,
    params: ConstraintParams = ConstraintParams(),
    eps: float = 1e-6,
) -> CertificationReport:
    """Search for a reduced-feasible point with ``C_tilde <= c_star``.

    Samples are drawn uniformly from the part of the reduced box where both the
    strength threshold and ``C_tilde <= c_star`` hold, then tested against the
    performance threshold and the reduced domain.  No hit certifies (by
    sampling) that the regime cannot reach cost ``c_star``.
    """
    if samples < 1 or not box > eps:
        raise DomainError("need samples >= 1 and box > eps")
    poly = _sublevel_region(bound, params, c_star, eps, box)
    if not poly:
        return CertificationReport(bound.label, c_star, samples, 0, None, None)
    problem = ReducedProblem(bound, params)
    hits, best_x, best_cost = 0, None, None
    for seed_seq, size in _chunk_seeds(seed, samples):
        x = _sample_region(poly, size, np.random.default_rng(seed_seq))
        ok = problem.feasible(x) & (bound.C_tilde(x) <= c_star)
        if ok.any():
            hits += int(ok.sum())
            costs = bound.C_tilde(x[ok])
            i = int(np.argmin(costs))
            if best_cost is None or costs[i] < best_cost:
                best_x, best_cost = x[ok][i].tolist(), float(costs[i])
    return CertificationReport(bound.label, c_star, samples, hits, best_x, best_cost)


def check_proposition2(
    bound: SubcaseBound,
    c_star: float,
    samples: int = 100_000,
    seed: int = 0,
    box: float = 3.0,
    params: ConstraintParams = ConstraintParams(),
) -> bool:
    """True when no sampled reduced-feasible point reaches cost ``c_star``."""
    return certify(bound, c_star, samples, seed, box, params).certified


def registry_table(fmt: str = "text") -> str:
    """Render the registry as a text table or CSV, one row per subcase."""
    header = ["subcase", "case", "table", "variables", "domain", "F", "R_bound", "C_tilde", "reduced_constraint"]
    rows = [
        [
            b.label,
            str(b.case_id),
            str(b.table),
            ", ".join(b.variables),
            b.domain_text,
            b.force_text,
            b.resistance_text,
            b.cost_text,
            b.reduced_constraint_text,
        ]
        for b in _REGISTRY
    ]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *rows]]
    return "\n".join(lines) + "\n"
