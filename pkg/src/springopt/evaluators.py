"""Strength, resistance and cost of a spring network.

Each spring ``i`` has an elastic limit ``c_i > 0`` and an electrical
resistance ``1/c_i``.  The response force of the network is the largest total
stress it develops under displacement-controlled stretching; it reduces to
``min`` over series members and ``sum`` over parallel members.

All evaluators accept ``c`` with shape ``(m,)`` or ``(..., m)`` and broadcast
over the leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .network import Leaf, Parallel, Series, SPTree, spring_count

__all__ = [
    "DomainError",
    "ConstraintParams",
    "Evaluation",
    "as_limits",
    "resistance",
    "response_force",
    "performance",
    "cost",
    "evaluate",
]


class DomainError(ValueError):
    """Input outside the domain of an evaluator (e.g. a non-positive limit)."""


@dataclass(frozen=True)
class ConstraintParams:
    """Weights of the multi-functional performance ``FR = alpha*F + beta*R`` and the two thresholds."""

    alpha: float = 0.2
    beta: float = 0.1
    f_min: float = 0.75
    fr_min: float = 0.5

    def __post_init__(self):
        if not self.alpha > 0 or not self.beta > 0:
            raise DomainError("alpha and beta must be positive")
        if not self.f_min >= 0 or not self.fr_min >= 0:
            raise DomainError("f_min and fr_min must be non-negative")


@dataclass(frozen=True)
class Evaluation:
    F: float
    R: float
    FR: float
    C: float
    feasible_F: bool
    feasible_FR: bool

    @property
    def feasible(self) -> bool:
        return self.feasible_F and self.feasible_FR


def as_limits(tree: SPTree, c) -> np.ndarray:
    """Validate ``c`` against ``tree`` and return it as a float array."""
    arr = np.asarray(c, dtype=float)
    m = spring_count(tree)
    if arr.ndim == 0 or arr.shape[-1] != m:
        raise DomainError(f"expected {m} elastic limits, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("elastic limits must be finite and strictly positive")
    return arr


def _columns(arr: np.ndarray) -> list:
    return [arr[..., i] for i in range(arr.shape[-1])]


def _resistance(tree: SPTree, cols: Sequence):
    if isinstance(tree, Leaf):
        return 1.0 / cols[tree.index - 1]
    parts = [_resistance(child, cols) for child in tree.children]
    if isinstance(tree, Series):
        return sum(parts[1:], parts[0])
    return 1.0 / sum((1.0 / r for r in parts[1:]), 1.0 / parts[0])


def _response_force(tree: SPTree, cols: Sequence):
    if isinstance(tree, Leaf):
        return cols[tree.index - 1]
    parts = [_response_force(child, cols) for child in tree.children]
    if isinstance(tree, Parallel):
        return sum(parts[1:], parts[0])
    out = parts[0]
    for part in parts[1:]:
        out = np.minimum(out, part)
    return out


def _scalar(value):
    return float(value) if np.ndim(value) == 0 else value


def resistance(tree: SPTree, c):
    """Equivalent resistance with spring resistances ``1/c_i``."""
    return _scalar(_resistance(tree, _columns(as_limits(tree, c))))


def response_force(tree: SPTree, c):
    """Maximal force the network can carry: min over series, sum over parallel."""
    return _scalar(_response_force(tree, _columns(as_limits(tree, c))))


def cost(c):
    """Fabrication cost, the sum of the elastic limits."""
    return _scalar(np.sum(np.asarray(c, dtype=float), axis=-1))


def performance(tree: SPTree, c, params: ConstraintParams = ConstraintParams()):
    """Multi-functional performance ``alpha*F + beta*R``."""
    cols = _columns(as_limits(tree, c))
    return _scalar(params.alpha * _response_force(tree, cols) + params.beta * _resistance(tree, cols))


def evaluate(
    tree: SPTree, c, params: ConstraintParams = ConstraintParams(), tol: float = 1e-9
) -> Evaluation:
    """Evaluate a single design ``c`` (shape ``(m,)``).

    Constraints count as satisfied when violated by at most ``tol``, so designs
    sitting on a constraint boundary survive floating-point rounding.
    """
    arr = as_limits(tree, c)
    if arr.ndim != 1:
        raise DomainError("evaluate takes a single limit vector; use the array evaluators for batches")
    cols = _columns(arr)
    force = float(_response_force(tree, cols))
    res = float(_resistance(tree, cols))
    fr = params.alpha * force + params.beta * res
    return Evaluation(
        F=force,
        R=res,
        FR=fr,
        C=float(arr.sum()),
        feasible_F=force >= params.f_min - tol,
        feasible_FR=fr >= params.fr_min - tol,
    )
