"""Quasi-static stretching of an elastic-perfectly-plastic spring network.

The network is driven by a monotone ramp of the total elongation between its
two terminals.  Each spring carries ``f_i = k_i (e_i - p_i)`` with
``f_i <= c_i``; once a spring reaches its limit it flows plastically at
constant force.  Elongation increments are routed through the tree with the
tangent stiffness (series: harmonic combination, parallel: sum, yielded
spring: zero), and every increment is split at yield events so the force
history is exact for the piecewise-linear model.

This is deliberately independent of the min/sum rule in
:func:`springopt.evaluators.response_force`; the plateau force it reaches is
used to check that rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evaluators import DomainError, as_limits
from .network import Leaf, Parallel, SPTree

__all__ = ["SimulationResult", "SimulationError", "simulate_loading", "default_ramp"]


class SimulationError(RuntimeError):
    """The network state became mechanically inconsistent."""


@dataclass(frozen=True)
class SimulationResult:
    elongation: np.ndarray
    force: np.ndarray
    plastic_strain: np.ndarray

    @property
    def max_force(self) -> float:
        return float(self.force.max())


def default_ramp(c, k) -> float:
    """Total elongation long enough for every plastic event: ``2 * sum(c_i / k_i)``."""
    return 2.0 * float(np.sum(np.asarray(c, float) / np.asarray(k, float)))


def _tangent(node: SPTree, k: np.ndarray, plastic: np.ndarray) -> float:
    if isinstance(node, Leaf):
        i = node.index - 1
        return 0.0 if plastic[i] else float(k[i])
    parts = [_tangent(child, k, plastic) for child in node.children]
    if isinstance(node, Parallel):
        return sum(parts)
    if min(parts) == 0.0:
        return 0.0
    return 1.0 / sum(1.0 / part for part in parts)


def _route(node: SPTree, rate: float, k, plastic, out: np.ndarray) -> None:
    """Write each spring's elongation rate for a unit rate of ``node``'s elongation."""
    if isinstance(node, Leaf):
        out[node.index - 1] = rate
        return
    if isinstance(node, Parallel):
        for child in node.children:
            _route(child, rate, k, plastic, out)
        return
    stiff = [_tangent(child, k, plastic) for child in node.children]
    if min(stiff) > 0.0:
        force_rate = rate / sum(1.0 / s for s in stiff)
        for child, s in zip(node.children, stiff):
            _route(child, force_rate / s, k, plastic, out)
        return
    # a yielded member takes the whole elongation; the rest stay put
    soft = stiff.index(0.0)
    for j, child in enumerate(node.children):
        _route(child, rate if j == soft else 0.0, k, plastic, out)


def simulate_loading(
    tree: SPTree,
    c,
    k=None,
    ramp: float | None = None,
    steps: int = 1000,
) -> SimulationResult:
    """Stretch ``tree`` from rest to total elongation ``ramp`` in ``steps`` equal increments.

    ``k`` defaults to unit stiffness and ``ramp`` to :func:`default_ramp`.
    Returns the elongation and terminal force at every step (``steps + 1``
    samples, starting at rest).
    """
    c = as_limits(tree, c)
    if c.ndim != 1:
        raise DomainError("simulate_loading takes a single limit vector")
    m = c.shape[0]
    k = np.ones(m) if k is None else np.asarray(k, dtype=float)
    if k.shape != (m,) or np.any(~np.isfinite(k)) or np.any(k <= 0):
        raise DomainError(f"need {m} positive stiffnesses, got {k!r}")
    if int(steps) != steps or steps < 1:
        raise DomainError("steps must be a positive integer")
    steps = int(steps)
    if ramp is None:
        ramp = default_ramp(c, k)
    if not ramp >= 0:
        raise DomainError("ramp must be a non-negative total elongation")

    force = np.zeros(m)
    plastic_strain = np.zeros(m)
    plastic = np.zeros(m, dtype=bool)
    total = 0.0
    du = ramp / steps

    history_u = du * np.arange(steps + 1)
    history_f = np.zeros(steps + 1)

    # Between yield events everything is linear in the elongation, so leaf
    # state is only advanced at events and the terminal force is read off per step.
    start = 0.0
    rates = np.zeros(m)

    def enter_state():
        rates[:] = 0.0
        stiffness = _tangent(tree, k, plastic)
        _route(tree, 1.0, k, plastic, rates)
        if stiffness == 0.0:
            if np.any((rates > 0) & ~plastic):
                raise SimulationError("zero tangent stiffness but an elastic spring is still loading")
            return stiffness, np.zeros(m), np.inf
        force_rate = np.where(plastic, 0.0, k * rates)
        with np.errstate(divide="ignore", invalid="ignore"):
            to_yield = np.where(force_rate > 0, (c - force) / force_rate, np.inf)
        return stiffness, force_rate, start + max(float(to_yield.min()), 0.0)

    def advance(to):
        nonlocal force, total
        ds = to - start
        # elastic predictor, plastic corrector
        trial = force + force_rate * ds
        over = trial > c
        plastic_strain[:] += np.where(plastic, rates * ds, 0.0)
        plastic_strain[over] += (trial[over] - c[over]) / k[over]
        force = np.minimum(trial, c)
        total += stiffness * ds

    stiffness, force_rate, next_yield = enter_state()
    for step in range(1, steps + 1):
        target = history_u[step]
        while next_yield <= target:
            advance(next_yield)
            start = next_yield
            with np.errstate(divide="ignore", invalid="ignore"):
                reached = (force_rate > 0) & (c - force <= 1e-12 * c)
            # springs reaching their limit together yield together
            plastic |= reached
            force[plastic] = c[plastic]
            stiffness, force_rate, next_yield = enter_state()
        history_f[step] = total + stiffness * (target - start)
    advance(history_u[-1])

    return SimulationResult(elongation=history_u, force=history_f, plastic_strain=plastic_strain)
