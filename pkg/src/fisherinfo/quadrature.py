"""Composite Simpson quadrature on a uniform grid.

Chosen over adaptive schemes so every figure and bound evaluation is
deterministic and reproducible for a fixed grid size.
"""

from __future__ import annotations

import numpy as np

from .errors import QuadratureError


def _check_grid_points(grid_points: int) -> int:
    grid_points = int(grid_points)
    if grid_points < 3 or grid_points % 2 == 0:
        raise ValueError(f"grid_points must be odd and >= 3, got {grid_points}")
    return grid_points


def simpson_nodes(lo: float, hi: float, grid_points: int) -> np.ndarray:
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    return np.linspace(lo, hi, _check_grid_points(grid_points))


def simpson_weights(grid_points: int, step: float) -> np.ndarray:
    w = np.ones(_check_grid_points(grid_points))
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (step / 3.0)


def integrate_values(values: np.ndarray, lo: float, hi: float) -> float:
    """Simpson sum of integrand values sampled on a uniform grid over [lo, hi]."""
    values = np.asarray(values, dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        nodes = simpson_nodes(lo, hi, values.size)
        raise QuadratureError(
            f"integrand is non-finite at node {bad[0]} (t = {nodes[bad[0]]})"
        )
    step = (hi - lo) / (values.size - 1)
    return float(simpson_weights(values.size, step) @ values)


def integrate(fn, lo: float, hi: float, grid_points: int) -> float:
    """Composite Simpson integral of fn over [lo, hi].

    fn may be vectorized over an array argument or scalar-only.
    """
    nodes = simpson_nodes(lo, hi, grid_points)
    try:
        values = np.asarray(fn(nodes), dtype=float)
        if values.shape != nodes.shape:
            raise TypeError
    except (TypeError, ValueError):
        values = np.array([float(fn(t)) for t in nodes])
    return integrate_values(values, lo, hi)
