"""Nonreciprocity contrast and perfect-routing peak search.

``find_peaks`` scans a two-variable box on a grid, then polishes every strict
local maximum of the grid with a bounded Nelder-Mead simplex in coordinates
normalized to the unit square.
"""

from __future__ import annotations

import math
import pickle
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import EmptyBox, InvalidSpec, ScatteringError
from .scattering import (VARIABLES, ContrastRatios, OperatingPoint, contrast,
                         contrast_at, observable)

__all__ = ["ContrastRatios", "contrast", "contrast_at", "Peak", "SearchAxis",
           "OBJECTIVES", "find_peaks", "named_objective"]

OBJECTIVES = ("T_a", "T_b", "Ttilde_a", "Ttilde_b", "abs_I_a", "abs_I_b")

MAX_EVALUATIONS = 500
DEDUP_FACTOR = 10.0


@dataclass(frozen=True)
class SearchAxis:
    name: str
    lo: float
    hi: float

    def at(self, u: float) -> float:
        return self.lo + u * (self.hi - self.lo)


@dataclass(frozen=True)
class Peak:
    location: tuple
    value: float
    converged: bool
    evaluations: int


def _evaluate_named(base: OperatingPoint, names, objective_name, coords):
    point = base.with_values(zip(names, coords))
    return observable(point, objective_name)


def named_objective(objective_name: str, base: OperatingPoint, axis_names) -> Callable:
    """Picklable callable mapping (x, y) to the named observable at ``base``."""
    if objective_name not in OBJECTIVES:
        raise InvalidSpec(f"unknown objective {objective_name!r}; expected one of {OBJECTIVES}")
    return partial(_evaluate_named, base, tuple(axis_names), objective_name)


def _safe(fn, coords):
    try:
        value = fn(tuple(float(c) for c in coords))
    except ScatteringError:
        return -math.inf
    return value if math.isfinite(value) else -math.inf


def _grid_values(fn, points, workers):
    if workers > 1 and len(points) > 1:
        try:
            pickle.dumps(fn)
        except Exception:
            workers = 1
    if workers <= 1:
        return [_safe(fn, p) for p in points]
    chunk = max(1, len(points) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(partial(_safe, fn), points, chunksize=chunk))


def _strict_maxima(grid: np.ndarray):
    n = grid.shape[0]
    cells = []
    for i in range(n):
        for j in range(n):
            v = grid[i, j]
            if not math.isfinite(v):
                continue
            neighbours = [grid[a, b]
                          for a in range(max(i - 1, 0), min(i + 2, n))
                          for b in range(max(j - 1, 0), min(j + 2, n))
                          if (a, b) != (i, j)]
            if all(v > w for w in neighbours):
                cells.append((i, j))
    return cells


def find_peaks(objective, base: OperatingPoint | None = None,
               axes: Sequence = (), grid_n: int = 41, refine_tol: float = 1e-6,
               workers: int = 1) -> list[Peak]:
    """Local maxima of ``objective`` over a two-variable box.

    ``objective`` is either a name from ``OBJECTIVES`` (then ``base`` supplies
    the fixed parameters) or a callable taking the coordinate tuple ``(x, y)``.
    ``axes`` holds two ``(name, lo, hi)`` triples; ``refine_tol`` is measured
    in box-normalized coordinates. Peaks are returned best first and merged
    when closer than ``10 * refine_tol``.
    """
    axes = [a if isinstance(a, SearchAxis) else SearchAxis(*a) for a in axes]
    if len(axes) != 2:
        raise InvalidSpec("find_peaks needs exactly two axes")
    if axes[0].name == axes[1].name:
        raise InvalidSpec("axes must be distinct")
    for ax in axes:
        if not (math.isfinite(ax.lo) and math.isfinite(ax.hi)):
            raise EmptyBox(f"axis {ax.name} has a non-finite bound")
        if ax.lo >= ax.hi:
            raise EmptyBox(f"axis {ax.name}: min {ax.lo!r} >= max {ax.hi!r}")
    if grid_n < 8:
        raise InvalidSpec(f"grid_n must be >= 8, got {grid_n}")
    if isinstance(objective, str):
        if base is None:
            raise InvalidSpec("a named objective needs a base operating point")
        for ax in axes:
            if ax.name not in VARIABLES:
                raise InvalidSpec(f"unknown axis variable {ax.name!r}")
        fn = named_objective(objective, base, [ax.name for ax in axes])
    else:
        fn = objective

    us = np.linspace(0.0, 1.0, grid_n)
    # grid[i, j]: i indexes the first axis, j the second
    points = [(axes[0].at(u), axes[1].at(v)) for u in us for v in us]
    grid = np.array(_grid_values(fn, points, workers)).reshape(grid_n, grid_n)

    starts = _strict_maxima(grid)
    best = np.unravel_index(int(np.argmax(grid)), grid.shape)
    if tuple(best) not in starts and math.isfinite(grid[best]):
        starts.append(tuple(int(k) for k in best))
    if not starts:
        return []

    refine = partial(_refine, fn, axes, us, refine_tol)
    peaks = [refine(cell) for cell in starts]

    peaks.sort(key=lambda p: (-p.value, p.location))
    radius = DEDUP_FACTOR * refine_tol
    kept = []
    for peak in peaks:
        u = _normalize(axes, peak.location)
        if all(math.dist(u, _normalize(axes, q.location)) > radius for q in kept):
            kept.append(peak)
    return kept


def _normalize(axes, location):
    return tuple((x - ax.lo) / (ax.hi - ax.lo) for x, ax in zip(location, axes))


def _refine(fn, axes, us, refine_tol, cell) -> Peak:
    h = us[1] - us[0]
    start = np.array([us[cell[0]], us[cell[1]]])
    simplex = [start.copy()]
    for k in range(2):
        vertex = start.copy()
        vertex[k] += h if vertex[k] + h <= 1.0 else -h
        simplex.append(vertex)

    def negated(u):
        return -_safe(fn, (axes[0].at(u[0]), axes[1].at(u[1])))

    result = minimize(
        negated, start, method="Nelder-Mead", bounds=[(0.0, 1.0), (0.0, 1.0)],
        options={"initial_simplex": np.array(simplex), "xatol": refine_tol,
                 "fatol": 1e-14, "maxfev": MAX_EVALUATIONS},
    )
    u = np.clip(result.x, 0.0, 1.0)
    grid_value = -negated(start)
    if -result.fun < grid_value:
        u = start
    location = (float(axes[0].at(u[0])), float(axes[1].at(u[1])))
    value = _safe(fn, location)
    return Peak(location, value, bool(result.success), int(result.nfev) + 1)
