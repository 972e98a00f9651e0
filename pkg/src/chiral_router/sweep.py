"""Rectangular two-variable parameter sweeps with CSV output.

Rows are ordered with the x axis varying fastest. Each cell is evaluated by
the same single-point path as :func:`chiral_router.scattering.observable`, so
sweeps and point queries agree bit for bit. A cell whose exact solve turns out
singular is kept as a NaN row and reported in ``diagnostics``.
"""

from __future__ import annotations

import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .errors import InvalidSpec, SingularSystem
from .model import Port
from .scattering import VARIABLES, OperatingPoint, observable

OBSERVABLES = ("T_a", "R_a", "T_b", "R_b", "I_a", "I_b", "conservation_residual")


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    n: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


@dataclass(frozen=True)
class SweepSpec:
    base: OperatingPoint
    x_axis: Axis
    y_axis: Axis
    observables: tuple = ("T_a",)
    port: Port = Port.PORT1

    def validate(self):
        for ax in (self.x_axis, self.y_axis):
            if ax.name not in VARIABLES:
                raise InvalidSpec(f"unknown axis variable {ax.name!r}")
            if not (math.isfinite(ax.lo) and math.isfinite(ax.hi)) or ax.lo >= ax.hi:
                raise InvalidSpec(f"axis {ax.name}: need finite min < max")
            if ax.name in ("G", "xi", "tau") and ax.lo < 0:
                raise InvalidSpec(f"axis {ax.name}: values must be >= 0")
            if ax.n < 2:
                raise InvalidSpec(f"axis {ax.name}: n must be >= 2")
        if self.x_axis.name == self.y_axis.name:
            raise InvalidSpec("x and y axes must differ")
        if {self.x_axis.name, self.y_axis.name} == {"delta", "epsilon"}:
            raise InvalidSpec("delta and epsilon cannot both be swept")
        if not self.observables:
            raise InvalidSpec("at least one observable is required")
        for name in self.observables:
            if name not in OBSERVABLES:
                raise InvalidSpec(f"unknown observable {name!r}")


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list
    diagnostics: list = field(default_factory=list)

    @property
    def columns(self) -> tuple:
        return (self.spec.x_axis.name, self.spec.y_axis.name) + tuple(self.spec.observables)

    def column(self, name: str) -> np.ndarray:
        return np.array([row[self.columns.index(name)] for row in self.rows])

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(format_float(v) for v in row) + "\n")
        return out.getvalue()


def format_float(value: float) -> str:
    """Shortest decimal that round-trips to the same double."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    return repr(value)


def _cell(spec: SweepSpec, xy):
    x, y = xy
    try:
        point = spec.base.with_values(((spec.x_axis.name, x), (spec.y_axis.name, y)))
        values = tuple(float(observable(point, name, spec.port)) for name in spec.observables)
        return (x, y) + values, None
    except SingularSystem as exc:
        nan_row = (x, y) + (math.nan,) * len(spec.observables)
        return nan_row, f"x={x!r}, y={y!r}: {exc}"


def default_workers() -> int:
    return os.cpu_count() or 1


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    """Evaluate every observable on the grid; ordering never depends on workers."""
    spec.validate()
    if workers is None:
        workers = default_workers()
    cells = [(float(x), float(y)) for y in spec.y_axis.values() for x in spec.x_axis.values()]
    fn = partial(_cell, spec)
    if workers <= 1 or len(cells) < 2:
        results = [fn(c) for c in cells]
    else:
        chunk = max(1, len(cells) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, cells, chunksize=chunk))
    rows = [r for r, _ in results]
    diagnostics = [d for _, d in results if d is not None]
    return SweepResult(spec, rows, diagnostics)


