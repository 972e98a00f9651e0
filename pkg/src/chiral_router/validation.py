"""Seeded cross-check of the closed form against the exact linear solve.

Random operating points are drawn with numpy's PCG64 generator
(``numpy.random.default_rng(seed)``), one vectorized uniform draw per
variable in the fixed order G, xi, delta, theta, tau:

    G in [0, 5], xi in [0, 10], delta in [-50, 50], theta in [0, 2 pi),
    tau in [0, 3]   (all in units of gamma1; omega_e = 100, gamma1 = 1)

Every draw is solved for both injection ports by both routes. The first
``min(samples, 1000)`` draws are reused for the reciprocity check at G = 1 and
for the port-swap symmetry check.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import closed_form, oracle
from .errors import DegeneratePoint
from .model import Port, SystemParams, context

OMEGA_E = 100.0
RANGES = {
    "G": (0.0, 5.0),
    "xi": (0.0, 10.0),
    "delta": (-50.0, 50.0),
    "theta": (0.0, 2.0 * math.pi),
    "tau": (0.0, 3.0),
}
SYMMETRY_SAMPLES = 1000

BOUNDS = {
    "conservation": 1e-10,
    "oracle_deviation": 1e-9,
    "reciprocity": 1e-12,
    "swap": 1e-12,
    "degenerate_fraction": 1e-3,
}
REFLECTION_TOL = 1e-10


def draw_samples(samples: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    draws = {}
    for name, (lo, hi) in RANGES.items():
        draws[name] = rng.uniform(lo, hi, size=samples)
    return draws


def sample_params(draws: dict, i: int):
    """``(params, epsilon)`` for draw ``i``; delta is measured from E1 - E3."""
    xi = float(draws["xi"][i])
    params = SystemParams.from_chirality(
        OMEGA_E, xi, float(draws["G"][i]),
        theta=float(draws["theta"][i]), tau=float(draws["tau"][i]))
    epsilon = float(draws["delta"][i]) + OMEGA_E + xi
    return params, epsilon


def deviation(a: closed_form.Amplitudes, b: closed_form.Amplitudes) -> float:
    """Largest outer-amplitude difference relative to the norm of ``b``."""
    norm = math.sqrt(b.probability_sum())
    return max(abs(x - y) for x, y in zip(a.outer, b.outer)) / max(norm, 1e-300)


@dataclass
class ValidationReport:
    samples: int
    seed: int
    max_conservation_closed_form: float = 0.0
    max_conservation_oracle: float = 0.0
    max_oracle_deviation: float = 0.0
    degenerate_points: int = 0
    reciprocity_max_deviation: float = 0.0
    swap_max_closed_form: float = 0.0
    swap_max_oracle: float = 0.0
    max_reflection_difference: float = 0.0
    max_transmission_difference: float = 0.0
    min_pivot_ratio: float = 1.0
    elapsed: dict = field(default_factory=dict)  # wall-clock, never serialized

    @property
    def degenerate_fraction(self) -> float:
        return self.degenerate_points / max(2 * self.samples, 1)

    @property
    def reflection_verdict(self) -> str:
        if self.max_reflection_difference < REFLECTION_TOL:
            return "reciprocal"
        return "nonreciprocal"

    def checks(self) -> dict:
        return {
            "conservation": max(self.max_conservation_closed_form,
                                self.max_conservation_oracle) < BOUNDS["conservation"],
            "oracle_deviation": self.max_oracle_deviation < BOUNDS["oracle_deviation"],
            "reciprocity": self.reciprocity_max_deviation < BOUNDS["reciprocity"],
            "swap": max(self.swap_max_closed_form, self.swap_max_oracle) < BOUNDS["swap"],
            "degenerate_fraction": self.degenerate_fraction < BOUNDS["degenerate_fraction"],
        }

    @property
    def passed(self) -> bool:
        return all(self.checks().values())

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "prng": "numpy PCG64 via default_rng(seed)",
            "max_conservation_residual": max(self.max_conservation_closed_form,
                                             self.max_conservation_oracle),
            "max_conservation_residual_closed_form": self.max_conservation_closed_form,
            "max_conservation_residual_oracle": self.max_conservation_oracle,
            "max_closed_form_oracle_deviation": self.max_oracle_deviation,
            "degenerate_points": self.degenerate_points,
            "degenerate_fraction": self.degenerate_fraction,
            "reciprocity_G1_max_deviation": self.reciprocity_max_deviation,
            "swap_symmetry_max_deviation": {
                "closed_form": self.swap_max_closed_form,
                "oracle": self.swap_max_oracle,
            },
            "reflection_reciprocity": {
                "verdict": self.reflection_verdict,
                "max_abs_r_difference": self.max_reflection_difference,
                "max_transmission_difference": self.max_transmission_difference,
                "arbiter": "oracle",
            },
            "min_pivot_ratio": self.min_pivot_ratio,
            "bounds": dict(BOUNDS),
            "checks": self.checks(),
            "passed": self.passed,
        }


def _both_routes(params, epsilon, port, report):
    ctx = context(params, epsilon, port)
    solution = oracle.solve_oracle(ctx)
    report.min_pivot_ratio = min(report.min_pivot_ratio, solution.pivot_ratio)
    exact = solution.amplitudes
    try:
        approx = closed_form.amplitudes(ctx)
    except DegeneratePoint:
        report.degenerate_points += 1
        approx = None
    return approx, exact


def _coefficient_gap(a, b) -> float:
    return max(abs(abs(x) ** 2 - abs(y) ** 2) for x, y in zip(a.outer, b.outer))


def run_validation(samples: int = 10000, seed: int = 42) -> ValidationReport:
    report = ValidationReport(samples=samples, seed=seed)
    draws = draw_samples(samples, seed)

    start = time.perf_counter()
    for i in range(samples):
        params, epsilon = sample_params(draws, i)
        exact_by_port = {}
        for port in (Port.PORT1, Port.PORT2):
            approx, exact = _both_routes(params, epsilon, port, report)
            exact_by_port[port] = exact
            report.max_conservation_oracle = max(
                report.max_conservation_oracle, abs(exact.probability_sum() - 1.0))
            if approx is not None:
                report.max_conservation_closed_form = max(
                    report.max_conservation_closed_form, abs(approx.probability_sum() - 1.0))
                report.max_oracle_deviation = max(
                    report.max_oracle_deviation, deviation(approx, exact))
        fwd, bwd = exact_by_port[Port.PORT1], exact_by_port[Port.PORT2]
        report.max_reflection_difference = max(
            report.max_reflection_difference,
            abs(abs(fwd.r_a) - abs(bwd.r_a)), abs(abs(fwd.r_b) - abs(bwd.r_b)))
        report.max_transmission_difference = max(
            report.max_transmission_difference,
            abs(abs(fwd.t_a) ** 2 - abs(bwd.t_a) ** 2))
    report.elapsed["main"] = time.perf_counter() - start

    start = time.perf_counter()
    for i in range(min(samples, SYMMETRY_SAMPLES)):
        params, epsilon = sample_params(draws, i)

        reciprocal = params.replace(gamma2=params.gamma1)
        for route in (closed_form.amplitudes, oracle.amplitudes_oracle):
            try:
                fwd = route(context(reciprocal, epsilon, Port.PORT1))
                bwd = route(context(reciprocal, epsilon, Port.PORT2))
            except DegeneratePoint:
                continue
            report.reciprocity_max_deviation = max(
                report.reciprocity_max_deviation, _coefficient_gap(fwd, bwd))

        if params.gamma2 == 0.0:
            continue
        swapped = params.replace(gamma1=params.gamma2, gamma2=params.gamma1)
        for route, attr in ((closed_form.amplitudes, "swap_max_closed_form"),
                            (oracle.amplitudes_oracle, "swap_max_oracle")):
            try:
                bwd = route(context(params, epsilon, Port.PORT2))
                fwd = route(context(swapped, epsilon, Port.PORT1))
            except DegeneratePoint:
                continue
            gap = max(abs(bwd.t_a - fwd.t_a), abs(bwd.t_b - fwd.t_b))
            setattr(report, attr, max(getattr(report, attr), gap))
    report.elapsed["symmetry"] = time.perf_counter() - start
    return report
