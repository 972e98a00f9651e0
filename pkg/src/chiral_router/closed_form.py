"""Analytical single-photon amplitudes for injection at port 1 or port 2.

The expressions hold for degenerate atoms (shared detuning ``delta_cap``) in
both the Markovian and the retarded regime, since retardation only enters
through the accumulated phase ``phi = tau * delta_cap + theta``.

With ``c_i = gamma_i**2``::

    A = c1 + c2          B = sqrt(c1 c2)         C = Delta**2 - xi**2
    D = 2i (sqrt(c1) + sqrt(c2)) (Delta - e^{i phi} xi)
    E = c2 + (sqrt(c1) + i Delta)**2 + xi**2
    den = A - C + D + B (2 - 4 e^{2 i phi})

Phase convention: amplitudes are the coefficients of the plane waves in the
piecewise ansatz used by :mod:`chiral_router.oracle`. With the other common
sign choice, r_a, r_b and t_b flip sign; no modulus changes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from .errors import ConservationViolation, DegeneratePoint
from .model import Port, ScatteringContext

DEGENERACY_FLOOR = 1e-12
CONSERVATION_TOL = 1e-8


@dataclass(frozen=True)
class Amplitudes:
    """Outer amplitudes, plus inner and emitter amplitudes when solved exactly."""

    t_a: complex
    r_a: complex
    t_b: complex
    r_b: complex
    t12a: Optional[complex] = None
    r12a: Optional[complex] = None
    t12b: Optional[complex] = None
    r12b: Optional[complex] = None
    u1: Optional[complex] = None
    u2: Optional[complex] = None

    @property
    def outer(self) -> tuple:
        return (self.t_a, self.r_a, self.t_b, self.r_b)

    @property
    def has_inner(self) -> bool:
        return None not in (self.t12a, self.r12a, self.t12b, self.r12b)

    def probability_sum(self) -> float:
        return sum(abs(z) ** 2 for z in self.outer)


# output port reached by each outer channel, keyed by the injection port
OUT_PORT_MAP = {
    Port.PORT1: {"T_a": 2, "R_a": 1, "T_b": 4, "R_b": 3},
    Port.PORT2: {"T_a": 1, "R_a": 2, "T_b": 3, "R_b": 4},
}


@dataclass(frozen=True)
class PortCoefficients:
    T_a: float
    R_a: float
    T_b: float
    R_b: float
    port: Port = Port.PORT1

    @property
    def out_port_map(self) -> dict:
        return OUT_PORT_MAP[self.port]

    @property
    def total(self) -> float:
        return self.T_a + self.R_a + self.T_b + self.R_b

    def by_output_port(self) -> dict:
        """Probability of leaving through each of the ports 1..4."""
        return {self.out_port_map[name]: getattr(self, name)
                for name in ("T_a", "R_a", "T_b", "R_b")}

    def as_dict(self) -> dict:
        return {"T_a": self.T_a, "R_a": self.R_a, "T_b": self.T_b, "R_b": self.R_b}


def _amplitudes(ctx: ScatteringContext, incoming_port: Port) -> Amplitudes:
    delta = ctx.delta_cap
    xi = ctx.params.xi
    phi = ctx.phi
    # sqrt(c_i) = gamma_i; the "near" rate couples to the incident direction
    if incoming_port is Port.PORT1:
        s_far, s_near = ctx.params.gamma1, ctx.params.gamma2
        c_far, c_near = ctx.c1, ctx.c2
        back_phase = cmath.exp(1j * phi)
    else:
        s_far, s_near = ctx.params.gamma2, ctx.params.gamma1
        c_far, c_near = ctx.c2, ctx.c1
        back_phase = cmath.exp(-1j * phi)

    e1 = cmath.exp(1j * phi)
    e2 = e1 * e1
    A = ctx.c1 + ctx.c2
    B = math.sqrt(ctx.c1 * ctx.c2)
    C = delta * delta - xi * xi
    D = 2j * (ctx.params.gamma1 + ctx.params.gamma2) * (delta - e1 * xi)
    E = c_near + (s_far + 1j * delta) ** 2 + xi * xi
    den = A - C + D + B * (2.0 - 4.0 * e2)

    scale = max(abs(A), abs(C), abs(E), 1.0)
    if abs(den) < DEGENERACY_FLOOR * scale:
        raise DegeneratePoint(
            f"|denominator|={abs(den):.3e} at Delta={delta!r}, xi={xi!r}, phi={phi!r}")

    sqrt_b = math.sqrt(math.sqrt(ctx.c1 * ctx.c2))
    sqrt_a2b = math.sqrt(A + 2.0 * B)
    sin_phi = math.sin(phi)

    t_a = -(2.0 * e2 * B + 2j * e1 * s_far * xi - 2.0 * sin_phi * s_near * xi - E) / den
    r_a = -2j * back_phase * sqrt_b * (
        delta * math.cos(phi) - xi - sqrt_a2b * sin_phi) / den
    t_b = -2j * s_near * (delta - xi * math.cos(phi) - 2.0 * s_far * sin_phi * e1) / den
    return Amplitudes(t_a=t_a, r_a=r_a, t_b=t_b, r_b=r_a)


def amplitudes_port1(ctx: ScatteringContext) -> Amplitudes:
    """Closed-form amplitudes for a photon entering at port 1 (left end of a).

    Raises DegeneratePoint where the analytic expression is 0/0 or the
    denominator drops below ``1e-12 * max(|A|, |C|, |E|, 1)``.
    """
    return _amplitudes(ctx, Port.PORT1)


def amplitudes_port2(ctx: ScatteringContext) -> Amplitudes:
    """Closed-form amplitudes for a photon entering at port 2 (right end of a).

    Equal to the port-1 transmissions with gamma1 and gamma2 exchanged; the
    reflection picks up the phase ``e^{-2 i phi}`` relative to port 1.
    """
    return _amplitudes(ctx, Port.PORT2)


def amplitudes(ctx: ScatteringContext) -> Amplitudes:
    """Closed-form amplitudes for the injection port recorded in ``ctx``."""
    return _amplitudes(ctx, ctx.port)


def coefficients(amps: Amplitudes, port=Port.PORT1) -> PortCoefficients:
    """Probabilities |t|^2, |r|^2 per channel; checks they sum to one."""
    port = Port.parse(port)
    values = [abs(z) ** 2 for z in amps.outer]
    if not all(math.isfinite(v) for v in values):
        raise ConservationViolation(f"non-finite amplitudes {amps.outer!r}")
    residual = abs(sum(values) - 1.0)
    if residual > CONSERVATION_TOL:
        raise ConservationViolation(f"probabilities sum to 1{sum(values) - 1.0:+.3e}")
    return PortCoefficients(*values, port=port)
