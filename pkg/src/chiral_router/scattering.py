"""Single-point evaluation shared by sweeps, peak searches and the CLI.

An :class:`OperatingPoint` pins the physical parameters plus either the
incident energy or its detuning from the E1 - E3 resonance. Scan variables
(``G``, ``xi``, ``delta``, ``theta``, ``tau``, ``epsilon``) are applied to it
by name. Amplitudes come from the closed form, falling back to the exact
linear solve where the closed form is degenerate.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from . import closed_form, oracle
from .errors import DegeneratePoint, InvalidParameters, InvalidSpec
from .model import Port, SystemParams, context, epsilon_from_delta

VARIABLES = ("G", "xi", "delta", "theta", "tau", "epsilon")
COEFFICIENTS = ("T_a", "R_a", "T_b", "R_b")
CONTRAST_FLOOR = 1e-30


@dataclass(frozen=True)
class OperatingPoint:
    params: SystemParams
    epsilon: Optional[float] = None
    delta: Optional[float] = None

    def __post_init__(self):
        if (self.epsilon is None) == (self.delta is None):
            raise InvalidParameters("exactly one of epsilon or delta must be given")

    @property
    def incident_energy(self) -> float:
        if self.epsilon is not None:
            return self.epsilon
        return epsilon_from_delta(self.params, self.delta)

    def with_value(self, name: str, value: float) -> "OperatingPoint":
        """Copy with one scan variable set; a fixed delta tracks changes of xi."""
        p = self.params
        if name == "G":
            if value < 0:
                raise InvalidParameters(f"G must be >= 0, got {value!r}")
            return replace(self, params=p.replace(gamma2=value * p.gamma1))
        if name in ("xi", "theta", "tau"):
            return replace(self, params=p.replace(**{name: value}))
        if name == "delta":
            return OperatingPoint(p, delta=value)
        if name == "epsilon":
            return OperatingPoint(p, epsilon=value)
        raise InvalidSpec(f"unknown variable {name!r}; expected one of {VARIABLES}")

    def with_values(self, assignments) -> "OperatingPoint":
        point = self
        for name, value in assignments:
            point = point.with_value(name, value)
        return point

    def context(self, port=Port.PORT1):
        return context(self.params, self.incident_energy, port)


def amplitudes(ctx):
    """Closed-form amplitudes, or the exact solve at a degenerate point.

    Returns ``(amps, used_oracle)``. SingularSystem from the fallback
    propagates.
    """
    try:
        return closed_form.amplitudes(ctx), False
    except DegeneratePoint:
        return oracle.amplitudes_oracle(ctx), True


def coefficients(point: OperatingPoint, port=Port.PORT1) -> closed_form.PortCoefficients:
    port = Port.parse(port)
    amps, _ = amplitudes(point.context(port))
    return closed_form.coefficients(amps, port)


def conservation_residual(point: OperatingPoint, port=Port.PORT1) -> float:
    amps, _ = amplitudes(point.context(port))
    return abs(amps.probability_sum() - 1.0)


@dataclass(frozen=True)
class ContrastRatios:
    """Normalized port-2 minus port-1 transmission difference per waveguide.

    ``undefined_a``/``undefined_b`` flag components where both transmissions
    vanish and the ratio was set to 0.
    """

    i_a: float
    i_b: float
    port1: closed_form.PortCoefficients
    port2: closed_form.PortCoefficients
    undefined_a: bool = False
    undefined_b: bool = False


def contrast_ratio(forward: float, backward: float):
    """``(backward - forward) / (backward + forward)`` with the 0/0 convention.

    Returns ``(ratio, undefined)``.
    """
    total = backward + forward
    if total < CONTRAST_FLOOR:
        return 0.0, True
    return (backward - forward) / total, False


def contrast(params: SystemParams, epsilon: float) -> ContrastRatios:
    """Transmission contrast between port-2 and port-1 injection."""
    point = OperatingPoint(params, epsilon=epsilon)
    return contrast_at(point)


def contrast_at(point: OperatingPoint) -> ContrastRatios:
    c1 = coefficients(point, Port.PORT1)
    c2 = coefficients(point, Port.PORT2)
    i_a, und_a = contrast_ratio(c1.T_a, c2.T_a)
    i_b, und_b = contrast_ratio(c1.T_b, c2.T_b)
    return ContrastRatios(i_a, i_b, c1, c2, und_a, und_b)


def observable(point: OperatingPoint, name: str, port=Port.PORT1) -> float:
    """Scalar observable by name.

    ``T_a`` etc. refer to ``port``; ``Ttilde_a``/``Ttilde_b`` are always the
    port-2 transmissions; ``I_a``/``I_b`` and ``abs_I_a``/``abs_I_b`` are the
    contrast ratios; ``conservation_residual`` is ``|sum - 1|``.
    """
    if name in COEFFICIENTS:
        return getattr(coefficients(point, port), name)
    if name in ("Ttilde_a", "Ttilde_b"):
        return getattr(coefficients(point, Port.PORT2), "T_" + name[-1])
    if name in ("I_a", "I_b"):
        return getattr(contrast_at(point), "i_" + name[-1])
    if name in ("abs_I_a", "abs_I_b"):
        return abs(getattr(contrast_at(point), "i_" + name[-1]))
    if name == "conservation_residual":
        return conservation_residual(point, port)
    raise InvalidSpec(f"unknown observable {name!r}")
