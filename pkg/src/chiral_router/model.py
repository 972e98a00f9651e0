"""Physical parameters, dimer eigenspectrum and per-energy derived quantities.

Units: hbar = v_g = 1. Energies and rates are measured in units of the
left-mover coupling rate gamma1 (the CLI pins gamma1 = 1), times in 1/gamma1.
The propagation length L between the two coupling points equals the delay tau.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvalidParameters, UnequalAtomFrequencies


class Port(enum.Enum):
    """Injection end of waveguide a."""

    PORT1 = 1  # left end, photon moves right
    PORT2 = 2  # right end, photon moves left

    @classmethod
    def parse(cls, value) -> "Port":
        if isinstance(value, Port):
            return value
        text = str(value).strip().lower().replace("port", "")
        try:
            return cls(int(text))
        except ValueError:
            raise InvalidParameters(f"unknown port {value!r}") from None


@dataclass(frozen=True)
class SystemParams:
    """Atom frequencies, dipole coupling, chiral rates and retardation.

    ``gamma1`` couples both atoms to left-moving photons in both waveguides,
    ``gamma2`` to right-moving photons. The chirality G = gamma2/gamma1 is
    derived, never stored.
    """

    omega1: float
    omega2: float
    xi: float
    gamma1: float
    gamma2: float
    theta: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        for name in ("omega1", "omega2", "xi", "gamma1", "gamma2", "theta", "tau"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParameters(f"{name} must be finite, got {value!r}")
        if self.xi < 0:
            raise InvalidParameters(f"xi must be >= 0, got {self.xi!r}")
        if self.gamma1 <= 0:
            raise InvalidParameters(f"gamma1 must be > 0, got {self.gamma1!r}")
        if self.gamma2 < 0:
            raise InvalidParameters(f"gamma2 must be >= 0, got {self.gamma2!r}")
        if self.tau < 0:
            raise InvalidParameters(f"tau must be >= 0, got {self.tau!r}")

    @classmethod
    def from_chirality(cls, omega_e, xi, G, theta=0.0, tau=0.0, gamma1=1.0):
        """Build degenerate-atom parameters from the chirality G = gamma2/gamma1."""
        if not G >= 0:
            raise InvalidParameters(f"G must be >= 0, got {G!r}")
        return cls(omega_e, omega_e, xi, gamma1, G * gamma1, theta, tau)

    @property
    def G(self) -> float:
        return self.gamma2 / self.gamma1

    @property
    def markovian(self) -> bool:
        return self.tau == 0.0

    def replace(self, **changes) -> "SystemParams":
        fields = {k: getattr(self, k) for k in
                  ("omega1", "omega2", "xi", "gamma1", "gamma2", "theta", "tau")}
        fields.update(changes)
        return SystemParams(**fields)


@dataclass(frozen=True)
class EigenSpectrum:
    e1: float
    e2: float
    e3: float
    e4: float
    psi: float


def eigenspectrum(omega1: float, omega2: float, xi: float) -> EigenSpectrum:
    """Eigenenergies of the bare dipole-coupled dimer.

    ``e1`` is the doubly excited state, ``e2``/``e3`` the symmetric splitting
    of the single-excitation block, ``e4`` the ground state. The mixing angle
    is ``psi = atan2(2 xi, omega1 - omega2)``, folded into [0, pi).
    """
    total = omega1 + omega2
    split = math.hypot(2.0 * xi, omega1 - omega2)
    psi = math.atan2(2.0 * xi, omega1 - omega2)
    if psi < 0.0:
        psi += math.pi
    if psi >= math.pi:
        psi -= math.pi
    return EigenSpectrum(total, 0.5 * (total + split), 0.5 * (total - split), 0.0, psi)


def resonance_offset(params: SystemParams) -> float:
    """E1 - E3: the incident energy at which the small detuning vanishes."""
    spec = eigenspectrum(params.omega1, params.omega2, params.xi)
    return spec.e1 - spec.e3


@dataclass(frozen=True)
class ScatteringContext:
    """Everything the amplitude formulas need at one incident energy."""

    params: SystemParams
    epsilon: float
    port: Port
    delta_cap: float    # epsilon - omega_e
    delta_small: float  # epsilon - (E1 - E3)
    phi: float          # tau * delta_cap + theta
    c1: float           # gamma1 ** 2
    c2: float           # gamma2 ** 2

    @property
    def regime(self) -> str:
        return "markovian" if self.params.markovian else "non-markovian"


def _context(params, epsilon, port, delta_cap):
    port = Port.parse(port)
    return ScatteringContext(
        params=params,
        epsilon=epsilon,
        port=port,
        delta_cap=delta_cap,
        delta_small=epsilon - resonance_offset(params),
        phi=params.tau * delta_cap + params.theta,
        c1=params.gamma1 ** 2,
        c2=params.gamma2 ** 2,
    )


def context(params: SystemParams, epsilon: float, port=Port.PORT1) -> ScatteringContext:
    """Derived quantities for a photon of energy ``epsilon`` entering at ``port``.

    Raises UnequalAtomFrequencies unless omega1 == omega2, since the shared
    detuning is only defined for degenerate atoms.
    """
    if params.omega1 != params.omega2:
        raise UnequalAtomFrequencies(
            f"omega1={params.omega1!r} != omega2={params.omega2!r}")
    if not math.isfinite(epsilon):
        raise InvalidParameters(f"epsilon must be finite, got {epsilon!r}")
    return _context(params, epsilon, port, epsilon - params.omega1)


def general_context(params: SystemParams, epsilon: float, port=Port.PORT1) -> ScatteringContext:
    """Like :func:`context` but accepts omega1 != omega2.

    ``delta_cap`` is then the detuning from atom 1 and only the linear-system
    solver may consume the result; it reads both detunings from ``params``.
    """
    if not math.isfinite(epsilon):
        raise InvalidParameters(f"epsilon must be finite, got {epsilon!r}")
    return _context(params, epsilon, port, epsilon - params.omega1)


def epsilon_from_delta(params: SystemParams, delta: float) -> float:
    """Incident energy whose small detuning from E1 - E3 is ``delta``."""
    return delta + resonance_offset(params)
