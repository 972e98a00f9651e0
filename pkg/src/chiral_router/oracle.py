"""Exact boundary-condition linear system for the single-excitation eigenstate.

Each of the four guided fields (waveguide a/b, right/left mover) is a plane
wave with a constant amplitude in the three regions x < 0, 0 < x < L, x > L.
Integrating the stationary Schrödinger equation across the delta couplings
at x = 0 (atom 1) and x = L (atom 2) yields one jump condition per field and
coupling point (eight rows), and the emitter equations evaluate the field at
each coupling point as the mean of its one-sided limits (two rows).

Unknowns are ordered ``UNKNOWN_ORDER``. For port-2 injection the same symbols
name the mirrored channels: ``t_a`` is the left-mover leaving through port 1,
``r_a`` the right-mover leaving through port 2, and so on.

Conventions (hbar = v_g = 1): left movers couple with ``sqrt(gamma1)``, right
movers with ``sqrt(gamma2)``; ``e^{ikL} = e^{i phi}``. The emitter rows read
``(omega_i - epsilon) u_i = xi u_j + (1/2) sum sqrt(gamma) [psi(x_i+) + psi(x_i-)]``,
which is the detuning sign under which the analytical amplitudes in
:mod:`chiral_router.closed_form` hold.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .closed_form import Amplitudes
from .errors import MissingInnerAmplitudes, SingularSystem
from .model import Port, ScatteringContext

UNKNOWN_ORDER = ("t_a", "r_a", "t12a", "r12a", "t_b", "r_b", "t12b", "r12b", "u1", "u2")
_INDEX = {name: i for i, name in enumerate(UNKNOWN_ORDER)}

PIVOT_FLOOR = 1e-14


class Waveguide(enum.Enum):
    A = "a"
    B = "b"


class Direction(enum.Enum):
    RIGHT = "right"
    LEFT = "left"


# Region content per field: (x < 0, 0 < x < L, x > L). A string names an
# unknown, a number is a fixed amplitude (1 = incident wave, 0 = empty).
_ANSATZ = {
    Port.PORT1: {
        (Waveguide.A, Direction.RIGHT): (1.0, "t12a", "t_a"),
        (Waveguide.A, Direction.LEFT): ("r_a", "r12a", 0.0),
        (Waveguide.B, Direction.RIGHT): (0.0, "t12b", "t_b"),
        (Waveguide.B, Direction.LEFT): ("r_b", "r12b", 0.0),
    },
    Port.PORT2: {
        (Waveguide.A, Direction.RIGHT): (0.0, "r12a", "r_a"),
        (Waveguide.A, Direction.LEFT): ("t_a", "t12a", 1.0),
        (Waveguide.B, Direction.RIGHT): (0.0, "r12b", "r_b"),
        (Waveguide.B, Direction.LEFT): ("t_b", "t12b", 0.0),
    },
}

# row order: left then right mover, waveguide a then b, first at x=0 then x=L
_JUMP_ROWS = [
    (site, wg, d)
    for site in (0, 1)
    for wg, d in ((Waveguide.A, Direction.LEFT), (Waveguide.A, Direction.RIGHT),
                  (Waveguide.B, Direction.LEFT), (Waveguide.B, Direction.RIGHT))
]


@dataclass(frozen=True)
class LinearSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    unknown_order: tuple = UNKNOWN_ORDER


def _accumulate(row, rhs_acc, entry, coeff):
    """Add ``coeff * entry`` to the row; fixed amplitudes move to the rhs."""
    if isinstance(entry, str):
        row[_INDEX[entry]] += coeff
        return rhs_acc
    return rhs_acc - coeff * entry


def _rows(ctx: ScatteringContext):
    p = ctx.params
    ansatz = _ANSATZ[ctx.port]
    coupling = {Direction.LEFT: math.sqrt(p.gamma1), Direction.RIGHT: math.sqrt(p.gamma2)}
    e_phi = cmath.exp(1j * ctx.phi)
    # plane-wave factor at each site: e^{+ikx} for right movers, e^{-ikx} for left
    wave = {
        (0, Direction.RIGHT): 1.0, (0, Direction.LEFT): 1.0,
        (1, Direction.RIGHT): e_phi, (1, Direction.LEFT): 1.0 / e_phi,
    }
    # -i d/dx for right movers, +i d/dx for left movers
    jump_sign = {Direction.RIGHT: -1j, Direction.LEFT: 1j}
    atom_unknown = ("u1", "u2")

    matrix, rhs = [], []
    for site, wg, d in _JUMP_ROWS:
        row = [0j] * 10
        before, after = ansatz[(wg, d)][site], ansatz[(wg, d)][site + 1]
        factor = jump_sign[d] * wave[(site, d)]
        acc = _accumulate(row, 0j, after, factor)
        acc = _accumulate(row, acc, before, -factor)
        row[_INDEX[atom_unknown[site]]] += coupling[d]
        matrix.append(row)
        rhs.append(acc)

    detunings = (ctx.epsilon - p.omega1, ctx.epsilon - p.omega2)
    for site in (0, 1):
        row = [0j] * 10
        row[_INDEX[atom_unknown[site]]] += -detunings[site]
        row[_INDEX[atom_unknown[1 - site]]] += -p.xi
        acc = 0j
        for (wg, d), regions in ansatz.items():
            coeff = -0.5 * coupling[d] * wave[(site, d)]
            acc = _accumulate(row, acc, regions[site], coeff)
            acc = _accumulate(row, acc, regions[site + 1], coeff)
        matrix.append(row)
        rhs.append(acc)
    return matrix, rhs


def build_system(ctx: ScatteringContext) -> LinearSystem:
    """Assemble the 10x10 complex system for the injection port in ``ctx``.

    Atom frequencies are read from ``ctx.params`` individually, so
    non-degenerate atoms are supported (use ``model.general_context``).
    """
    matrix, rhs = _rows(ctx)
    return LinearSystem(np.array(matrix, dtype=complex), np.array(rhs, dtype=complex))


def eliminate(matrix, rhs):
    """Gaussian elimination with partial pivoting on a dense complex system.

    Works on plain Python lists (faster than numpy for n ~ 10). Returns the
    solution list and the list of pivot magnitudes in elimination order.
    Raises SingularSystem when a pivot drops below ``1e-14 * ||A||_inf``.
    """
    a = [list(map(complex, r)) for r in matrix]
    b = [complex(v) for v in rhs]
    n = len(a)
    norm = max((sum(abs(v) for v in r) for r in a), default=0.0)
    floor = PIVOT_FLOOR * norm
    pivots = []
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(a[i][k]))
        piv_mag = abs(a[p][k])
        if piv_mag <= floor or piv_mag == 0.0:
            raise SingularSystem(f"pivot {piv_mag:.3e} in column {k} below {floor:.3e}")
        if p != k:
            a[k], a[p] = a[p], a[k]
            b[k], b[p] = b[p], b[k]
        pivots.append(piv_mag)
        row_k = a[k]
        inv = 1.0 / row_k[k]
        for i in range(k + 1, n):
            row_i = a[i]
            f = row_i[k] * inv
            if f == 0:
                continue
            row_i[k] = 0j
            for j in range(k + 1, n):
                row_i[j] -= f * row_k[j]
            b[i] -= f * b[k]
    x = [0j] * n
    for i in range(n - 1, -1, -1):
        row = a[i]
        s = b[i]
        for j in range(i + 1, n):
            s -= row[j] * x[j]
        x[i] = s / row[i]
    return x, pivots


def solve(system: LinearSystem) -> np.ndarray:
    """Solve ``system``; deterministic for identical inputs."""
    x, _ = eliminate(system.matrix.tolist(), system.rhs.tolist())
    return np.array(x, dtype=complex)


def pivot_ratio(pivots) -> float:
    """Smallest over largest pivot magnitude, a cheap conditioning proxy."""
    return min(pivots) / max(pivots)


@dataclass(frozen=True)
class OracleSolution:
    amplitudes: Amplitudes
    pivot_ratio: float


def solve_oracle(ctx: ScatteringContext) -> OracleSolution:
    """Solve the boundary-condition system and keep the conditioning proxy."""
    matrix, rhs = _rows(ctx)
    x, pivots = eliminate(matrix, rhs)
    return OracleSolution(Amplitudes(**dict(zip(UNKNOWN_ORDER, x))), pivot_ratio(pivots))


def amplitudes_oracle(ctx: ScatteringContext) -> Amplitudes:
    """All ten amplitudes from the exact linear solve."""
    return solve_oracle(ctx).amplitudes


def wavenumber(ctx: ScatteringContext) -> float:
    """Wave number k of the guided photon, fixed by ``k L = phi``.

    For tau = 0 there is no inner region and k = epsilon is used. For tau > 0
    this equals epsilon exactly when theta = omega_e * tau (mod 2 pi).
    """
    if ctx.params.tau == 0.0:
        return ctx.epsilon
    return ctx.phi / ctx.params.tau


def wavefunction(ctx: ScatteringContext, amps: Amplitudes, waveguide, direction, x: float) -> complex:
    """Photon amplitude of one guided field at position ``x``.

    At the coupling points x = 0 and x = L the mean of the one-sided limits
    is returned.
    """
    if not amps.has_inner:
        raise MissingInnerAmplitudes("wavefunction needs t12/r12 amplitudes from the oracle")
    waveguide = Waveguide(waveguide)
    direction = Direction(direction)
    regions = [getattr(amps, e) if isinstance(e, str) else e
               for e in _ANSATZ[ctx.port][(waveguide, direction)]]
    k = wavenumber(ctx)
    phase = cmath.exp((1j if direction is Direction.RIGHT else -1j) * k * x)
    length = ctx.params.tau
    if x < 0.0:
        value = regions[0]
    elif x == 0.0:
        inner = regions[1] if length > 0.0 else regions[2]
        value = 0.5 * (regions[0] + inner)
    elif x < length:
        value = regions[1]
    elif x == length:
        value = 0.5 * (regions[1] + regions[2])
    else:
        value = regions[2]
    return value * phase
