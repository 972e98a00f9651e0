import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from chiral_router import (MissingInnerAmplitudes, Port, SingularSystem, SystemParams,
                           amplitudes_oracle, amplitudes_port1, build_system, context,
                           general_context, solve, wavefunction)
from chiral_router.oracle import (UNKNOWN_ORDER, Direction, LinearSystem, Waveguide, eliminate,
                                  solve_oracle, wavenumber)

from conftest import operating_points


def test_identity_system():
    rhs = np.zeros(10, dtype=complex)
    rhs[3] = 1
    x = solve(LinearSystem(np.eye(10, dtype=complex), rhs, UNKNOWN_ORDER))
    assert np.array_equal(x, rhs)


def test_zero_row_is_singular():
    m = np.eye(10, dtype=complex)
    m[4] = 0
    with pytest.raises(SingularSystem):
        solve(LinearSystem(m, np.ones(10, dtype=complex), UNKNOWN_ORDER))


@pytest.mark.parametrize("seed", range(5))
def test_random_well_conditioned(seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(10, 10)) + 1j * rng.normal(size=(10, 10)) + 10 * np.eye(10)
    b = rng.normal(size=10) + 1j * rng.normal(size=10)
    x, pivots = eliminate(m, b)
    x = np.asarray(x)
    assert np.max(np.abs(m @ x - b)) < 1e-12 * np.max(np.sum(np.abs(m), axis=1))
    assert np.allclose(x, np.linalg.solve(m, b), atol=1e-13)
    assert len(pivots) == 10


def test_weakly_coupled_limit():
    p = SystemParams(100, 100, 0.8, 1e-10, 0.0, 0.3, 0.5)
    a = amplitudes_oracle(context(p, 101.0))
    assert abs(a.t_a - 1) < 1e-9 and abs(a.t12a - 1) < 1e-9
    for name in ("r_a", "r12a", "t_b", "r_b", "t12b", "r12b"):
        assert abs(getattr(a, name)) < 1e-9


def test_resonance_point():
    a = amplitudes_oracle(context(SystemParams.from_chirality(100, 0.5, 2.38), 100.5))
    assert abs(a.t_a - 1) < 1e-12
    assert max(abs(a.r_a), abs(a.t_b), abs(a.r_b)) < 1e-12


@given(operating_points(), st.sampled_from(list(Port)))
def test_residual(point, port):
    params, eps = point
    system = build_system(context(params, eps, port))
    x = solve(system)
    residual = np.abs(system.matrix @ x - system.rhs)
    row_norm = np.sum(np.abs(system.matrix), axis=1)
    assert np.all(residual < 1e-12 * row_norm)


@given(operating_points(), st.sampled_from(list(Port)))
def test_conservation(point, port):
    params, eps = point
    assert abs(amplitudes_oracle(context(params, eps, port)).probability_sum() - 1) < 1e-10


@given(operating_points())
def test_swap_symmetry(point):
    params, eps = point
    assume(params.gamma2 > 0)
    swapped = params.replace(gamma1=params.gamma2, gamma2=params.gamma1)
    back = amplitudes_oracle(context(params, eps, Port.PORT2))
    fwd = amplitudes_oracle(context(swapped, eps, Port.PORT1))
    assert abs(back.t_a - fwd.t_a) < 1e-12
    assert abs(back.t_b - fwd.t_b) < 1e-12


@given(operating_points(), st.sampled_from(list(Port)))
def test_depends_on_delay_only_through_phase(point, port):
    params, eps = point
    ctx = context(params, eps, port)
    markov = context(params.replace(tau=0.0, theta=ctx.phi), eps, port)
    a, b = amplitudes_oracle(ctx), amplitudes_oracle(markov)
    assert max(abs(x - y) for x, y in zip(a.outer, b.outer)) < 1e-10


def test_unequal_atoms_solvable():
    p = SystemParams(100.4, 99.6, 0.9, 1, 1.6, 0.2, 0.7)
    a = solve_oracle(general_context(p, 100.3)).amplitudes
    assert abs(a.probability_sum() - 1) < 1e-10


class TestWavefunction:
    ctx = context(SystemParams.from_chirality(100, 1.1, 1.7, theta=0.4, tau=0.6), 101.3)
    amps = amplitudes_oracle(ctx)

    def test_incident_wave(self):
        k = wavenumber(self.ctx)
        psi = wavefunction(self.ctx, self.amps, Waveguide.A, Direction.RIGHT, -5.0)
        assert psi == pytest.approx(np.exp(-5j * k), abs=1e-14)

    def test_no_incoming_in_b(self):
        assert wavefunction(self.ctx, self.amps, Waveguide.B, Direction.RIGHT, -2.0) == 0

    @pytest.mark.parametrize("wg", list(Waveguide))
    @pytest.mark.parametrize("direction", list(Direction))
    def test_constant_modulus_per_region(self, wg, direction):
        L = self.ctx.params.tau
        for xs in ((-3.0, -0.1), (0.1 * L, 0.9 * L), (L + 0.1, L + 4.0)):
            m = [abs(wavefunction(self.ctx, self.amps, wg, direction, x)) for x in xs]
            assert m[0] == pytest.approx(m[1], abs=1e-14)

    def test_needs_inner_amplitudes(self):
        with pytest.raises(MissingInnerAmplitudes):
            wavefunction(self.ctx, amplitudes_port1(self.ctx), Waveguide.A, Direction.RIGHT, 0.1)
