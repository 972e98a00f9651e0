import cmath
import math

import pytest
from hypothesis import assume, given, strategies as st

from chiral_router import (Amplitudes, ConservationViolation, DegeneratePoint, Port, SystemParams,
                           amplitudes_oracle, amplitudes_port1, amplitudes_port2, coefficients,
                           context)
from chiral_router.closed_form import amplitudes

from conftest import operating_points

# Frozen from numpy.linalg.solve on the 10x10 boundary system at
# gamma2=1.7, xi=2.3, Delta=-1.1, theta=2.0, tau=0.8 (port 1).
RANDOM_DRAW = SystemParams(100, 100, 2.3, 1.0, 1.7, 2.0, 0.8), 98.9
RANDOM_DRAW_OUTER = (
    0.6871929751988457 + 0.1716499127404203j,
    -0.4282473136536894 - 0.045818509805634754j,
    -0.31280702480115397 + 0.17164991274042024j,
    -0.4282473136536893 - 0.04581850980563484j,
)


def resonance_params(**kw):
    return SystemParams.from_chirality(100, 0.5, 2.38, **kw)


def test_decoupled_waveguide_transmits():
    p = SystemParams(100, 100, 1.3, 1e-8, 0.0, 0.7, 0.4)
    a = amplitudes_port1(context(p, 98.2))
    assert abs(a.t_a - 1) < 1e-6
    assert max(abs(a.r_a), abs(a.t_b), abs(a.r_b)) < 1e-6


def test_resonance_routes_to_port2():
    a = amplitudes_port1(context(resonance_params(), 100.5))
    assert abs(a.t_a - 1) < 1e-12
    assert max(abs(a.r_a), abs(a.t_b), abs(a.r_b)) < 1e-12


def test_resonance_from_port2():
    ctx = context(resonance_params(), 100.5, Port.PORT2)
    assert abs(amplitudes_port2(ctx).t_a) == pytest.approx(1, abs=1e-12)
    assert abs(amplitudes_oracle(ctx).t_a) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("xi", [0.0, 1.0, 5.0])
def test_one_sided_coupling_is_transparent(xi):
    p = SystemParams.from_chirality(100, xi, 0.0, theta=0.1 * math.pi)
    c = coefficients(amplitudes_port1(context(p, 103.4)), Port.PORT1)
    assert c.T_a == pytest.approx(1, abs=1e-9)


def test_random_draw_matches_frozen_solve():
    params, eps = RANDOM_DRAW
    a = amplitudes_port1(context(params, eps))
    for got, want in zip(a.outer, RANDOM_DRAW_OUTER):
        assert abs(got - want) < 1e-12


def test_coefficients_pure_transmission():
    c = coefficients(Amplitudes(1, 0, 0, 0), Port.PORT1)
    assert (c.T_a, c.R_a, c.T_b, c.R_b) == (1, 0, 0, 0)
    assert c.by_output_port() == {1: 0, 2: 1, 3: 0, 4: 0}


def test_coefficients_equal_split():
    c = coefficients(Amplitudes(0.5, 0.5, 0.5, 0.5), Port.PORT2)
    assert c.as_dict() == {"T_a": 0.25, "R_a": 0.25, "T_b": 0.25, "R_b": 0.25}
    assert c.total == 1
    assert c.out_port_map == {"T_a": 1, "R_a": 2, "T_b": 3, "R_b": 4}


def test_coefficients_reject_leaky_amplitudes():
    with pytest.raises(ConservationViolation):
        coefficients(Amplitudes(1, 0.5, 0, 0))


def test_degenerate_point_flagged():
    # G = 1, Delta = xi, phi = 0 gives 0/0
    p = SystemParams.from_chirality(100, 0.7, 1.0)
    with pytest.raises(DegeneratePoint):
        amplitudes_port1(context(p, 100.7))


def _closed_form_or_skip(ctx):
    try:
        return amplitudes(ctx)
    except DegeneratePoint:
        assume(False)


@given(operating_points(), st.sampled_from(list(Port)))
def test_conservation(point, port):
    params, eps = point
    a = _closed_form_or_skip(context(params, eps, port))
    assert abs(a.probability_sum() - 1) < 1e-10


@given(operating_points(), st.sampled_from(list(Port)))
def test_matches_oracle(point, port):
    params, eps = point
    ctx = context(params, eps, port)
    a, b = _closed_form_or_skip(ctx), amplitudes_oracle(ctx)
    scale = math.sqrt(b.probability_sum())
    assert max(abs(x - y) for x, y in zip(a.outer, b.outer)) / scale < 1e-9


@given(operating_points())
def test_reciprocal_without_chirality(point):
    params, eps = point
    params = params.replace(gamma2=params.gamma1)
    c1 = coefficients(_closed_form_or_skip(context(params, eps, Port.PORT1)), Port.PORT1)
    c2 = coefficients(_closed_form_or_skip(context(params, eps, Port.PORT2)), Port.PORT2)
    for name in ("T_a", "R_a", "T_b", "R_b"):
        assert getattr(c1, name) == pytest.approx(getattr(c2, name), abs=1e-12)


@given(operating_points())
def test_port_swap(point):
    params, eps = point
    assume(params.gamma2 > 0)
    swapped = params.replace(gamma1=params.gamma2, gamma2=params.gamma1)
    back = _closed_form_or_skip(context(params, eps, Port.PORT2))
    fwd = _closed_form_or_skip(context(swapped, eps, Port.PORT1))
    assert abs(back.t_a - fwd.t_a) < 1e-12
    assert abs(back.t_b - fwd.t_b) < 1e-12


@given(operating_points())
def test_reflection_phase_relation(point):
    params, eps = point
    fwd = _closed_form_or_skip(context(params, eps, Port.PORT1))
    back = _closed_form_or_skip(context(params, eps, Port.PORT2))
    phi = context(params, eps).phi
    assert abs(back.r_a - cmath.exp(-2j * phi) * fwd.r_a) < 1e-12


@given(operating_points(), st.sampled_from(list(Port)))
def test_theta_period(point, port):
    params, eps = point
    a = _closed_form_or_skip(context(params, eps, port))
    b = _closed_form_or_skip(context(params.replace(theta=params.theta + 2 * math.pi), eps, port))
    assert max(abs(x - y) for x, y in zip(a.outer, b.outer)) < 1e-10


@given(operating_points())
def test_delay_period(point):
    params, eps = point
    ctx = context(params, eps)
    assume(abs(ctx.delta_cap) > 0.1)
    later = params.replace(tau=params.tau + 2 * math.pi / abs(ctx.delta_cap))
    a = _closed_form_or_skip(ctx)
    b = _closed_form_or_skip(context(later, eps))
    assert max(abs(x - y) for x, y in zip(a.outer, b.outer)) < 1e-9
