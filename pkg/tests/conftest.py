import math

from hypothesis import strategies as st

from chiral_router import SystemParams

OMEGA_E = 100.0

gammas = st.floats(0.05, 5.0)
couplings = st.floats(0.0, 10.0)
detunings = st.floats(-50.0, 50.0)
phases = st.floats(0.0, 2 * math.pi)
delays = st.floats(0.0, 3.0)


@st.composite
def operating_points(draw):
    """(params, epsilon) with equal atom frequencies."""
    params = SystemParams(OMEGA_E, OMEGA_E, draw(couplings), 1.0, draw(st.floats(0.0, 5.0)),
                          draw(phases), draw(delays))
    return params, OMEGA_E + draw(detunings)
