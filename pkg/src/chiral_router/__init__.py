"""Single-photon scattering through two dipole-coupled atoms chirally coupled
to a pair of waveguides: analytical amplitudes, an exact linear-system solver,
nonreciprocity analysis, parameter sweeps and a CLI."""

from .closed_form import (Amplitudes, PortCoefficients, amplitudes_port1,
                          amplitudes_port2, coefficients)
from .errors import (ConflictError, ConservationViolation, DegeneratePoint, EmptyBox,
                     InvalidParameters, InvalidSpec, MissingInnerAmplitudes, SchemaError,
                     ScatteringError, SingularSystem, UnequalAtomFrequencies)
from .model import (EigenSpectrum, Port, ScatteringContext, SystemParams, context,
                    eigenspectrum, general_context)
from .oracle import amplitudes_oracle, build_system, solve, wavefunction
from .scattering import ContrastRatios, OperatingPoint, contrast
from .analysis import Peak, find_peaks
from .sweep import Axis, SweepResult, SweepSpec, run_sweep

__version__ = "0.1.0"
