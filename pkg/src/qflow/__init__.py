"""Probability currents of hydrogen-like atoms and the isotropic oscillator,
including the spin (Gordon) current and the Dirac 1s current."""

from qflow.currents import (
    NODE_TOLERANCE,
    ReferenceLabel,
    SpinVector,
    dirac_velocity,
    gordon_current_j2,
    reference_velocity,
    schrodinger_current_j1,
    total_current,
    velocity,
)
from qflow.eigenstates import (
    CartesianOscillatorState,
    DiracHydrogenState,
    HydrogenState,
    OscillatorState,
    QuantumNumbers,
    SchrodingerState,
    dirac_1s_radial,
    dirac_1s_state,
    dirac_angular_components,
    hydrogen_radial,
    hydrogen_state,
    oscillator_cartesian_state,
    oscillator_state,
)
from qflow.errors import DomainError, NodeError, NumericError, PoleError, QflowError
from qflow.geometry import SphericalPoint, SphericalVector
from qflow.units import UnitSystem, constants, convert_velocity

__version__ = "0.1.0"
