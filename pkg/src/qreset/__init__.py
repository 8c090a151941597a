"""Exact simulation of discrete-time unitary dynamics with stochastic resetting."""

__version__ = "0.1.0"

from .linalg import SpectralDecomposition, gate_from_generator, hermitian_eig, one_norm, psd_sqrt
from .models import (
    GateModel,
    bell_circuit_unitary,
    entangling_generator,
    noninteracting_generator,
    up_up_state,
)
from .schedules import Deterministic, Explicit, Poisson, PowerLaw, parse_schedule
from .observables import CorrelationSet, concurrence, lqu, magnetization, zz_correlation
from .ensemble import build_density, evolve_until, renewal_density, step_probabilities
from .poisson import resonance_scan, steady_state_series, steady_state_solve, weak_reset_limit
