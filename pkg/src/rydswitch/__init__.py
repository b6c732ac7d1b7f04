"""Rydberg-EIT single-photon switch: ladder master equation, EIT spectra,
wavepacket propagation, blockade radii and polarisation tomography."""

from .core import LadderParams, DensityMatrix, make_density, hermitian_sqrt
from .lindblad import hamiltonian, lindblad_dissipator, build_liouvillian, steady_state, weak_probe_coherence
from .optical_response import chi_dimensionless, transmission, transfer_amplitude, spectrum, group_delay
from .propagation import Pulse, biphoton_pulse, propagate, coincidence_histogram, waveform_switch_contrast
from .blockade import BlockadeInput, blockade_radius, c6_scaled, photons_per_sphere
from .quantum_state import (
    bell_density,
    simulate_counts,
    linear_inversion,
    mle_reconstruct,
    fidelity,
    visibility_fit,
    switch_contrast,
    eit_contrast,
)
from .fitkit import FitProblem, FitResult, lm_fit, simplex_fit, exp_decay, eit_model

__version__ = "0.1.0"
