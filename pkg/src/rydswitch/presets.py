"""Parameter sets of the reported spectra (all rates in 2*pi x MHz).

The gate-off/gate-on pair quotes only the excited-state dephasing (0.07),
so the natural part of gamma_eg is taken as 3.0, the value used for the
bare-absorption and shifted-EIT spectra.
"""

from .core import LadderParams

DEFAULT_GAMMA_E = 3.0

#: Bare absorption, no coupling field.
ABSORPTION = LadderParams.from_linewidths(3.0, 1.0, omega_c=0.0, od=20.0, a0=0.04)

#: EIT with a fitted frequency shift.
EIT_SHIFTED = LadderParams.from_linewidths(3.0, 0.1, omega_c=11.0, od=20.0, a0=0.04, delta_shift=-3.2)

#: n = 50 spectrum without the gate field.
GATE_OFF = LadderParams(omega_c=6.8, gamma_e=DEFAULT_GAMMA_E, gamma_de=0.07, gamma_dr=0.03, od=8.0)

#: n = 50 spectrum with the gate field on.
GATE_ON = LadderParams(
    omega_c=5.0, gamma_e=DEFAULT_GAMMA_E, gamma_de=0.07, gamma_dr=2.5, od=8.0, delta_shift=0.5
)

#: Effective van der Waals coefficient (2*pi x GHz um^6) and coupling for n = 50.
C6_N50 = 32.0
OMEGA_C_N50 = 11.0

#: Exponential guide-curve parameters (A, t, y0).
CONTRAST_VS_BANDWIDTH = (0.73481, 2.45, 0.07865)
EIT_CONTRAST_VS_N = (-0.00327, -11.77, 0.94)
SWITCH_CONTRAST_VS_N = (-198.23, 7.0, 0.87)

#: Gate photon flux used in the experiment (photons per us).
GATE_FLUX = 15.5
