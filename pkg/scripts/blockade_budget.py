"""Blockade radius against coupling strength and the gate-photon budget.

Prints r_b over a range of coupling Rabi frequencies for the stored n = 50
C6, then the gate photons per sphere from the slow-light delay of the
gate-off medium for a few medium lengths.
"""

import argparse

import numpy as np

from rydswitch import presets
from rydswitch.blockade import BlockadeInput, blockade_radius, photons_per_sphere
from rydswitch.optical_response import group_delay


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c6", type=float, default=presets.C6_N50, help="2*pi x GHz um^6")
    ap.add_argument("--flux", type=float, default=presets.GATE_FLUX, help="photons per us")
    ap.add_argument("--lengths", type=float, nargs="+", default=[0.5, 1.0, 2.0, 3.0], help="medium length, mm")
    args = ap.parse_args()

    for omega_c in (2.0, 5.0, 6.8, 11.0, 20.0):
        r = blockade_radius(BlockadeInput(args.c6, 0.0, omega_c))
        print(f"omega_c {omega_c:5.1f}  r_b {r:.3f} um")

    r_n50 = blockade_radius(BlockadeInput(args.c6, 0.0, presets.OMEGA_C_N50))
    delay = group_delay(presets.GATE_OFF)
    print(f"\ngate-off group delay {delay:.1f} ns through the whole medium")
    for length_mm in args.lengths:
        per_um = delay / (length_mm * 1e3)
        n = photons_per_sphere(args.flux, r_n50, per_um)
        print(f"length {length_mm:4.1f} mm  delay {per_um:7.3f} ns/um  photons per sphere {n:.3f}")
    lo, hi = (np.array([1.0, 2.0]) / (args.flux * 2 * r_n50 * 1e-3))
    print(f"one to two photons per sphere needs {lo:.2f} to {hi:.2f} ns/um")


if __name__ == "__main__":
    main()
