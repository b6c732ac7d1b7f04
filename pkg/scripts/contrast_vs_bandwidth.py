"""Switch contrast of the gate-off/gate-on pair against biphoton bandwidth.

Propagates the exponential biphoton waveform through both media, prints the
contrast per bandwidth and fits y = A exp(-x/t) + y0 to the sweep. The
stored guide-curve values are printed alongside for comparison; the shape
of the measured waveform is not known, so only the trend is meant to agree.

    python3 scripts/contrast_vs_bandwidth.py --bandwidths 1 2 3 5 7 10 15 20
"""

import argparse

import numpy as np

from rydswitch import presets
from rydswitch.fitkit import FitFailure, FitProblem, exp_decay, lm_fit
from rydswitch.propagation import biphoton_pulse, check_resolution, waveform_switch_contrast


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bandwidths", type=float, nargs="+", default=[1, 2, 3, 5, 7, 10, 15, 20])
    ap.add_argument("--samples", type=int, default=2**17)
    ap.add_argument("--dt", type=float, default=2.0, help="ns")
    args = ap.parse_args()

    contrasts = []
    for bw in args.bandwidths:
        pulse = biphoton_pulse(bw, args.samples, args.dt)
        check_resolution(pulse, presets.GATE_OFF)
        contrasts.append(waveform_switch_contrast(pulse, presets.GATE_OFF, presets.GATE_ON))
        print(f"bandwidth {bw:6.2f}  contrast {contrasts[-1]:.4f}")

    x, y = np.array(args.bandwidths), np.array(contrasts)
    try:
        res = lm_fit(FitProblem(exp_decay, x, y, list(presets.CONTRAST_VS_BANDWIDTH)))
    except FitFailure as err:
        print(f"guide-curve fit failed: {err}")
        return
    a, t, y0 = res.params
    da, dt_, dy0 = res.uncertainties
    print(f"fit:    A = {a:.4f} +- {da:.4f}, t = {t:.3f} +- {dt_:.3f}, y0 = {y0:.4f} +- {dy0:.4f}")
    print("stored: A = {:.4f}, t = {:.3f}, y0 = {:.4f}".format(*presets.CONTRAST_VS_BANDWIDTH))


if __name__ == "__main__":
    main()
