"""Recover the inversion constants numerically from known transform pairs.

Every constant is solved for with the constant set to 1 and compared with the
value hard-wired in the package.  Usage: python3 scripts/calibrate_constants.py
"""

import argparse
import math

import numpy as np

from hyperdisk import radon_euclid as re_
from hyperdisk import radon_hyp as rh
from hyperdisk.abel import ABEL_CONSTANTS, abel_forward, abel_hyp_forward, abel_hyp_inverse, calibrate_abel_constant
from hyperdisk.radon_euclid import ImageGrid


def hyp_abel_constant(d, dt=0.005, tmax=7.0):
    t = 1 + dt * np.arange(int(round((tmax - 1) / dt)) + 1)
    F = lambda u: np.exp(-2 * u)
    raw = abel_hyp_inverse(abel_hyp_forward(F, d, t=t, tmax=tmax), d, constant=1.0).values
    sel = t <= 3
    return float(F(t[sel]) @ raw[sel] / (raw[sel] @ raw[sel]))


def profile_constants(step=0.01, qmax=7.0):
    grid = np.arange(0.0, qmax + step / 2, step)
    out = {}
    for d in (1, 2, 3):
        fh = abel_forward(lambda q: np.exp(-q * q), d, p=grid, qmax=qmax)
        inv = re_.invert_profile_even_d if d % 2 == 0 else re_.invert_profile_odd_d
        out[d] = 1.0 / inv(fh, d, constant=1.0)  # f(0) = 1
    return out


def bc_constant():
    f = rh.HypPhantom("radial-bump", 1.5)
    sino = rh.hyp_sinogram(f, 180, 0.01)
    grid = ImageGrid(3, 0.06)  # centre pixel at the origin
    rec = rh.bc_invert(sino, grid)
    return rh.BC_CONSTANT * rec.values[1, 1] / f(0.0)


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--skip-bc", action="store_true", help="skip the slower backprojection-operator constant")
    args = ap.parse_args()
    rows = []
    for d in (1, 2, 3):
        rows.append((f"abel c({d})", calibrate_abel_constant(d), ABEL_CONSTANTS[d]))
    for d in (1, 2):
        rows.append((f"hyperbolic abel c({d})", hyp_abel_constant(d), ABEL_CONSTANTS[d]))
    prof = profile_constants()
    rows.append(("even-d profile C1(2)", prof[2], re_.C1_EVEN[2]))
    rows.append(("odd-d profile C2(1)", prof[1], re_.C2_ODD[1]))
    rows.append(("odd-d profile C2(3)", prof[3], re_.C2_ODD[3]))
    if not args.skip_bc:
        rows.append(("L S B constant", bc_constant(), rh.BC_CONSTANT))
    print(f"{'constant':28s} {'calibrated':>16s} {'hard-wired':>16s} {'rel diff':>10s}")
    for name, got, ref in rows:
        print(f"{name:28s} {got:16.10f} {ref:16.10f} {abs(got - ref) / abs(ref):10.2e}")
    print(f"(-2/pi = {-2 / math.pi:.10f}, -4 pi^2 = {-4 * math.pi**2:.6f})")


if __name__ == "__main__":
    main()
