"""Round-trip and Plancherel errors of the disk Fourier transform over a grid ladder.

Writes a CSV table (default fourier_convergence.csv) and prints it.
Usage: python3 scripts/fourier_convergence.py [--test-fn radial-bump] [--threads 4]
"""

import argparse
import csv
import itertools
import time

import numpy as np

from hyperdisk.fourier import TEST_FUNCTION_KINDS, TestFunction, fourier_inverse, plancherel_defect, spectral_data
from hyperdisk.quadrature import disk_quadrature


def sample_points(radius, n=11):
    s = np.linspace(-radius, radius, n)
    z = (s[None, :] + 1j * s[:, None]).ravel()
    return z[np.abs(z) <= radius]


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--test-fn", default="radial-bump", choices=TEST_FUNCTION_KINDS)
    ap.add_argument("--r0", type=float, default=0.5)
    ap.add_argument("--lam-max", type=float, nargs="+", default=[5.0, 10.0, 20.0])
    ap.add_argument("--dlam", type=float, nargs="+", default=[0.2, 0.1, 0.05])
    ap.add_argument("--n-boundary", type=int, nargs="+", default=[32, 64])
    ap.add_argument("--threads", type=int, default=4)
    ap.add_argument("--out", default="fourier_convergence.csv")
    args = ap.parse_args()

    center = 0.2 - 0.1j if args.test_fn == "mobius-translated-bump" else 0j
    f = TestFunction(args.test_fn, args.r0, center)
    z = sample_points(f.support_radius)
    ref = f(z)
    q = disk_quadrature(r_max=f.support_radius)
    rows = []
    for lam_max, dlam, nb in itertools.product(args.lam_max, args.dlam, args.n_boundary):
        t0 = time.perf_counter()
        sd = spectral_data(f, lam_max, dlam, nb, q, threads=args.threads)
        err = float(np.max(np.abs(fourier_inverse(sd, z).real - ref)) / max(np.max(np.abs(ref)), 1e-300))
        rows.append(dict(lam_max=lam_max, dlam=dlam, n_boundary=nb, linf_rel_error=err,
                         plancherel_defect=plancherel_defect(f, sd, q), seconds=time.perf_counter() - t0))
        print("  ".join(f"{k}={v:.3g}" for k, v in rows[-1].items()), flush=True)
    with open(args.out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
