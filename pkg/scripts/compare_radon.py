"""Cross-route comparison of the Radon inversions, Euclidean and hyperbolic.

Prints pointwise deviations between routes plus a small grid ladder for the
backprojection-operator route.  Usage: python3 scripts/compare_radon.py [--quick]
"""

import argparse
import time

import numpy as np

from hyperdisk import radon_euclid as re_
from hyperdisk import radon_hyp as rh


def euclid(n_grid):
    f = re_.EuclidPhantom("gaussian")
    sino = re_.sinogram(f, 180, 12.0, 0.01, support=f.support)
    grid = re_.ImageGrid(n_grid, 4.0)
    for tail in (0.0, None):
        rec = re_.invert_fractional(sino, grid, tail_width=tail)
        err = np.max(np.abs(rec.values - f(grid.points)))
        print(f"euclid fractional {n_grid}^2 tail={'off' if tail == 0 else 'on '}  max error {err:.2e}")
    pts = grid.points[:: n_grid // 8, :: n_grid // 8].ravel()
    pts = pts[np.abs(pts) < 2.5]
    d1 = np.array([re_.invert_d1(sino, x) for x in pts])
    print(f"euclid d1 route at {pts.size} points   max error {np.max(np.abs(d1 - f(pts))):.2e}")


def hyp(sizes, threads):
    f = rh.HypPhantom("radial-bump", 1.5)
    sino = rh.hyp_sinogram(f, 180, 0.01, threads=threads)
    for n in sizes:
        t0 = time.perf_counter()
        grid = re_.ImageGrid(n, 0.48)
        bc = rh.bc_invert(sino, grid, threads=threads)
        inside = rh._rho(grid.points) <= 1
        err = np.max(np.abs(bc.values - f(grid.points))[inside])
        print(f"hyp BC route {n}^2   max error on d(0,x)<=1 {err:.2e}  ({time.perf_counter() - t0:.1f}s)")
    pts = np.array([0.0, 0.2, 0.3j, -0.25 + 0.25j, 0.4])
    d1 = np.array([rh.hyp_invert_d1(sino, x) for x in pts])
    ab = np.array([rh.hyp_invert_d1_abel(sino, x) for x in pts])
    print(f"hyp d1 route       max error {np.max(np.abs(d1 - f(pts))):.2e}")
    print(f"hyp abel vs d1     max deviation {np.max(np.abs(ab - d1)):.2e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--quick", action="store_true", help="smaller grids")
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()
    euclid(128 if args.quick else 256)
    hyp((8, 16) if args.quick else (8, 16, 24), args.threads)


if __name__ == "__main__":
    main()
