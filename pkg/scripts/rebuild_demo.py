"""Different matrices with the same l-th Green function.

Takes a random measure, rebuilds a Jacobi matrix for every choice of interior
poles at site l, and checks that all of them carry the same Green function.
Optionally dumps samples of Im G on a line above the real axis to CSV.
"""

import argparse
import csv

import numpy as np

from jacobikit import DiscreteMeasure, borel_transform, green, green_to_jacobi, neg_inverse
from jacobikit.green import interior_selections


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=5)
    ap.add_argument("--points", type=int, default=5)
    ap.add_argument("--l", type=int, default=3)
    ap.add_argument("--emit-csv", help="write x, Im G(x + 0.05i) samples here")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    pts = np.sort(rng.uniform(-2, 2, args.points))
    w = rng.uniform(0.5, 1.5, args.points)
    G = DiscreteMeasure(pts, w / w.sum())
    F = neg_inverse(G)
    np.set_printoptions(precision=5, suppress=True)
    print("Green measure points :", G.points)
    print("Green measure weights:", G.weights)
    print("poles of -1/G        :", F.poles)

    z = np.linspace(-3, 3, 7) + 0.5j
    target = borel_transform(G, z)
    for sel in interior_selections(range(F.poles.size), args.l - 1, 64):
        K = green_to_jacobi(G, args.l, sel)
        err = np.abs(green(K, args.l, z) - target).max()
        print(f"interior {sel}: q = {K.q}  b = {K.b}  Green mismatch {err:.1e}")

    if args.emit_csv:
        x = np.linspace(-3, 3, 601)
        vals = borel_transform(G, x + 0.05j)
        with open(args.emit_csv, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["x", "im_G"])
            out.writerows(zip(x, vals.imag))


if __name__ == "__main__":
    main()
