"""Return-probability asymptotics of the uniform nearest-neighbour walk.

Runs the exact sparse recursion out to a configurable horizon and compares
the n-step return probability against the closed-form n^-4 estimate, then
extends the picture to much larger n through the spectral decomposition
(batched eigenvalues on the quadrature grid), where the sparse recursion
would be too large.

Usage: python scripts/llt_trend.py [--q 2] [--n 100,200,400] [--big 1600,6400]
"""

import argparse

import numpy as np

from chamberwalks import limit, plancherel, weyl


def spectral_return_probabilities(q, ns, n_grid=512):
    grid = plancherel.QuadratureGrid(n_grid)
    t1, t2 = grid.torus_pairs()
    lams = []
    for lo in range(0, len(t1), 16384):
        g0, g1, g2 = plancherel._principal_generators(
            q, t1[lo:lo + 16384], t2[lo:lo + 16384]
        )
        m = (g0 + g1 + g2) / (3 * np.sqrt(q))
        lams.append(np.linalg.eigvalsh(m))
    lams = np.concatenate(lams)
    weight = 1.0 / plancherel._c_abs2(q, t1, t2)
    out = {}
    for n in ns:
        out[n] = float(
            np.mean(np.sum(lams ** n, axis=1) * weight) / (6 * q ** 3)
        )
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=float, default=2.0)
    ap.add_argument("--n", default="100,200,400")
    ap.add_argument("--big", default="1600,6400")
    args = ap.parse_args()

    ns = [int(s) for s in args.n.split(",") if s]
    big = [int(s) for s in args.big.split(",") if s]

    print(f"# q = {args.q}")
    print(f"{'n':>8} {'p_n(c,c)':>14} {'estimate':>14} {'ratio':>8} "
          f"{'(1-r)sqrt(n)':>12}")
    snaps = limit.exact_distribution(
        limit.simple_walk_spec(), max(ns), args.q, snapshots=ns
    )
    for n in ns:
        p = snaps[n].p_value(weyl.IDENTITY, args.q)
        est = limit.llt_estimate(weyl.IDENTITY, n, args.q)
        r = p / est
        print(f"{n:>8} {p:>14.6e} {est:>14.6e} {r:>8.4f} "
              f"{(1 - r) * n ** 0.5:>12.2f}")
    if big:
        spec = spectral_return_probabilities(args.q, big)
        for n in big:
            p = spec[n]
            est = limit.llt_estimate(weyl.IDENTITY, n, args.q)
            r = p / est
            print(f"{n:>8} {p:>14.6e} {est:>14.6e} {r:>8.4f} "
                  f"{(1 - r) * n ** 0.5:>12.2f}  (spectral)")


if __name__ == "__main__":
    main()
