"""Compare two readings of the power (theta0(n tau, sigma) / theta0(tau, sigma))^(nz - 1).

"quotient" takes the principal log of the ratio; "split" subtracts the two
principal logs. The library uses the split form. This script counts how often
each one satisfies the second multiplication formula on a sample domain.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from ellipgamma.identities import SampleDomain, mult2_sides, relative_residual, sample_points
from ellipgamma.numerics import gamma_bar_quiet, principal_power, theta0


@dataclass
class BranchConfig:
    samples: int = 200
    seed: int = 42
    tol: float = 1e-9
    wide: bool = False


def quotient_residual(p) -> float:
    n = p.n
    lhs = gamma_bar_quiet(n * p.z, p.tau, p.sigma)
    for k in range(1, n):
        lhs *= gamma_bar_quiet(k / n, n * p.tau, p.sigma)
    rhs = principal_power(theta0(n * p.tau, p.sigma) / theta0(p.tau, p.sigma), n * p.z - 1)
    for k in range(n):
        rhs *= gamma_bar_quiet(p.z + k / n, n * p.tau, p.sigma)
    return relative_residual(lhs, rhs)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=BranchConfig.samples)
    ap.add_argument("--seed", type=int, default=BranchConfig.seed)
    ap.add_argument("--wide", action="store_true", help="allow Re tau, Re sigma in [-0.5, 0.5]")
    args = ap.parse_args()
    cfg = BranchConfig(args.samples, args.seed, wide=args.wide)
    domain = SampleDomain(n_values=(2, 3))
    if cfg.wide:
        domain = SampleDomain(n_values=(2, 3), re_tau=(-0.5, 0.5), re_sigma=(-0.5, 0.5))
    points = sample_points(domain, cfg.samples, cfg.seed)
    quotient = np.array([quotient_residual(p) for p in points])
    split = np.array([relative_residual(*mult2_sides(p)) for p in points])
    negative = np.array([theta0(p.tau, p.sigma).real < 0 for p in points])
    for name, res in (("quotient", quotient), ("split", split)):
        fails = int((res > cfg.tol).sum())
        print(f"{name:>9}: {fails:4d}/{len(points)} above {cfg.tol:g}, max {res.max():.2e}")
    print(f"points with Re theta0(tau, sigma) < 0: {int(negative.sum())}")
    worst = points[int(quotient.argmax())]
    print(f"worst quotient point: z={worst.z:.3f} tau={worst.tau:.3f} sigma={worst.sigma:.3f} n={worst.n}")


if __name__ == "__main__":
    main()
