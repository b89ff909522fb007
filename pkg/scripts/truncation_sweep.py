"""Chosen truncation orders versus the error actually observed when they are doubled.

Sweeps Im(tau) = Im(sigma) downward and, for each eps, reports (J, K), the
relative change of Gamma(z, tau, sigma) under (2J, 2K), and the wall time.
"""

import argparse
import cmath
import math
import time
from dataclasses import dataclass, field

from ellipgamma.errors import TermCapExceeded
from ellipgamma.identities import relative_residual
from ellipgamma.numerics import EvalConfig, egamma_order, elliptic_gamma, nome


@dataclass
class SweepConfig:
    z: complex = 0.37 + 0.11j
    im_values: list[float] = field(default_factory=lambda: [1.5, 1.0, 0.5, 0.25, 0.1, 0.05])
    eps_values: list[float] = field(default_factory=lambda: [1e-6, 1e-9, 1e-12, 1e-14])
    repeats: int = 20


def measure(z, t, eps, repeats):
    cfg = EvalConfig(eps_rel=eps, pole_guard=min(1e-13, eps / 10))
    tau = sigma = 1j * t
    x = cmath.exp(2j * math.pi * z)
    J, K = egamma_order(x, nome(tau), nome(sigma), cfg)
    start = time.perf_counter()
    for _ in range(repeats):
        g = elliptic_gamma(z, tau, sigma, cfg)
    elapsed = (time.perf_counter() - start) / repeats
    doubled = elliptic_gamma(z, tau, sigma, cfg, order=(2 * J, 2 * K))
    return J, K, relative_residual(g, doubled), elapsed


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=SweepConfig.repeats)
    args = ap.parse_args()
    cfg = SweepConfig(repeats=args.repeats)
    print(f"{'Im':>6} {'eps':>8} {'J':>5} {'K':>5} {'doubling':>10} {'time[ms]':>9}")
    for t in cfg.im_values:
        for eps in cfg.eps_values:
            try:
                J, K, change, sec = measure(cfg.z, t, eps, cfg.repeats)
            except TermCapExceeded as exc:
                print(f"{t:6.2f} {eps:8.0e}  {exc}")
                continue
            print(f"{t:6.2f} {eps:8.0e} {J:5d} {K:5d} {change:10.2e} {1e3 * sec:9.3f}")


if __name__ == "__main__":
    main()
