"""Independent brute-force references, computed with mpmath at 30 digits.

These deliberately share no code with the package: fixed, generous
truncations and straightforward loops.
"""

import mpmath

mpmath.mp.dps = 30


def _e(w):
    return mpmath.exp(2j * mpmath.pi * mpmath.mpc(w))


def qpoch_brute(x, q, terms=200):
    p = mpmath.mpc(1)
    for j in range(terms):
        p *= 1 - mpmath.mpc(x) * mpmath.mpc(q) ** j
    return complex(p)


def theta0_brute(z, tau, terms=120):
    x, q = _e(z), _e(tau)
    p = mpmath.mpc(1)
    for j in range(terms):
        p *= (1 - x * q**j) * (1 - q ** (j + 1) / x)
    return complex(p)


def egamma_brute(z, tau, sigma, terms=60):
    x, q, r = _e(z), _e(tau), _e(sigma)
    p = mpmath.mpc(1)
    for j in range(terms):
        for k in range(terms):
            p *= (1 - q ** (j + 1) * r ** (k + 1) / x) / (1 - q**j * r**k * x)
    return complex(p)
