"""Registry of identities as executable residual checks.

Each identity is an :class:`IdentitySpec` with two evaluators.  ``verify``
draws points from the identity's :class:`SampleDomain` with a seeded
generator and reports the worst relative residual
``|L - R| / (|L| + |R| + 1e-300)``.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import ParameterError, PoleProximity, TooManySkips
from .numerics import (
    DEFAULT_CONFIG,
    EvalConfig,
    elliptic_gamma,
    elliptic_number,
    euler_gamma,
    gamma_bar_quiet,
    principal_log,
    principal_power,
    q_gamma,
    q_number,
    qpochhammer,
    theta0,
)

DEFAULT_TOL = 1e-9
MAX_SKIP_FRACTION = 0.05
_TINY = 1e-300


@dataclass(frozen=True)
class Point:
    z: complex = 0j
    tau: complex = 1j
    sigma: complex = 1j
    n: int = 1
    m: int = 1

    def to_record(self) -> dict:
        return {
            "z": _c(self.z),
            "tau": _c(self.tau),
            "sigma": _c(self.sigma),
            "n": self.n,
            "m": self.m,
        }


def _c(w: complex) -> dict:
    return {"re": w.real, "im": w.imag}


@dataclass(frozen=True)
class SampleDomain:
    """Uniform boxes for z, tau, sigma plus integer choices for n and m."""

    re_z: tuple[float, float] = (0.05, 0.95)
    im_z: tuple[float, float] = (0.0, 0.25)
    im_tau: tuple[float, float] = (0.4, 1.5)
    im_sigma: tuple[float, float] = (0.4, 1.5)
    re_tau: tuple[float, float] = (0.0, 0.0)
    re_sigma: tuple[float, float] = (0.0, 0.0)
    n_values: tuple[int, ...] = (1,)
    m_values: tuple[int, ...] = (1,)
    excluded: Callable[[Point], bool] | None = None

    def __post_init__(self):
        if min(self.im_tau[0], self.im_sigma[0]) < DEFAULT_CONFIG.im_floor:
            raise ParameterError("sample domain leaves the convergence region")
        if not self.n_values or not self.m_values:
            raise ParameterError("n_values and m_values must be non-empty")

    def sample(self, rng: np.random.Generator) -> Point:
        # always draw every coordinate so the stream does not depend on the identity
        u = rng.uniform(size=6)
        n = self.n_values[int(rng.integers(len(self.n_values)))]
        m = self.m_values[int(rng.integers(len(self.m_values)))]

        def lerp(box, t):
            return box[0] + (box[1] - box[0]) * float(t)

        return Point(
            z=complex(lerp(self.re_z, u[0]), lerp(self.im_z, u[1])),
            tau=complex(lerp(self.re_tau, u[4]), lerp(self.im_tau, u[2])),
            sigma=complex(lerp(self.re_sigma, u[5]), lerp(self.im_sigma, u[3])),
            n=n,
            m=m,
        )

    def with_integers(self, n=None, m=None) -> "SampleDomain":
        changes = {}
        if n is not None:
            changes["n_values"] = (n,) if isinstance(n, int) else tuple(n)
        if m is not None:
            changes["m_values"] = (m,) if isinstance(m, int) else tuple(m)
        return replace(self, **changes)


STANDARD_DOMAIN = SampleDomain()
DEFAULT_INTEGERS = (1, 2, 3, 4)

Side = Callable[[Point, EvalConfig], complex]


@dataclass(frozen=True)
class IdentitySpec:
    name: str
    arity: tuple[str, ...]
    lhs: Side
    rhs: Side
    domain: SampleDomain = STANDARD_DOMAIN
    default_tol: float = DEFAULT_TOL
    description: str = ""


@dataclass
class IdentityReport:
    name: str
    n_samples: int
    seed: int
    max_rel_residual: float
    worst_point: Point | None
    passed: bool
    skipped: int
    tol: float
    n_values: tuple[int, ...] = ()
    m_values: tuple[int, ...] = ()

    def to_record(self) -> dict:
        res = self.max_rel_residual
        return {
            "name": self.name,
            "n": list(self.n_values),
            "m": list(self.m_values),
            "n_samples": self.n_samples,
            "seed": self.seed,
            "tol": self.tol,
            "max_rel_residual": res if math.isfinite(res) else str(res),
            "worst_point": self.worst_point.to_record() if self.worst_point else None,
            "skipped": self.skipped,
            "pass": self.passed,
        }


def relative_residual(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + _TINY)


def residual(spec: IdentitySpec, point: Point, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Relative residual of ``spec`` at ``point``; PoleProximity propagates."""
    return relative_residual(spec.lhs(point, cfg), spec.rhs(point, cfg))


def _residual_or_skip(spec: IdentitySpec, point: Point, cfg: EvalConfig) -> float | None:
    if spec.domain.excluded is not None and spec.domain.excluded(point):
        return None
    try:
        r = residual(spec, point, cfg)
    except PoleProximity:
        return None
    return r if math.isfinite(r) else math.inf


def sample_points(domain: SampleDomain, n_samples: int, seed: int) -> list[Point]:
    rng = np.random.default_rng(seed)
    return [domain.sample(rng) for _ in range(n_samples)]


def verify(
    spec: IdentitySpec,
    n_samples: int = 100,
    seed: int = 42,
    tol: float | None = None,
    cfg: EvalConfig = DEFAULT_CONFIG,
    workers: int = 1,
) -> IdentityReport:
    """Sample ``spec`` and report the worst residual.

    Results do not depend on ``workers``: points come from the seed up front
    and the maximum is taken in sample order.
    """
    if n_samples < 1:
        raise ParameterError("n_samples must be at least 1")
    tol = spec.default_tol if tol is None else tol
    points = sample_points(spec.domain, n_samples, seed)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            residuals = list(pool.map(lambda p: _residual_or_skip(spec, p, cfg), points))
    else:
        residuals = [_residual_or_skip(spec, p, cfg) for p in points]

    skipped = sum(r is None for r in residuals)
    if skipped > MAX_SKIP_FRACTION * n_samples:
        raise TooManySkips(f"{spec.name}: {skipped} of {n_samples} samples near a pole")
    worst, worst_point = -1.0, None
    for r, p in zip(residuals, points):
        if r is not None and r > worst:
            worst, worst_point = r, p
    return IdentityReport(
        name=spec.name,
        n_samples=n_samples,
        seed=seed,
        max_rel_residual=worst,
        worst_point=worst_point,
        passed=worst <= tol,
        skipped=skipped,
        tol=tol,
        n_values=spec.domain.n_values,
        m_values=spec.domain.m_values,
    )


# -- evaluators --------------------------------------------------------------

def _prod(values) -> complex:
    out = 1 + 0j
    for v in values:
        out *= v
    return out


def _sine_dup():
    lhs = lambda p, cfg: cmath.sin(2 * math.pi * p.z)
    rhs = lambda p, cfg: 2 * cmath.sin(math.pi * p.z) * cmath.sin(math.pi * (p.z + 0.5))
    return lhs, rhs


def _legendre():
    lhs = lambda p, cfg: euler_gamma(2 * p.z, cfg) * math.sqrt(math.pi)
    rhs = lambda p, cfg: (
        principal_power(2, 2 * p.z - 1) * euler_gamma(p.z, cfg) * euler_gamma(p.z + 0.5, cfg)
    )
    return lhs, rhs


def _askey():
    def lhs(p, cfg):
        return q_gamma(2 * p.z, p.tau, cfg) * q_gamma(0.5, 2 * p.tau, cfg)

    def rhs(p, cfg):
        two_q = q_number(2, p.tau)
        return (
            principal_power(two_q, 2 * p.z - 1)
            * q_gamma(p.z, 2 * p.tau, cfg)
            * q_gamma(p.z + 0.5, 2 * p.tau, cfg)
        )

    return lhs, rhs


def _theta_dup():
    lhs = lambda p, cfg: theta0(2 * p.z, p.tau, cfg)

    def rhs(p, cfg):
        shifts = (0, 0.5, p.tau / 2, (1 + p.tau) / 2)
        return _prod(theta0(p.z + s, p.tau, cfg) for s in shifts)

    return lhs, rhs


def _egamma(p: Point, z, cfg):
    return elliptic_gamma(z, p.tau, p.sigma, cfg)


def mult2_sides(p: Point, cfg: EvalConfig = DEFAULT_CONFIG) -> tuple[complex, complex]:
    """Both sides of the second multiplication formula at ``p`` (uses ``p.n``).

    The power of ``theta0(n tau, sigma) / theta0(tau, sigma)`` is taken as
    ``exp((nz - 1) (Log theta0(n tau, sigma) - Log theta0(tau, sigma)))``,
    the same principal logarithms that enter every ``gamma_bar`` factor.
    Taking the principal log of the quotient instead fails whenever the two
    arguments differ by more than pi.
    """
    n, z, tau, sigma = p.n, p.z, p.tau, p.sigma
    lhs = gamma_bar_quiet(n * z, tau, sigma, cfg) * _prod(
        gamma_bar_quiet(k / n, n * tau, sigma, cfg) for k in range(1, n)
    )
    log_ratio = principal_log(theta0(n * tau, sigma, cfg)) - principal_log(theta0(tau, sigma, cfg))
    rhs = cmath.exp((n * z - 1) * log_ratio) * _prod(
        gamma_bar_quiet(z + k / n, n * tau, sigma, cfg) for k in range(n)
    )
    return lhs, rhs


def _mult1():
    lhs = lambda p, cfg: _egamma(p, p.n * p.z, cfg)

    def rhs(p, cfg):
        n = p.n
        return _prod(
            _egamma(p, p.z + (k1 + k2 * p.tau + k3 * p.sigma) / n, cfg)
            for k1 in range(n)
            for k2 in range(n)
            for k3 in range(n)
        )

    return lhs, rhs


def _lemma1():
    lhs = lambda p, cfg: _egamma(p, p.z, cfg)

    def rhs(p, cfg):
        return _prod(
            elliptic_gamma(p.z + a * p.tau + b * p.sigma, p.m * p.tau, p.n * p.sigma, cfg)
            for a in range(p.m)
            for b in range(p.n)
        )

    return lhs, rhs


def _lemma2():
    def lhs(p, cfg):
        return _prod(elliptic_gamma(k * p.tau, p.n * p.tau, p.sigma, cfg) for k in range(1, p.n))

    def rhs(p, cfg):
        q = cmath.exp(2j * math.pi * p.tau)
        qn = cmath.exp(2j * math.pi * p.n * p.tau)
        return 1 / _prod(qpochhammer(q**k, qn, cfg) for k in range(1, p.n))

    return lhs, rhs


def _mult2():
    return (lambda p, cfg: mult2_sides(p, cfg)[0], lambda p, cfg: mult2_sides(p, cfg)[1])


_BASIC = {
    "sine_dup": (("z",), _sine_dup, "sin 2pi z = 2 sin pi z sin pi(z + 1/2)"),
    "legendre": (("z",), _legendre, "Gamma(2z) sqrt(pi) = 2^(2z-1) Gamma(z) Gamma(z + 1/2)"),
    "askey": (("z", "tau"), _askey, "q-gamma duplication with [2]_q"),
    "theta_dup": (("z", "tau"), _theta_dup, "theta0(2z) as a product of four shifted thetas"),
    "egamma_shift_sigma": (
        ("z", "tau", "sigma"),
        lambda: (lambda p, c: _egamma(p, p.z + p.sigma, c), lambda p, c: theta0(p.z, p.tau, c) * _egamma(p, p.z, c)),
        "Gamma(z + sigma) = theta0(z, tau) Gamma(z)",
    ),
    "egamma_shift_tau": (
        ("z", "tau", "sigma"),
        lambda: (lambda p, c: _egamma(p, p.z + p.tau, c), lambda p, c: theta0(p.z, p.sigma, c) * _egamma(p, p.z, c)),
        "Gamma(z + tau) = theta0(z, sigma) Gamma(z)",
    ),
    "egamma_period": (
        ("z", "tau", "sigma"),
        lambda: (lambda p, c: _egamma(p, p.z + 1, c), lambda p, c: _egamma(p, p.z, c)),
        "Gamma(z + 1) = Gamma(z)",
    ),
    "egamma_norm": (
        ("tau", "sigma"),
        lambda: (lambda p, c: _egamma(p, (p.tau + p.sigma) / 2, c), lambda p, c: 1 + 0j),
        "Gamma((tau + sigma)/2) = 1",
    ),
    "gammabar_shift": (
        ("z", "tau", "sigma"),
        lambda: (
            lambda p, c: gamma_bar_quiet(p.z + 1, p.tau, p.sigma, c),
            lambda p, c: elliptic_number(p.z, p.tau, p.sigma, c) * gamma_bar_quiet(p.z, p.tau, p.sigma, c),
        ),
        "Gammabar(z + 1) = [z]_ell Gammabar(z)",
    ),
    "gammabar_norm": (
        ("tau", "sigma"),
        lambda: (lambda p, c: gamma_bar_quiet(1, p.tau, p.sigma, c), lambda p, c: 1 + 0j),
        "Gammabar(1) = 1",
    ),
    "qgamma_shift": (
        ("z", "tau"),
        lambda: (lambda p, c: q_gamma(p.z + 1, p.tau, c), lambda p, c: q_number(p.z, p.tau) * q_gamma(p.z, p.tau, c)),
        "Gamma_q(z + 1) = [z]_q Gamma_q(z)",
    ),
}

_INDEXED = {
    "mult1": (("z", "tau", "sigma", "n"), _mult1, DEFAULT_INTEGERS, (1,), "first multiplication formula"),
    "mult2": (("z", "tau", "sigma", "n"), _mult2, (2, 3), (1,), "second multiplication formula"),
    "lemma1": (("z", "tau", "sigma", "m", "n"), _lemma1, DEFAULT_INTEGERS, DEFAULT_INTEGERS, "lattice refinement of Gamma"),
    "lemma2": (("tau", "sigma", "n"), _lemma2, (2, 3, 4), (1,), "product of Gamma(k tau, n tau, sigma)"),
}

REGISTRY_NAMES: tuple[str, ...] = tuple(_BASIC) + tuple(_INDEXED)


def get_identity(name: str, n=None, m=None, domain: SampleDomain = STANDARD_DOMAIN) -> IdentitySpec:
    """Build the registry entry ``name``, optionally fixing ``n`` and ``m``."""
    if name in _BASIC:
        arity, make, desc = _BASIC[name]
        lhs, rhs = make()
        return IdentitySpec(name, arity, lhs, rhs, domain, DEFAULT_TOL, desc)
    if name in _INDEXED:
        arity, make, n_default, m_default, desc = _INDEXED[name]
        for label, v in (("n", n), ("m", m)):
            vals = (v,) if isinstance(v, int) else (v or ())
            if any(int(k) < 1 for k in vals):
                raise ParameterError(f"{label} must be a positive integer")
        lhs, rhs = make()
        dom = domain.with_integers(n=n_default if n is None else n, m=m_default if m is None else m)
        return IdentitySpec(name, arity, lhs, rhs, dom, DEFAULT_TOL, desc)
    raise ParameterError(f"unknown identity {name!r}; choose from {', '.join(REGISTRY_NAMES)}")


def default_suite() -> list[tuple[str, dict]]:
    """The identity/parameter grid run by ``verify --all``."""
    suite: list[tuple[str, dict]] = [(name, {}) for name in _BASIC]
    suite += [("mult1", {"n": n}) for n in (1, 2, 3, 4)]
    suite += [("mult2", {"n": n}) for n in (2, 3)]
    suite += [("lemma1", {"m": m, "n": n}) for m, n in ((2, 2), (2, 3), (3, 2))]
    suite += [("lemma2", {"n": n}) for n in (2, 3, 4)]
    return suite


# -- invariants beyond plain residuals ----------------------------------------

def mult2_log_derivative(p: Point, cfg: EvalConfig = DEFAULT_CONFIG, h: float = 1e-4) -> float:
    """``|f'(z) / f(z)|`` for ``f = lhs / rhs`` by a symmetric difference."""
    def ratio(z):
        lhs, rhs = mult2_sides(replace(p, z=z), cfg)
        return lhs / rhs

    f0 = ratio(p.z)
    return abs((ratio(p.z + h) - ratio(p.z - h)) / (2 * h * f0))


def limit_trig_check(z, tau, sigma_im_list, cfg: EvalConfig = DEFAULT_CONFIG) -> list[float]:
    """``|Gammabar(z, tau, i s) - Gamma_q(z, tau)|`` for each ``s``."""
    s_list = list(sigma_im_list)
    if any(b <= a for a, b in zip(s_list, s_list[1:])):
        raise ParameterError("sigma_im_list must be strictly increasing")
    if any(s < 1 for s in s_list):
        raise ParameterError("every Im(sigma) must be at least 1")
    target = q_gamma(z, tau, cfg)
    return [abs(gamma_bar_quiet(z, tau, 1j * s, cfg) - target) for s in s_list]


def limit_rational_check(z, t_list, cfg: EvalConfig = DEFAULT_CONFIG) -> list[float]:
    """``|Gamma_q(z, i t) - Gamma(z)|`` for each ``t``."""
    t_list = list(t_list)
    if any(b >= a for a, b in zip(t_list, t_list[1:])):
        raise ParameterError("t_list must be strictly decreasing")
    if any(t < cfg.im_floor for t in t_list):
        raise ParameterError(f"every t must be at least im_floor = {cfg.im_floor}")
    target = euler_gamma(z, cfg)
    return [abs(q_gamma(z, 1j * t, cfg) - target) for t in t_list]


@dataclass
class LimitVerdict:
    decreasing: bool
    converged: bool
    final_ok: bool
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = (self.decreasing or self.converged) and self.final_ok


def limit_verdict(residuals: list[float], threshold: float, floor: float = 1e-12) -> LimitVerdict:
    """Strictly decreasing (or already at the noise ``floor``) and final below ``threshold``."""
    decreasing = all(b < a for a, b in zip(residuals, residuals[1:]))
    converged = all(r <= floor for r in residuals)
    return LimitVerdict(decreasing, converged, residuals[-1] <= threshold)
