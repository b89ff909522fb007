"""Exact checks of the product identities.

Two representations are used:

* ``FactorMultiset`` -- a product of terms ``1 - w^k q^alpha r^beta x^c``
  with rational ``alpha, beta`` kept exactly, ``w = exp(2 pi i / n)``.
  Gamma products are enumerated factor by factor up to ``alpha + beta <=
  cutoff`` and the two sides of an identity are compared as multisets.
* ``TruncatedBiseries`` -- an element of Z[[q, r]] truncated at total
  degree ``D`` with exact integer coefficients.

No floating point is used except in :func:`evaluate_multiset`, which exists
to bridge back to the numeric routines.
"""

from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import NotInvertible, ParameterError

NUMERATOR = "numerator"
DENOMINATOR = "denominator"


@dataclass(frozen=True, order=True)
class Factor:
    """One term ``1 - w^rootpow q^alpha r^beta x^xpow`` on a given side."""

    alpha: Fraction
    beta: Fraction
    xpow: int
    rootpow: int
    side: str

    def term(self) -> tuple:
        return (self.alpha, self.beta, self.xpow, self.rootpow)

    def to_record(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "xpow": self.xpow,
            "rootpow": self.rootpow,
            "side": self.side,
        }


@dataclass
class FactorMultiset:
    n: int
    cutoff: Fraction
    entries: Counter = field(default_factory=Counter)

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("root-of-unity order must be positive")
        self.cutoff = Fraction(self.cutoff)
        for f in self.entries:
            if f.alpha + f.beta > self.cutoff:
                raise ParameterError(f"factor {f} exceeds cutoff {self.cutoff}")
            if not 0 <= f.rootpow < self.n:
                raise ParameterError(f"rootpow {f.rootpow} not reduced mod {self.n}")
        self.entries = +canonical_counter(self.entries)

    def __iter__(self) -> Iterator[Factor]:
        return self.entries.elements()

    def __len__(self) -> int:
        return sum(self.entries.values())

    def is_empty(self) -> bool:
        return not self.entries

    def side(self, side: str) -> Counter:
        return Counter({f: c for f, c in self.entries.items() if f.side == side})

    def __add__(self, other: "FactorMultiset") -> "FactorMultiset":
        _check_compatible(self, other)
        return FactorMultiset(self.n, self.cutoff, self.entries + other.entries)

    def sorted_factors(self) -> list[Factor]:
        return sorted(self)


def canonical_counter(entries: Counter) -> Counter:
    """Cancel factors that appear on both sides of the fraction."""
    net: Counter = Counter()
    for f, c in entries.items():
        net[f.term()] += c if f.side == NUMERATOR else -c
    out: Counter = Counter()
    for (alpha, beta, xpow, rootpow), c in net.items():
        if c > 0:
            out[Factor(alpha, beta, xpow, rootpow, NUMERATOR)] = c
        elif c < 0:
            out[Factor(alpha, beta, xpow, rootpow, DENOMINATOR)] = -c
    return out


def canonicalize(ms: FactorMultiset) -> FactorMultiset:
    return FactorMultiset(ms.n, ms.cutoff, canonical_counter(ms.entries))


def _check_compatible(a: FactorMultiset, b: FactorMultiset) -> None:
    if a.n != b.n or a.cutoff != b.cutoff:
        raise ParameterError(
            f"incompatible multisets: (n={a.n}, cutoff={a.cutoff}) vs (n={b.n}, cutoff={b.cutoff})"
        )


def factors_of_gamma(
    shift: tuple, m: int = 1, n: int = 1, order: int = 1, cutoff=8
) -> FactorMultiset:
    """Factors of ``Gamma(z + c0 + c1 tau + c2 sigma, m tau, n sigma)``.

    ``z`` stays symbolic through ``x = e^{2 pi i z}``; ``e^{2 pi i c0}``
    becomes ``w^(c0 * order)``.  Only factors with ``alpha + beta <= cutoff``
    are kept.
    """
    c0, c1, c2 = (Fraction(c) for c in shift)
    cutoff = Fraction(cutoff)
    if m < 1 or n < 1 or order < 1:
        raise ParameterError("m, n and order must be positive integers")
    if cutoff <= 0:
        raise ParameterError("cutoff must be positive")
    for c in (c0, c1, c2):
        if order % c.denominator:
            raise ParameterError(f"denominator of {c} does not divide order {order}")
    if not (0 <= c1 <= m and 0 <= c2 <= n):
        raise ParameterError("shift must satisfy 0 <= c1 <= m and 0 <= c2 <= n")
    k0 = int(c0 * order) % order
    out: Counter = Counter()
    for j in _lattice(c1, m, cutoff):
        alpha = m * j + c1
        for k in _lattice(c2, n, cutoff - alpha):
            out[Factor(alpha, n * k + c2, 1, k0, DENOMINATOR)] += 1
    for j in _lattice(m - c1, m, cutoff):
        alpha = m * j + m - c1
        for k in _lattice(n - c2, n, cutoff - alpha):
            out[Factor(alpha, n * k + n - c2, -1, -k0 % order, NUMERATOR)] += 1
    return FactorMultiset(order, cutoff, out)


def _lattice(start: Fraction, step: int, bound: Fraction) -> range:
    # indices j >= 0 with start + step*j <= bound
    if start > bound:
        return range(0)
    return range(math.floor((bound - start) / step) + 1)


def _families(ms: FactorMultiset) -> tuple[Counter, Counter]:
    """Split into complete root-of-unity families and leftovers."""
    groups: dict[tuple, Counter] = {}
    for f, c in ms.entries.items():
        groups.setdefault((f.side, f.alpha, f.beta, f.xpow), Counter())[f.rootpow] += c
    collapsed: Counter = Counter()
    leftover: Counter = Counter()
    n = ms.n
    for (side, alpha, beta, xpow), by_root in groups.items():
        full = min(by_root.get(k, 0) for k in range(n))
        if full:
            collapsed[Factor(n * alpha, n * beta, n * xpow, 0, side)] += full
        for k, c in by_root.items():
            if c > full:
                leftover[Factor(alpha, beta, xpow, k, side)] += c - full
    return collapsed, leftover


def collapse_unity_roots(ms: FactorMultiset) -> FactorMultiset:
    """Apply ``prod_{k<n} (1 - w^k u) = 1 - u^n`` to every complete family.

    Exponents of a collapsed factor are multiplied by ``n``, so the cutoff of
    the result is ``n * ms.cutoff``.  Incomplete families are kept as they are.
    """
    if ms.n == 1:
        return ms
    collapsed, leftover = _families(ms)
    return FactorMultiset(ms.n, ms.n * ms.cutoff, collapsed + leftover)


def multiset_diff(a: FactorMultiset, b: FactorMultiset) -> tuple[FactorMultiset, FactorMultiset]:
    """Return ``(a - b, b - a)``; both are empty iff ``a == b``."""
    _check_compatible(a, b)
    return (
        FactorMultiset(a.n, a.cutoff, a.entries - b.entries),
        FactorMultiset(a.n, a.cutoff, b.entries - a.entries),
    )


def scale_x(ms: FactorMultiset, k: int) -> FactorMultiset:
    """Rewrite in terms of ``x^k``: the variable ``X`` of ``ms`` becomes ``x^k``."""
    out = Counter({Factor(f.alpha, f.beta, f.xpow * k, f.rootpow, f.side): c for f, c in ms.entries.items()})
    return FactorMultiset(ms.n, ms.cutoff, out)


def evaluate_multiset(ms: FactorMultiset, z: complex, tau: complex, sigma: complex) -> complex:
    """Numeric value of the product at ``x = e^{2 pi i z}``, ``q = e^{2 pi i tau}``, ..."""
    num = den = 1 + 0j
    for f, c in ms.entries.items():
        phase = f.rootpow / ms.n + float(f.alpha) * tau + float(f.beta) * sigma + f.xpow * z
        term = (1 - cmath.exp(2j * math.pi * phase)) ** c
        if f.side == NUMERATOR:
            num *= term
        else:
            den *= term
    return num / den


@dataclass
class VerificationResult:
    identity: str
    params: dict
    passed: bool
    first_mismatch: dict | None = None
    details: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "identity": self.identity,
            "params": self.params,
            "pass": self.passed,
            "first_mismatch": self.first_mismatch,
            **self.details,
        }


def _compare(identity: str, params: dict, lhs: FactorMultiset, rhs: FactorMultiset, **details) -> VerificationResult:
    lhs_only, rhs_only = multiset_diff(lhs, rhs)
    first = None
    if not lhs_only.is_empty():
        first = {"only_in": "lhs", "factor": lhs_only.sorted_factors()[0].to_record()}
    elif not rhs_only.is_empty():
        first = {"only_in": "rhs", "factor": rhs_only.sorted_factors()[0].to_record()}
    details.update(
        lhs_factors=len(lhs),
        rhs_factors=len(rhs),
        lhs_only=len(lhs_only),
        rhs_only=len(rhs_only),
    )
    passed = first is None and not details.get("incomplete_families")
    return VerificationResult(identity, params, passed, first, details)


def mult1_sides(n: int, cutoff) -> tuple[FactorMultiset, FactorMultiset, int]:
    """Both sides of the first multiplication formula as factor multisets.

    Returns ``(lhs, collapsed_rhs, incomplete)``, where ``incomplete`` counts
    right-hand factors that did not belong to a complete root-of-unity family.
    """
    cutoff = Fraction(cutoff)
    acc: Counter = Counter()
    for k1 in range(n):
        for k2 in range(n):
            for k3 in range(n):
                shift = (Fraction(k1, n), Fraction(k2, n), Fraction(k3, n))
                acc.update(factors_of_gamma(shift, 1, 1, order=n, cutoff=cutoff).entries)
    rhs = FactorMultiset(n, cutoff, acc)
    incomplete = sum(_families(rhs)[1].values()) if n > 1 else 0
    collapsed = collapse_unity_roots(rhs)
    # Gamma(nz) in its own variable X = x^n
    lhs = scale_x(factors_of_gamma((0, 0, 0), 1, 1, order=n, cutoff=n * cutoff), n)
    return lhs, collapsed, incomplete


def verify_mult1_formal(n: int, cutoff=8) -> VerificationResult:
    if n < 1:
        raise ParameterError("n must be a positive integer")
    if Fraction(cutoff) < 2:
        raise ParameterError("cutoff must be at least 2")
    lhs, rhs, incomplete = mult1_sides(n, cutoff)
    return _compare("mult1", {"n": n, "cutoff": str(Fraction(cutoff))}, lhs, rhs, incomplete_families=incomplete)


def lemma1_sides(m: int, n: int, cutoff) -> tuple[FactorMultiset, FactorMultiset]:
    lhs = factors_of_gamma((0, 0, 0), 1, 1, order=1, cutoff=cutoff)
    acc: Counter = Counter()
    for a in range(m):
        for b in range(n):
            acc.update(factors_of_gamma((0, a, b), m, n, order=1, cutoff=cutoff).entries)
    return lhs, FactorMultiset(1, Fraction(cutoff), acc)


def verify_lemma1_formal(m: int, n: int, cutoff=8) -> VerificationResult:
    if m < 1 or n < 1:
        raise ParameterError("m and n must be positive integers")
    lhs, rhs = lemma1_sides(m, n, cutoff)
    return _compare("lemma1", {"m": m, "n": n, "cutoff": str(Fraction(cutoff))}, lhs, rhs)


class TruncatedBiseries:
    """Element of Z[[q, r]] modulo monomials of total degree > D."""

    __slots__ = ("D", "coeffs")

    def __init__(self, D: int, coeffs: dict | None = None):
        if D < 0:
            raise ParameterError("truncation degree must be non-negative")
        self.D = D
        self.coeffs = {
            (i, j): int(c)
            for (i, j), c in (coeffs or {}).items()
            if c and i >= 0 and j >= 0 and i + j <= D
        }

    @classmethod
    def one(cls, D: int) -> "TruncatedBiseries":
        return cls(D, {(0, 0): 1})

    @classmethod
    def one_minus(cls, i: int, j: int, D: int) -> "TruncatedBiseries":
        """The binomial ``1 - q^i r^j``."""
        s = cls.one(D)
        if i + j <= D:
            s.coeffs[(i, j)] = s.coeffs.get((i, j), 0) - 1
            s.coeffs = {k: c for k, c in s.coeffs.items() if c}
        return s

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.coeffs.get(key, 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedBiseries):
            return NotImplemented
        return self.D == other.D and self.coeffs == other.coeffs

    def __mul__(self, other: "TruncatedBiseries") -> "TruncatedBiseries":
        return series_mul(self, other)

    def __repr__(self) -> str:
        terms = " + ".join(f"{c}*q^{i}*r^{j}" for (i, j), c in sorted(self.coeffs.items()))
        return f"TruncatedBiseries(D={self.D}, {terms or '0'})"

    def is_r_free(self) -> bool:
        return all(j == 0 for (_, j) in self.coeffs)

    def q_coefficients(self) -> list[int]:
        """Coefficients of ``q^0 .. q^D`` at r-degree 0."""
        return [self[(i, 0)] for i in range(self.D + 1)]

    def mul_one_minus(self, i: int, j: int) -> "TruncatedBiseries":
        """Multiply by ``1 - q^i r^j`` (fast path for product expansions)."""
        out = dict(self.coeffs)
        for (a, b), c in self.coeffs.items():
            if a + i + b + j <= self.D:
                key = (a + i, b + j)
                out[key] = out.get(key, 0) - c
        return TruncatedBiseries(self.D, out)


def _graded(D: int) -> Iterator[tuple[int, int]]:
    for d in range(D + 1):
        for i in range(d, -1, -1):
            yield (i, d - i)


def series_mul(a: TruncatedBiseries, b: TruncatedBiseries) -> TruncatedBiseries:
    if a.D != b.D:
        raise ParameterError(f"truncation degrees differ: {a.D} vs {b.D}")
    out: dict = {}
    for (i1, j1), c1 in a.coeffs.items():
        for (i2, j2), c2 in b.coeffs.items():
            if i1 + i2 + j1 + j2 <= a.D:
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
    return TruncatedBiseries(a.D, out)


def series_recip(a: TruncatedBiseries) -> TruncatedBiseries:
    """Exact reciprocal; the constant term must be a unit of Z."""
    c0 = a[(0, 0)]
    if c0 not in (1, -1):
        raise NotInvertible(f"constant term {c0} is not +-1")
    out: dict = {}
    for key in _graded(a.D):
        if key == (0, 0):
            out[key] = c0
            continue
        i, j = key
        acc = 0
        for (p, s), c in a.coeffs.items():
            if (p, s) != (0, 0) and p <= i and s <= j:
                acc += c * out.get((i - p, j - s), 0)
        # c0 is its own inverse
        out[key] = -c0 * acc
    return TruncatedBiseries(a.D, out)


def expand_product(binomials: Iterable[tuple[int, int]], D: int) -> TruncatedBiseries:
    """``prod (1 - q^i r^j)`` over the given exponent pairs, truncated at ``D``."""
    s = TruncatedBiseries.one(D)
    for i, j in binomials:
        if i + j <= D:
            s = s.mul_one_minus(i, j)
    return s


def lemma2_sides(n: int, D: int) -> tuple[TruncatedBiseries, TruncatedBiseries]:
    """Both sides of the Lemma-2 product identity as truncated series.

    The left side is enumerated from the factor multiset of
    ``Gamma(z, n tau, sigma)`` with ``x`` specialized to ``q^k``.
    """
    num: list[tuple[int, int]] = []
    den: list[tuple[int, int]] = []
    for k in range(1, n):
        # numerator exponents drop by k under x -> q^k, so enumerate past D
        ms = factors_of_gamma((0, 0, 0), n, 1, order=1, cutoff=D + k)
        for f, c in ms.entries.items():
            i = f.alpha + k * f.xpow
            if i.denominator != 1 or f.beta.denominator != 1 or i < 0:
                raise ParameterError(f"factor {f} does not specialize to an integer power series")
            (num if f.side == NUMERATOR else den).extend([(int(i), int(f.beta))] * c)
    lhs = expand_product(num, D) * series_recip(expand_product(den, D))
    rhs_den = [(n * j + k, 0) for k in range(1, n) for j in range((D - k) // n + 1) if n * j + k <= D]
    rhs = series_recip(expand_product(rhs_den, D))
    return lhs, rhs


def verify_lemma2_formal(n: int, D: int = 12) -> VerificationResult:
    if n < 1:
        raise ParameterError("n must be a positive integer")
    if D < 0:
        raise ParameterError("degree must be non-negative")
    params = {"n": n, "degree": D}
    if n == 1:
        # empty products on both sides
        return VerificationResult("lemma2", params, True, None, {"r_free": True, "coefficients": [1] + [0] * D})
    lhs, rhs = lemma2_sides(n, D)
    first = None
    for key in _graded(D):
        if lhs[key] != rhs[key]:
            first = {"q_degree": key[0], "r_degree": key[1], "lhs": lhs[key], "rhs": rhs[key]}
            break
    r_free = lhs.is_r_free()
    return VerificationResult(
        "lemma2",
        params,
        first is None and r_free,
        first,
        {"r_free": r_free, "coefficients": rhs.q_coefficients()},
    )
