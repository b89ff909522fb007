import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipgamma import (
    BranchWarning,
    DomainError,
    EvalConfig,
    ParameterError,
    PoleProximity,
    TermCapExceeded,
    UpperHalfPoint,
    elliptic_gamma,
    elliptic_number,
    euler_gamma,
    gamma_bar,
    nome,
    q_gamma,
    q_number,
    qpochhammer,
    theta0,
    truncation_order,
)
from ellipgamma.numerics import egamma_order, principal_log

from oracles import egamma_brute, qpoch_brute, theta0_brute

# frozen from oracles.qpoch_brute(0.1, 0.1, terms=30)
QPOCH_01_01 = 0.8900100999989989


def rel(a, b):
    return abs(a - b) / (abs(a) + abs(b) + 1e-300)


# -- nome / UpperHalfPoint ------------------------------------------------------

def test_nome_examples():
    assert nome(1j) == pytest.approx(1.8674427317e-3, rel=1e-10)
    assert nome(1j).imag == 0
    q = nome(0.5j)
    assert abs(q) == pytest.approx(math.exp(-math.pi), rel=1e-14)
    assert cmath.phase(q) == 0
    assert nome(0.5 + 1j) == pytest.approx(-math.exp(-2 * math.pi), rel=1e-13, abs=1e-18)


def test_nome_below_floor():
    with pytest.raises(DomainError):
        nome(0.01j)
    with pytest.raises(DomainError):
        UpperHalfPoint(-1j)


def test_upper_half_point_caches_nome():
    p = UpperHalfPoint(0.3 + 0.7j)
    assert p.nome == cmath.exp(2j * math.pi * (0.3 + 0.7j))
    assert abs(p.nome) < 1


def test_config_validation():
    with pytest.raises(ParameterError):
        EvalConfig(eps_rel=0)
    with pytest.raises(ParameterError):
        EvalConfig(eps_rel=1e-14)  # pole_guard must stay below eps_rel
    with pytest.raises(ParameterError):
        EvalConfig(im_floor=0)


# -- q-Pochhammer ---------------------------------------------------------------

def test_qpochhammer_trivial():
    assert qpochhammer(0, 0.3) == 1
    assert qpochhammer(1, 0.3) == 0
    assert qpochhammer(0.5, 0) == pytest.approx(0.5)


def test_qpochhammer_oracle():
    assert rel(qpochhammer(0.1, 0.1), QPOCH_01_01) < 1e-12


@pytest.mark.parametrize("x,q", [(0.3 + 0.4j, 0.5j), (2 - 1j, 0.7 * cmath.exp(0.4j)), (-0.9, 0.9)])
def test_qpochhammer_against_mpmath(x, q):
    ref = qpoch_brute(x, q, terms=2000)
    assert rel(qpochhammer(x, q), ref) < 2e-12


def test_qpochhammer_errors():
    with pytest.raises(DomainError):
        qpochhammer(0.5, 1.0)
    with pytest.raises(TermCapExceeded):
        qpochhammer(0.5, 0.999, EvalConfig(max_terms_per_axis=100))


# -- truncation order -----------------------------------------------------------

def test_truncation_order_examples():
    a = math.exp(-2 * math.pi)
    assert truncation_order(a, a, 1e-12) == (5, 5)
    assert truncation_order(1e-300, 1e-300, 1e-12) == (1, 1)
    assert truncation_order(0.0, 0.0, 1e-12) == (1, 1)
    assert truncation_order(0.1, 0.1, 0.5) == (1, 1)


@given(
    st.floats(1e-6, 0.99),
    st.floats(1e-6, 0.99),
    st.floats(1e-14, 0.9),
)
def test_truncation_order_is_minimal(qa, ra, eps):
    J, K = truncation_order(qa, ra, eps, max_terms=10**6)
    for a, n in ((qa, J), (ra, K)):
        assert a**n / (1 - a) <= eps / 4
        assert n == 0 or a ** (n - 1) / (1 - a) > eps / 4


def test_truncation_order_cap():
    with pytest.raises(TermCapExceeded):
        truncation_order(0.999, 0.5, 1e-12, max_terms=512)


# -- theta0 ---------------------------------------------------------------------

def test_theta0_examples():
    assert theta0(0, 1j) == 0
    z, tau = 0.3 + 0.1j, 0.8j
    assert rel(theta0(z + 1, tau), theta0(z, tau)) < 1e-13
    lhs = theta0(0.2 + 1j, 1j)
    rhs = -cmath.exp(-2j * math.pi * 0.2) * theta0(0.2, 1j)
    assert rel(lhs, rhs) < 1e-12


@pytest.mark.parametrize("z,tau", [(0.2, 1j), (0.3 + 0.1j, 0.5 + 0.6j), (-0.4 + 0.2j, 0.1 + 0.3j)])
def test_theta0_against_mpmath(z, tau):
    assert rel(theta0(z, tau), theta0_brute(z, tau, terms=400)) < 1e-11


# -- elliptic gamma -------------------------------------------------------------

def test_egamma_normalization():
    tau, sigma = 0.7j, 1.1j
    assert abs(elliptic_gamma((tau + sigma) / 2, tau, sigma) - 1) < 1e-12


def test_egamma_symmetric_example():
    z = 0.25 + 0.3j
    assert rel(elliptic_gamma(z, 0.6j, 0.9j), elliptic_gamma(z, 0.9j, 0.6j)) < 4e-12


def test_egamma_sigma_shift_example():
    z, tau, sigma = 0.2 + 0.4j, 0.8j, 0.5 + 0.8j
    ratio = elliptic_gamma(z + sigma, tau, sigma) / elliptic_gamma(z, tau, sigma)
    assert rel(ratio, theta0(z, tau)) < 1e-9


@pytest.mark.parametrize(
    "z,tau,sigma",
    [(0.31, 0.8j, 1.2j), (0.1 + 0.2j, 0.4j, 0.45j), (0.7 + 0.05j, 0.3 + 0.5j, -0.2 + 0.7j)],
)
def test_egamma_against_mpmath(z, tau, sigma):
    assert rel(elliptic_gamma(z, tau, sigma), egamma_brute(z, tau, sigma, terms=70)) < 2e-12


def test_egamma_pole():
    tau, sigma = 0.8j, 1.1j
    with pytest.raises(PoleProximity):
        elliptic_gamma(-tau - sigma, tau, sigma)
    with pytest.raises(PoleProximity):
        elliptic_gamma(2 - 2 * sigma, tau, sigma)


@pytest.mark.parametrize("j,k", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_egamma_zeros(j, k):
    tau, sigma = 0.7j, 0.9j
    assert abs(elliptic_gamma((j + 1) * tau + (k + 1) * sigma, tau, sigma)) < 1e-8


def test_egamma_order_override_and_doubling():
    z, tau, sigma = 0.4 + 0.1j, 0.5j, 0.6j
    x, q, r = cmath.exp(2j * math.pi * z), nome(tau), nome(sigma)
    J, K = egamma_order(x, q, r, EvalConfig())
    base = elliptic_gamma(z, tau, sigma)
    assert base == elliptic_gamma(z, tau, sigma, order=(J, K))
    assert rel(base, elliptic_gamma(z, tau, sigma, order=(2 * J, 2 * K))) <= 2e-12


def test_egamma_info_records_truncation():
    info = {}
    elliptic_gamma(0.3, 1j, 1j, info=info)
    assert info["J"] >= 5 and info["K"] >= 5


sample_z = st.builds(complex, st.floats(0.05, 0.95), st.floats(0.0, 0.25))
sample_im = st.floats(0.4, 1.5)


@settings(max_examples=60, deadline=None)
@given(sample_z, sample_im, sample_im)
def test_egamma_symmetry_property(z, a, b):
    g = elliptic_gamma(z, 1j * a, 1j * b)
    assert abs(g - elliptic_gamma(z, 1j * b, 1j * a)) <= 4e-12 * abs(g) + 1e-300


@settings(max_examples=60, deadline=None)
@given(sample_z, sample_im, sample_im)
def test_egamma_periodicity_property(z, a, b):
    assert rel(elliptic_gamma(z + 1, 1j * a, 1j * b), elliptic_gamma(z, 1j * a, 1j * b)) < 1e-13


@settings(max_examples=60, deadline=None)
@given(sample_z, sample_im, sample_im)
def test_egamma_functional_equations_property(z, a, b):
    tau, sigma = 1j * a, 1j * b
    g = elliptic_gamma(z, tau, sigma)
    assert rel(elliptic_gamma(z + sigma, tau, sigma), theta0(z, tau) * g) < 1e-9
    assert rel(elliptic_gamma(z + tau, tau, sigma), theta0(z, sigma) * g) < 1e-9


@settings(max_examples=40, deadline=None)
@given(sample_z, sample_im)
def test_theta0_periodicity_property(z, a):
    assert rel(theta0(z + 1, 1j * a), theta0(z, 1j * a)) < 1e-13


# -- normalized elliptic gamma --------------------------------------------------

def test_gamma_bar_examples():
    assert abs(gamma_bar(1, 0.9j, 1.3j) - 1) < 1e-10
    z, tau, sigma = 0.4, 0.7j, 1.2j
    ratio = gamma_bar(z + 1, tau, sigma) / gamma_bar(z, tau, sigma)
    assert rel(ratio, elliptic_number(z, tau, sigma)) < 1e-9
    assert abs(gamma_bar(0.3, 0.6j, 5j) - q_gamma(0.3, 0.6j)) < 1e-8


def test_gamma_bar_branch_warning():
    # theta0(1.2i, i) is about -2.50
    with pytest.warns(BranchWarning):
        gamma_bar(0.3, 1.2j, 1j)


def test_gamma_bar_degeneration_monotone():
    target = q_gamma(0.3, 0.6j)
    res = [abs(gamma_bar(0.3, 0.6j, 1j * s) - target) for s in (2, 3, 4, 5)]
    assert all(b < a for a, b in zip(res, res[1:]))


def test_principal_log_negative_zero():
    assert principal_log(complex(-1, -0.0)).imag == pytest.approx(math.pi)


# -- q-gamma, q-number, elliptic number -----------------------------------------

def test_q_gamma_examples():
    tau = 0.5j
    assert abs(q_gamma(1, tau) - 1) < 1e-12
    assert abs(q_gamma(2, tau) - 1) < 1e-12
    z = 0.7
    assert rel(q_gamma(z + 1, tau), q_number(z, tau) * q_gamma(z, tau)) < 1e-9


def test_q_gamma_against_mpmath():
    for t in (0.2, 0.1, 0.05):
        q = math.exp(-2 * math.pi * t)
        assert rel(q_gamma(0.5, 1j * t), complex(mpmath.qgamma(0.5, q))) < 1e-11


def test_q_gamma_pole():
    # q^z = 1 at z = 0
    with pytest.raises(PoleProximity):
        q_gamma(0, 0.5j)


def test_q_number_examples():
    assert q_number(1, 0.4j) == pytest.approx(1)
    assert q_number(0, 0.4j) == 0
    errs = [abs(q_number(2.5, 1j * t) - 2.5) for t in (0.1, 0.01)]
    assert errs[1] < errs[0]


def test_elliptic_number_examples():
    tau, sigma = 0.4j, 6j
    assert elliptic_number(1, tau, sigma) == pytest.approx(1, rel=1e-15)
    assert elliptic_number(0, tau, sigma) == 0
    assert abs(elliptic_number(0.35, tau, sigma) - q_number(0.35, tau)) < 1e-8


# -- Euler gamma ------------------------------------------------------------------

def test_euler_gamma_examples():
    assert euler_gamma(1) == pytest.approx(1, rel=1e-14)
    assert euler_gamma(5) == pytest.approx(24, rel=1e-14)
    assert euler_gamma(0.5) == pytest.approx(1.77245385090552, rel=1e-13)
    z = 2.3 + 1.1j
    assert rel(euler_gamma(z + 1), z * euler_gamma(z)) < 1e-13


def test_euler_gamma_accuracy_box():
    rng = np.random.default_rng(5)
    for _ in range(400):
        z = complex(rng.uniform(-10, 30), rng.uniform(-30, 30))
        ref = complex(mpmath.gamma(z))
        assert abs(euler_gamma(z) - ref) <= 1e-13 * abs(ref)


def test_euler_gamma_poles():
    for k in (0, -1, -7):
        with pytest.raises(PoleProximity):
            euler_gamma(k)
    # close to, but not on, a pole
    assert rel(euler_gamma(-3 + 1e-6), complex(mpmath.gamma(-3 + 1e-6))) < 1e-9


@settings(max_examples=30, deadline=None)
@given(sample_z, sample_im, sample_im)
def test_egamma_cauchy_riemann(z, a, b):
    # smoothness check only: d/dRe z and -i d/dIm z agree to finite-difference accuracy
    h = 1e-5
    f = lambda w: elliptic_gamma(w, 1j * a, 1j * b)  # noqa: E731
    dx = (f(z + h) - f(z - h)) / (2 * h)
    dy = (f(z + 1j * h) - f(z - 1j * h)) / (2j * h)
    assert abs(dx - dy) <= 1e-6 * (abs(dx) + abs(f(z)))
