import math

import mpmath
import numpy as np
import pytest

from specflow import modular
from specflow.criterion import bound, criterion_scan
from specflow.errors import AccuracyError, DomainError
from specflow.lfunc import LFunctionSpec

TAU = LFunctionSpec.modular_tau()


def _eta24_oracle(n_max):
    """q prod_{n <= n_max} (1 - q^n)^24 by repeated polynomial multiplication."""
    poly = np.zeros(n_max, dtype=object)
    poly[0] = 1
    for n in range(1, n_max):
        for _ in range(24):
            shifted = np.zeros(n_max, dtype=object)
            shifted[n:] = poly[: n_max - n]
            poly = poly - shifted
    return [0] + list(poly)  # index k holds tau(k)


def _lambda_oracle(s, terms=60):
    """Lambda(s) = int_1^inf f(iy) (y^{s-1} + y^{11-s}) dy at 30 digits."""
    tau = modular.ramanujan_tau(terms)
    with mpmath.workdps(30):
        s = mpmath.mpc(s)

        def f(y):
            return mpmath.fsum(tau[n] * mpmath.exp(-2 * mpmath.pi * n * y) for n in range(1, terms + 1))

        return complex(mpmath.quad(lambda y: f(y) * (y ** (s - 1) + y ** (11 - s)), [1, 2, 4, 8, 16]))


def test_tau_first_values():
    t = modular.ramanujan_tau(10)
    assert [t[n] for n in range(1, 6)] == [1, -24, 252, -1472, 4830]
    assert t[6] == t[2] * t[3] == -6048


def test_tau_against_product_oracle():
    oracle = _eta24_oracle(40)
    t = modular.ramanujan_tau(40)
    assert [t[n] for n in range(1, 41)] == oracle[1:41]


def test_tau_multiplicative_and_hecke():
    t = modular.ramanujan_tau(10000)
    for m in range(1, 101):
        for n in range(1, 101):
            if math.gcd(m, n) == 1:
                assert t[m * n] == t[m] * t[n]
    for p in (2, 3, 5):
        for r in range(1, 4):
            assert t[p ** (r + 1)] == t[p] * t[p**r] - p**11 * t[p ** (r - 1)]


def test_tau_limits():
    with pytest.raises(OverflowError):
        modular.ramanujan_tau(modular.TAU_N_MAX + 1)
    with pytest.raises(DomainError):
        modular.ramanujan_tau(0)
    with pytest.raises(IndexError):
        modular.ramanujan_tau(5)[6]


def test_completed_symmetry():
    assert abs(modular.completed_tau(4 + 3j) - modular.completed_tau(8 - 3j)) < 1e-8
    rng = np.random.default_rng(2)
    for _ in range(20):
        s = complex(rng.uniform(2, 10), rng.uniform(-40, 40))
        a, b = modular.completed_tau(s), modular.completed_tau(12 - s)
        assert abs(a - b) < 1e-8 * abs(a)


def test_completed_contour_independence():
    # a different rotation of the rays changes every node; the integral must not move
    for s in (6 + 3j, 6.01 + 30j, 7 - 45j, 5 + 80j):
        a = modular.completed_tau(s)
        b = modular.completed_tau(s, slack=9.0)
        assert abs(a - b) < 1e-9 * abs(a)


@pytest.mark.parametrize("s", [6.0, 6 + 5j, 8 + 2j, 3 - 4j])
def test_completed_against_quadrature(s):
    ref = _lambda_oracle(s)
    assert abs(modular.completed_tau(s) - ref) < 1e-10 * abs(ref)


def test_l_tau_direct_series():
    tau = modular.ramanujan_tau(100000).as_float()
    logn = np.log(np.arange(1, 100001, dtype=float))
    for s in (8.0, 8 + 5j, 9 - 20j):
        direct = (tau[1:] * np.exp(-s * logn)).sum()
        assert abs(modular.l_tau(s) - direct) < 1e-8


def test_l_tau_window():
    with pytest.raises(AccuracyError):
        modular.l_tau(6 + 150j)


def test_upsilon_tau_derivative():
    s = 6.5 + 20j
    val, der = modular.l_tau_and_derivative(s)
    h = 1e-5
    fd = (modular.l_tau(s + h) - modular.l_tau(s - h)) / (2 * h)
    assert abs(der - fd) < 1e-7 * abs(der)
    assert modular.upsilon_tau(s) == pytest.approx(der / val)


def test_first_zero_on_critical_line():
    zs = modular.tau_zero_ordinates(15.0)
    assert zs[0] == pytest.approx(9.22237939992110, abs=1e-8)
    assert all(abs(modular.hardy_tau(z)) * math.exp(0.5 * math.pi * z) < 1e-8 for z in zs)
    # Lambda(6 + it) is real
    assert abs(modular.completed_tau(6 + 11j).imag) < 1e-12 * abs(modular.completed_tau(6 + 11j))


def test_grand_criterion_right_of_line():
    rows = criterion_scan(TAU, 8.0, 25, 50, 0.5)
    near = criterion_scan(TAU, 6.01, 25, 50, 0.5)
    assert all(r.margin > 0 for r in rows)
    assert min(r.margin for r in rows) > min(r.margin for r in near)
    assert bound(TAU, 2 * math.pi) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DomainError):
        modular.grand_criterion_scan(5.9, (25, 30), 0.5)
    with pytest.raises(DomainError):
        modular.grand_criterion_scan(6.5, (25, 60), 0.5)
