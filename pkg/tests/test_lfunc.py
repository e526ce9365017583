import cmath
import math

import mpmath
import numpy as np
import pytest

from specflow import lfunc, primes
from specflow.errors import AccuracyError, DomainError, NearZeroError, PoleError, ZeroOnPathError
from specflow.lfunc import KAPPA, CharacterTable, LFunctionSpec

ZETA = LFunctionSpec.zeta()
DH = LFunctionSpec.davenport_heilbronn()
MOD5 = LFunctionSpec.dirichlet(CharacterTable.mod5())
RHO_DH = complex(0.8085171825, 85.6993484854)


@pytest.fixture(scope="module")
def big_primes():
    p = primes.sieve(10**7).astype(float)
    return p, np.log(p)


# ---------------------------------------------------------------------------
# characters and specs

def test_mod5_character_table():
    chi = CharacterTable.mod5()
    assert [chi(n) for n in range(1, 6)] == [1, 1j, -1j, -1, 0]
    assert chi.is_primitive() and not chi.is_real and chi.parity == 1
    assert abs(abs(chi.gauss_sum()) - math.sqrt(5)) < 1e-12
    assert chi.conjugate()(2) == -1j


def test_character_validation():
    with pytest.raises(DomainError):
        CharacterTable(5, (0, 1, 1, -1, 1))  # chi(2) chi(3) != chi(1)
    with pytest.raises(DomainError):
        CharacterTable(4, (0, 1, 0, 1j))
    with pytest.raises(DomainError):
        LFunctionSpec.dirichlet(CharacterTable.principal(4))


def test_kappa_closed_form():
    assert KAPPA == pytest.approx((math.sqrt(10 - 2 * math.sqrt(5)) - 2) / (math.sqrt(5) - 1), rel=1e-15)
    ref = (mpmath.sqrt(10 - 2 * mpmath.sqrt(5)) - 2) / (mpmath.sqrt(5) - 1)
    assert KAPPA == pytest.approx(float(ref), abs=1e-15)


def test_from_name():
    assert LFunctionSpec.from_name("dh") == DH
    assert LFunctionSpec.from_name("mod5") == MOD5
    with pytest.raises(DomainError):
        LFunctionSpec.from_name("nope")


# ---------------------------------------------------------------------------
# zeta

def test_zeta_known_values():
    assert lfunc.zeta_em(2) == pytest.approx(math.pi**2 / 6, abs=1e-13)
    assert abs(lfunc.zeta_em(complex(0.5, 14.134725))) < 1e-5
    with pytest.raises(PoleError):
        lfunc.zeta_em(1)
    with pytest.raises(AccuracyError):
        lfunc.evaluate(ZETA, complex(0.5, 3e4))
    with pytest.raises(DomainError):
        lfunc.evaluate(ZETA, complex(-0.5, 3))


def test_zeta_against_brute_series():
    s = 2 + 1j
    N = 10**6
    n = np.arange(1, N + 1, dtype=float)
    head = np.exp(-s * np.log(n)).sum()
    # Euler-Maclaurin tail of the remaining terms, error far below 1e-12
    tail = N ** (1 - s) / (s - 1) - N ** (-s) / 2 - s * N ** (-s - 1) / 12
    assert abs(lfunc.zeta_em(s) - (head + tail)) < 1e-8


@pytest.mark.parametrize("s", [0.5 + 100j, 0.3 + 5000j, 0.9 + 9999j, 0.5 + 1e-3j, 3 - 7j])
def test_zeta_against_mpmath(s):
    ref = complex(mpmath.zeta(s))
    assert abs(lfunc.zeta_em(s) - ref) < 1e-10


def test_zeta_derivative_finite_difference():
    for s in (0.5 + 20j, 0.7 + 300j, 2 + 1j):
        _, der = lfunc.zeta_and_derivative(s)
        h = 1e-5
        fd = (lfunc.zeta_em(s + h) - lfunc.zeta_em(s - h)) / (2 * h)
        assert abs(der - fd) < 1e-8 * max(1.0, abs(der))


def test_zeta_reflection_and_completed_symmetry():
    rng = np.random.default_rng(11)
    for _ in range(50):
        s = complex(rng.uniform(0.05, 0.95), rng.uniform(-60, 60))
        assert abs(lfunc.zeta_em(s.conjugate()) - lfunc.zeta_em(s).conjugate()) < 1e-12
        a = lfunc.completed(ZETA, s)
        b = lfunc.completed(ZETA, 1 - s)
        assert abs(a - b) < 1e-10 * max(1e-300, abs(a)) + 1e-14


def test_euler_product_consistency(big_primes):
    p, lp = big_primes
    x = p[-1] + 1
    rng = np.random.default_rng(3)
    for _ in range(20):
        s = complex(rng.uniform(1.5, 3), rng.uniform(-50, 50))
        direct = complex(-np.log1p(-np.exp(-s * lp)).sum())
        # primes beyond x weighted by the density 1/log t
        tail = complex(mpmath.expint(1, (s - 1) * math.log(x)))
        diff = direct + tail - cmath.log(lfunc.zeta_em(s))
        diff = complex(diff.real, (diff.imag + math.pi) % (2 * math.pi) - math.pi)
        assert abs(diff) < 1e-8


# ---------------------------------------------------------------------------
# Upsilon

def test_upsilon_at_two(big_primes):
    ups = lfunc.upsilon(ZETA, 2.0)
    assert ups.real == pytest.approx(-0.5699609930945, abs=1e-10)
    p, lp = big_primes
    x = p[-1] + 1
    direct = float((lp / (p * p - 1)).sum())
    # sum_{p > x} log p / p^2 = int dtheta / t^2 = 2/x - theta(x)/x^2 + O(|theta - t| / x^2)
    tail = 2 / x - float(lp.sum()) / x**2
    assert -ups.real == pytest.approx(direct + tail, abs=1e-8)


def test_upsilon_reflection_and_pole():
    s0 = 0.7 + 33.3j
    assert abs(lfunc.upsilon(ZETA, s0.conjugate()) - lfunc.upsilon(ZETA, s0).conjugate()) < 1e-12
    with pytest.raises(NearZeroError):
        lfunc.upsilon(ZETA, complex(0.5, 14.134725141734693))


# ---------------------------------------------------------------------------
# Hurwitz, Dirichlet, DH

def test_hurwitz_values():
    assert lfunc.hurwitz_zeta(3, 1.0) == pytest.approx(1.2020569031595942, abs=1e-13)
    assert lfunc.hurwitz_zeta(2, 0.5) == pytest.approx(math.pi**2 / 2, abs=1e-12)
    s, a = 0.5 + 10j, 0.2
    assert abs(lfunc.hurwitz_zeta(s, a) - complex(mpmath.zeta(s, a))) < 1e-9
    with pytest.raises(DomainError):
        lfunc.hurwitz_zeta(2, 1.5)


def test_dirichlet_mod5():
    assert lfunc.dirichlet_l(LFunctionSpec.dirichlet(CharacterTable.principal(1)), 2) == pytest.approx(math.pi**2 / 6)
    chi = CharacterTable.mod5()
    n = np.arange(1, 200001)
    vals = np.array([chi(int(k)) for k in range(5)])[n % 5]
    direct = complex((vals / n.astype(float) ** 2).sum())
    assert abs(lfunc.dirichlet_l(MOD5, 2) - direct) < 1e-10
    # Hurwitz route q^-s sum chi(a) zeta(s, a/q) as an independent oracle
    s = 0.5 + 10j
    hur = sum(chi(a) * lfunc.hurwitz_zeta(s, a / 5) for a in range(1, 5)) * 5 ** (-s)
    assert abs(lfunc.dirichlet_l(MOD5, s) - hur) < 1e-12


def test_dirichlet_functional_equation():
    conj = LFunctionSpec.dirichlet(CharacterTable.mod5().conjugate())
    eps = lfunc.root_number(MOD5)
    assert abs(abs(eps) - 1) < 1e-12
    for s in (0.5 + 10j, 0.2 + 3j, 0.9 - 40j):
        lhs = lfunc.completed(MOD5, s)
        rhs = eps * lfunc.completed(conj, 1 - s)
        assert abs(lhs - rhs) < 1e-9 * abs(lhs)


def test_mod5_reflection():
    conj = LFunctionSpec.dirichlet(CharacterTable.mod5().conjugate())
    s = 0.6 + 21j
    assert abs(lfunc.evaluate(MOD5, s.conjugate())[0] - lfunc.evaluate(conj, s)[0].conjugate()) < 1e-12


def test_dh_functional_equation_and_zero():
    a = lfunc.completed(DH, 0.3 + 2j)
    b = lfunc.completed(DH, 0.7 - 2j)
    assert abs(a - b) < 1e-10 * abs(a)
    rng = np.random.default_rng(5)
    for _ in range(50):
        s = complex(rng.uniform(0.05, 0.95), rng.uniform(-80, 80))
        a, b = lfunc.completed(DH, s), lfunc.completed(DH, 1 - s)
        assert abs(a - b) < 1e-10 * max(abs(a), 1e-300)
    assert abs(lfunc.dh(RHO_DH)) < 1e-6


def test_dh_direct_series():
    chi = CharacterTable.mod5()
    coeff = [0.0] + [chi(a).real + KAPPA * chi(a).imag for a in range(1, 5)]
    n = np.arange(1, 100001)
    c = np.array(coeff)[n % 5]
    direct = float((c / n.astype(float) ** 3).sum())
    assert lfunc.dh(3) == pytest.approx(direct, abs=1e-10)
    # D is real on the real axis and equals the kappa combination of L(s, X), L(s, conj X)
    conj = LFunctionSpec.dirichlet(chi.conjugate())
    s = 0.4 + 17j
    comb = 0.5 * (1 - 1j * KAPPA) * lfunc.evaluate(MOD5, s)[0] + 0.5 * (1 + 1j * KAPPA) * lfunc.evaluate(conj, s)[0]
    assert abs(lfunc.dh(s) - comb) < 1e-13


# ---------------------------------------------------------------------------
# continuous arg

def test_arg_far_right():
    for t in (3.0, 50.0, 9000.0):
        tr = lfunc.continuous_arg(ZETA, 10.0, t)
        assert abs(tr.arg_value) < 0.002
        assert tr.path_points == 1


def test_arg_jump_at_first_zero():
    a = lfunc.continuous_arg(ZETA, 0.5 + 1e-6, 14.0).arg_value
    b = lfunc.continuous_arg(ZETA, 0.5 + 1e-6, 14.3).arg_value
    # the smooth part changes by about -Im Upsilon * 0.3; the jump dominates
    assert abs((b - a) - math.pi) < 0.3


def test_arg_path_consistency():
    ser = lfunc.series_for(ZETA)
    for t in (25.3, 101.7, 2500.5):
        fixed = ser.path(t)
        a = lfunc._arg_path(fixed, 0.5 + 1e-6)[0]
        b = lfunc._arg_path(fixed, 0.5 + 1e-6, start=3.0)[0]
        assert abs(a - b) < 1e-9


def test_arg_matches_count_for_dh():
    th = lfunc.LFunctionSpec.davenport_heilbronn().theta_kind
    from specflow.specfun import rs_theta

    n85 = (rs_theta(th, 85.0) + lfunc.continuous_arg(DH, 0.5 + 1e-6, 85.0).arg_value) / math.pi
    n86 = (rs_theta(th, 86.0) + lfunc.continuous_arg(DH, 0.5 + 1e-6, 86.0).arg_value) / math.pi
    assert round(n86 - n85) == 2


def test_arg_zero_on_path():
    with pytest.raises(ZeroOnPathError):
        lfunc.continuous_arg(ZETA, 0.5, 14.134725141734693)


# ---------------------------------------------------------------------------
# prime zeta and phase sums

def test_prime_zeta_values():
    assert lfunc.prime_zeta(2).real == pytest.approx(0.4522474200410654985, abs=1e-12)
    # 2^20 P(20) = 1 + (2/3)^20 + (2/5)^20 + ...; the p = 3 term alone is 3.0e-4
    r = (lfunc.prime_zeta(20) * 2**20).real
    exact = float(sum((2 / p) ** 20 for p in primes.primes_up_to(1000)))
    assert r == pytest.approx(exact, rel=1e-10)
    assert 1 < r < 1 + 1.01 * (2 / 3) ** 20
    with pytest.raises(DomainError):
        lfunc.prime_zeta(0.4)


def test_prime_zeta_direct_sum(big_primes):
    p, lp = big_primes
    s = 2.5 + 3j
    direct = complex(np.exp(-s * lp).sum())
    assert abs(lfunc.prime_zeta(s) - direct) < 1e-9


def test_upsilon_prime_zeta():
    assert abs(lfunc.upsilon_prime_zeta(2) - lfunc.upsilon(ZETA, 2)) < 1e-8
    with pytest.raises(DomainError):
        lfunc.upsilon_prime_zeta(0.9)


def test_finite_phase_sum():
    assert lfunc.finite_phase_sum(20, 2, 0) == 0.0
    ref = lfunc.continuous_arg(ZETA, 2, 20).arg_value
    assert abs(lfunc.finite_phase_sum(20, 2, 10**5) - ref) < 1e-6


def test_finite_phase_sum_tail_bound():
    for E in (5.0, 40.0, 333.0):
        for N in (100, 1000, 10000):
            pN = float(primes.first_primes(N)[-1])
            d = abs(lfunc.finite_phase_sum(E, 2, N) - lfunc.finite_phase_sum(E, 2, 2 * N))
            assert d <= 2.0 * pN ** (1 - 2) / math.log(pN)
