"""Degree-one L-functions: zeta, Hurwitz zeta, Dirichlet L and Davenport-Heilbronn.

Every series here has periodic coefficients c_n = c_{n mod q}.  One
Euler-Maclaurin evaluator covers all of them:

    L(s) = sum_{n <= qN} c_n n^-s + q^-s sum_a c_a T(s, N + a/q),

where T(s, x) = sum_{m >= 0} (x + m)^-s is the usual EM tail with twelve
Bernoulli corrections.  The derivative is obtained term by term, so
log-derivatives never use finite differences.
"""
from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels, primes
from .errors import (
    AccuracyError,
    BranchError,
    DomainError,
    NearZeroError,
    PoleError,
    ZeroOnPathError,
)
from .specfun import LOG_PI, ThetaKind, bernoulli_numbers, log_gamma

# ordinates beyond this are out of the supported EM range
T_MAX = 2.0e4
EM_ORDER = 12
NEAR_ZERO_RADIUS = 1e-8
ARG_ANCHOR = 2.0
ARG_MIN_MODULUS = 1e-12

KAPPA = (math.sqrt(10.0 - 2.0 * math.sqrt(5.0)) - 2.0) / (math.sqrt(5.0) - 1.0)

_EM_COEFFS = tuple(
    float(bernoulli_numbers(2 * EM_ORDER)[2 * k] / math.factorial(2 * k)) for k in range(1, EM_ORDER + 1)
)
# first omitted correction, used for the error estimate
_EM_NEXT = float(bernoulli_numbers(2 * EM_ORDER + 2)[2 * EM_ORDER + 2] / math.factorial(2 * EM_ORDER + 2))


def em_cutoff(t: float) -> int:
    """Direct-sum length per residue class at ordinate t."""
    return max(50, math.ceil(1.3 * abs(t)))


# ---------------------------------------------------------------------------
# characters and specs


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class CharacterTable:
    """Dirichlet character mod q; ``values[n % q]`` is chi(n)."""

    q: int
    values: tuple[complex, ...]

    def __post_init__(self):
        if self.q < 1:
            raise DomainError("modulus must be >= 1")
        vals = tuple(complex(v) for v in self.values)
        if len(vals) != self.q:
            raise DomainError(f"need {self.q} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)
        for n, v in enumerate(vals):
            coprime = math.gcd(n, self.q) == 1
            if coprime and abs(abs(v) - 1.0) > 1e-12:
                raise DomainError(f"chi({n}) must be a root of unity")
            if not coprime and v != 0:
                raise DomainError(f"chi({n}) must vanish, gcd({n},{self.q}) > 1")
        for m in range(self.q):
            for n in range(self.q):
                a, b = vals[m], vals[n]
                if a and b and abs(vals[(m * n) % self.q] - a * b) > 1e-12:
                    raise DomainError("character is not completely multiplicative")

    def __call__(self, n: int) -> complex:
        return self.values[n % self.q]

    @classmethod
    def principal(cls, q: int) -> "CharacterTable":
        return cls(q, tuple(1.0 if math.gcd(n, q) == 1 else 0.0 for n in range(q)))

    @classmethod
    def mod5(cls) -> "CharacterTable":
        """The odd quartic character mod 5 with chi(2) = i."""
        return cls(5, (0, 1, 1j, -1j, -1))

    @classmethod
    def legendre(cls, p: int) -> "CharacterTable":
        """Quadratic character (n/p) for an odd prime p."""
        if p < 3 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
            raise DomainError("legendre symbol needs an odd prime")
        squares = {(k * k) % p for k in range(1, p)}
        return cls(p, tuple(0 if n == 0 else (1 if n in squares else -1) for n in range(p)))

    def conjugate(self) -> "CharacterTable":
        return CharacterTable(self.q, tuple(v.conjugate() for v in self.values))

    @property
    def is_principal(self) -> bool:
        return all(v == 0 or abs(v - 1) < 1e-12 for v in self.values)

    @property
    def is_real(self) -> bool:
        return all(abs(v.imag) < 1e-12 for v in self.values)

    @property
    def parity(self) -> int:
        """0 for even characters, 1 for odd ones."""
        if self.q == 1:
            return 0
        return 0 if abs(self.values[self.q - 1] - 1) < 1e-12 else 1

    def is_primitive(self) -> bool:
        if self.q == 1:
            return True
        for d in _divisors(self.q)[:-1]:
            # induced from mod d iff chi(a) = 1 whenever a = 1 (mod d)
            if all(self.values[a] == 0 or abs(self.values[a] - 1) < 1e-12 for a in range(1, self.q, d) if a % d == 1 % d):
                return False
        return True

    def gauss_sum(self) -> complex:
        return sum(v * cmath.exp(2j * math.pi * n / self.q) for n, v in enumerate(self.values))

    def root_number(self) -> complex:
        """W(chi) in Lambda(s, chi) = W(chi) Lambda(1 - s, conj chi)."""
        return self.gauss_sum() / ((1j) ** self.parity * math.sqrt(self.q))


FAMILIES = ("zeta", "dirichlet", "davenport_heilbronn", "modular_tau")


@dataclass(frozen=True)
class LFunctionSpec:
    """Which L-function to evaluate."""

    family: str = "zeta"
    q: int = 1
    character: Optional[CharacterTable] = None
    weight: int = 12

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "zeta" and (self.q != 1 or self.character is not None):
            raise DomainError("zeta has modulus 1 and no character")
        if self.family == "dirichlet":
            if self.character is None:
                raise DomainError("dirichlet family needs a character")
            if self.character.q != self.q:
                raise DomainError("character modulus does not match q")
            if not self.character.is_primitive():
                raise DomainError("only primitive characters are supported")
        if self.family == "davenport_heilbronn":
            if self.q != 5 or self.character != CharacterTable.mod5():
                raise DomainError("davenport_heilbronn is fixed to q = 5 and the quartic character")
        if self.family == "modular_tau" and self.weight != 12:
            raise DomainError("only the weight-12 discriminant form is implemented")

    @classmethod
    def zeta(cls) -> "LFunctionSpec":
        return cls("zeta")

    @classmethod
    def dirichlet(cls, character: CharacterTable) -> "LFunctionSpec":
        return cls("dirichlet", character.q, character)

    @classmethod
    def davenport_heilbronn(cls) -> "LFunctionSpec":
        return cls("davenport_heilbronn", 5, CharacterTable.mod5())

    @classmethod
    def modular_tau(cls) -> "LFunctionSpec":
        return cls("modular_tau", 1, None, 12)

    @classmethod
    def from_name(cls, name: str) -> "LFunctionSpec":
        key = name.lower().replace("-", "_")
        if key == "zeta":
            return cls.zeta()
        if key in ("dh", "davenport_heilbronn"):
            return cls.davenport_heilbronn()
        if key in ("modular", "modular_tau", "tau"):
            return cls.modular_tau()
        if key in ("mod5", "dirichlet5"):
            return cls.dirichlet(CharacterTable.mod5())
        raise DomainError(f"unknown family name {name!r}")

    @property
    def theta_kind(self) -> ThetaKind:
        if self.family == "zeta":
            return ThetaKind.zeta()
        if self.family == "davenport_heilbronn":
            return ThetaKind.dh()
        if self.family == "dirichlet":
            return ThetaKind.dirichlet(self.q, self.character.parity)
        return ThetaKind.modular(self.weight)

    @property
    def has_pole(self) -> bool:
        return self.family == "zeta"

    @property
    def zero_offset(self) -> float:
        """c in the zero condition theta + arg L = (n - c) pi."""
        return 1.5 if self.has_pole else 0.5

    @property
    def real_on_line(self) -> bool:
        """True when theta + arg L is a multiple of pi on the critical line."""
        if self.family in ("zeta", "davenport_heilbronn"):
            return True
        return self.family == "dirichlet" and self.character.is_real

    def coefficients(self) -> np.ndarray:
        """One period (c_1, ..., c_q) of the Dirichlet coefficients."""
        if self.family == "zeta":
            return np.array([1.0 + 0j])
        if self.family == "dirichlet":
            vals = self.character.values
            return np.array([vals[n % self.q] for n in range(1, self.q + 1)], dtype=complex)
        if self.family == "davenport_heilbronn":
            chi = CharacterTable.mod5()
            # 1/2(1 - i kappa) chi + 1/2(1 + i kappa) conj chi = Re chi + kappa Im chi
            return np.array([chi(n).real + KAPPA * chi(n).imag for n in range(1, 6)], dtype=complex)
        raise DomainError("modular_tau has no periodic coefficients")


# ---------------------------------------------------------------------------
# the periodic Euler-Maclaurin evaluator

_log_lock = threading.Lock()
_log_table = np.zeros(0)


def _logs(count: int) -> np.ndarray:
    """log(1..count), from a shared table that only grows."""
    global _log_table
    if _log_table.shape[0] < count:
        with _log_lock:
            if _log_table.shape[0] < count:
                size = max(count, 2 * _log_table.shape[0], 4096)
                tab = np.log(np.arange(1, size + 1, dtype=float))
                tab.setflags(write=False)
                _log_table = tab
    return _log_table[:count]


def _phi1(u: complex, L: float) -> tuple[complex, complex]:
    """(e^{-uL} - 1)/u and its u-derivative, stable for small u."""
    z = -u * L
    if abs(z) > 0.5:
        e = cmath.exp(z)
        return (e - 1.0) / u, (-L * e * u - (e - 1.0)) / (u * u)
    # g(z) = (e^z - 1)/z and g'(z) by Taylor series
    g = 0j
    dg = 0j
    term = 1.0 + 0j  # z^m/(m+1)!
    dterm = 0.5 + 0j  # (m+1) z^m/(m+2)!
    for m in range(30):
        g += term
        dg += dterm
        term = term * z / (m + 2)
        dterm = dterm * z * (m + 2) / ((m + 1) * (m + 3))
        if abs(term) < 1e-18:
            break
    return -L * g, L * L * dg


def em_tail(s: complex, x: float, with_pole: bool = True) -> tuple[complex, complex]:
    """sum_{m>=0} (x+m)^-s by Euler-Maclaurin, and its s-derivative.

    With ``with_pole=False`` the x^{1-s}/(s-1) term is left out.
    """
    logx = math.log(x)
    xs = cmath.exp(-s * logx)
    val = 0.5 * xs
    der = -0.5 * logx * xs
    if with_pole:
        if s == 1:
            raise PoleError("pole at s = 1")
        pole = xs * x / (s - 1.0)
        val += pole
        der += pole * (-logx - 1.0 / (s - 1.0))
    poch = s
    dpoch = 1.0 + 0j
    pw = xs / x
    inv2 = 1.0 / (x * x)
    for k, c in enumerate(_EM_COEFFS, start=1):
        val += c * poch * pw
        der += c * (dpoch - logx * poch) * pw
        a, b = s + (2 * k - 1), s + 2 * k
        dpoch = dpoch * a * b + poch * (a + b)
        poch = poch * a * b
        pw = pw * inv2
    return val, der


def em_error_estimate(s: complex, x: float) -> float:
    """Size of the first omitted EM correction at (s, x)."""
    poch = 1.0
    for j in range(2 * EM_ORDER + 1):
        poch *= abs(s + j)
    return abs(_EM_NEXT) * poch * x ** (-s.real - 2 * EM_ORDER - 1)


class PeriodicSeries:
    """Evaluator for sum_n c_n n^-s with c of period q."""

    def __init__(self, coeffs: Sequence[complex]):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 1 or c.shape[0] < 1:
            raise DomainError("need at least one coefficient")
        self.q = c.shape[0]
        self.period = c
        self._plist = [complex(v) for v in c]
        self.real = bool(np.all(c.imag == 0))
        self.total = complex(c.sum())
        self.pole_free = abs(self.total) < 1e-13
        self._lock = threading.Lock()
        self._cre = np.zeros(0)
        self._cim = np.zeros(0)

    def _coeffs(self, count: int) -> tuple[np.ndarray, np.ndarray]:
        if self._cre.shape[0] < count:
            with self._lock:
                if self._cre.shape[0] < count:
                    size = max(count, 2 * self._cre.shape[0], 4096)
                    reps = -(-size // self.q)
                    tiled = np.tile(self.period, reps)[:size]
                    cre = np.ascontiguousarray(tiled.real)
                    cim = np.ascontiguousarray(tiled.imag)
                    cre.setflags(write=False)
                    cim.setflags(write=False)
                    self._cre, self._cim = cre, cim
        return self._cre[:count], self._cim[:count]

    def tail(self, s: complex, N: int) -> tuple[complex, complex]:
        """q^-s sum_a c_a T(s, N + a/q) with the pole terms combined stably."""
        q = self.q
        acc = 0j
        dacc = 0j
        for a in range(1, q + 1):
            ca = self._plist[a - 1]
            if ca == 0:
                continue
            x = N + a / q
            v, dv = em_tail(s, x, with_pole=False)
            acc += ca * v
            dacc += ca * dv
        # pole part: x^{1-s}/(s-1) = (e^{-(s-1) log x} - 1)/(s-1) + 1/(s-1)
        u = s - 1.0
        csum = 0j
        for a in range(1, q + 1):
            ca = self._plist[a - 1]
            if ca == 0:
                continue
            x = N + a / q
            f, df = _phi1(u, math.log(x))
            acc += ca * f
            dacc += ca * df
            csum += ca
        if abs(csum) > 1e-13:
            if u == 0:
                raise PoleError("pole at s = 1")
            acc += csum / u
            dacc -= csum / (u * u)
        if q > 1:
            lq = math.log(q)
            qs = cmath.exp(-s * lq)
            return qs * acc, qs * (dacc - lq * acc)
        return acc, dacc

    def evaluate(self, s: complex, N: Optional[int] = None) -> tuple[complex, complex]:
        """(L(s), L'(s))."""
        s = complex(s)
        if N is None:
            N = em_cutoff(s.imag)
        M = self.q * N
        logn = _logs(M)
        cre, cim = self._coeffs(M)
        if self.real:
            head, dhead = kernels.dirichlet_sum_real(logn, cre, s.real, s.imag)
        else:
            head, dhead = kernels.dirichlet_sum(logn, cre, cim, s.real, s.imag)
        tv, dtv = self.tail(s, N)
        return head + tv, dhead + dtv

    def error_estimate(self, s: complex, N: Optional[int] = None) -> float:
        s = complex(s)
        if N is None:
            N = em_cutoff(s.imag)
        qpow = self.q ** (-s.real)
        trunc = qpow * float(np.abs(self.period).sum()) * em_error_estimate(s, N + 1.0 / self.q)
        # rounding in the head sum
        sig = s.real
        M = self.q * N
        mass = math.log(M) + 1.0 if abs(sig - 1.0) < 1e-9 else (M ** (1.0 - sig) - 1.0) / (1.0 - sig) + 1.0
        return trunc + 4e-16 * mass

    def path(self, t: float) -> "_FixedOrdinate":
        return _FixedOrdinate(self, t)


class _FixedOrdinate:
    """L(sigma + i t) at fixed t with the phases c_n n^{-it} cached."""

    def __init__(self, series: PeriodicSeries, t: float):
        self.series = series
        self.t = float(t)
        self.N = em_cutoff(t)
        M = series.q * self.N
        self.logn = _logs(M)
        cre, cim = series._coeffs(M)
        self.pr, self.pi = kernels.phase_table(self.logn, cre, cim, self.t)

    def __call__(self, sigma: float) -> tuple[complex, complex]:
        head, dhead = kernels.phased_sum(self.logn, self.pr, self.pi, sigma)
        tv, dtv = self.series.tail(complex(sigma, self.t), self.N)
        return head + tv, dhead + dtv


_series_cache: dict[LFunctionSpec, PeriodicSeries] = {}
_series_lock = threading.Lock()


def series_for(spec: LFunctionSpec) -> PeriodicSeries:
    with _series_lock:
        ser = _series_cache.get(spec)
        if ser is None:
            ser = PeriodicSeries(spec.coefficients())
            _series_cache[spec] = ser
    return ser


def _check_range(s: complex) -> None:
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError("s must be finite")
    if abs(s.imag) > T_MAX:
        raise AccuracyError(f"|Im s| = {abs(s.imag):g} exceeds the supported range {T_MAX:g}")


# ---------------------------------------------------------------------------
# public evaluators

_ZETA = LFunctionSpec.zeta()
_DH = LFunctionSpec.davenport_heilbronn()
_MOD5 = LFunctionSpec.dirichlet(CharacterTable.mod5())


def evaluate(spec: LFunctionSpec, s: complex) -> tuple[complex, complex]:
    """(L(s), L'(s)) for any supported family."""
    s = complex(s)
    if spec.family == "modular_tau":
        from .modular import l_tau_and_derivative

        return l_tau_and_derivative(s)
    _check_range(s)
    if s.real <= 0.0:
        raise DomainError("the Euler-Maclaurin evaluator is implemented for Re s > 0")
    if spec.has_pole and s == 1:
        raise PoleError("zeta has a pole at s = 1")
    return series_for(spec).evaluate(s)


def zeta_em(s: complex, precision_target: float = 1e-10) -> complex:
    """zeta(s) by Euler-Maclaurin with the stated absolute accuracy."""
    s = complex(s)
    value, _ = zeta_and_derivative(s)
    err = series_for(_ZETA).error_estimate(s)
    if err > precision_target:
        raise AccuracyError(f"estimated error {err:.2e} exceeds target {precision_target:.2e}")
    return value


def zeta_and_derivative(s: complex) -> tuple[complex, complex]:
    """(zeta(s), zeta'(s)) from the term-wise differentiated EM formula."""
    return evaluate(_ZETA, s)


def hurwitz_zeta(s: complex, a: float) -> complex:
    """zeta(s, a) = sum_{m>=0} (m + a)^-s for 0 < a <= 1."""
    s = complex(s)
    a = float(a)
    if not 0.0 < a <= 1.0:
        raise DomainError("hurwitz_zeta needs 0 < a <= 1")
    if s == 1:
        raise PoleError("pole at s = 1")
    _check_range(s)
    N = em_cutoff(s.imag)
    logn = np.log(np.arange(N, dtype=float) + a)
    head, _ = kernels.dirichlet_sum_real(logn, np.ones(N), s.real, s.imag)
    tv, _ = em_tail(s, N + a)
    return head + tv


def dirichlet_l(spec: LFunctionSpec, s: complex) -> complex:
    """L(s, chi); for the Davenport-Heilbronn spec this is its mod-5 component."""
    if spec.family == "zeta":
        return evaluate(spec, s)[0]
    if spec.family == "davenport_heilbronn":
        return evaluate(_MOD5, s)[0]
    if spec.family != "dirichlet":
        raise DomainError("dirichlet_l needs a dirichlet spec")
    return evaluate(spec, s)[0]


def dh(s: complex) -> complex:
    """The Davenport-Heilbronn function D(s)."""
    return evaluate(_DH, s)[0]


def log_derivative(spec: LFunctionSpec, s: complex) -> tuple[complex, complex, complex]:
    """(L, L', L'/L) without the near-zero check."""
    val, der = evaluate(spec, s)
    if val == 0:
        raise NearZeroError("L vanishes at s")
    return val, der, der / val


def upsilon(spec: LFunctionSpec, s: complex) -> complex:
    """Upsilon(s) = L'(s)/L(s)."""
    val, der = evaluate(spec, s)
    if abs(val) < NEAR_ZERO_RADIUS * abs(der) or val == 0:
        raise NearZeroError(f"s = {complex(s)} is within {NEAR_ZERO_RADIUS:g} of a zero")
    return der / val


def _gamma_factor_log(spec: LFunctionSpec, s: complex) -> complex:
    if spec.family == "modular_tau":
        return log_gamma(s) - s * math.log(2.0 * math.pi)
    kind = spec.theta_kind
    a = kind.parity
    return -0.5 * (s + a) * (LOG_PI - math.log(kind.q)) + log_gamma(0.5 * (s + a))


def completed(spec: LFunctionSpec, s: complex) -> complex:
    """The completed function Lambda(s) = gamma factor times L(s).

    zeta: pi^{-s/2} Gamma(s/2) zeta(s); Dirichlet and DH:
    (q/pi)^{(s+a)/2} Gamma((s+a)/2) L(s); modular: (2 pi)^-s Gamma(s) L_f(s).
    """
    s = complex(s)
    value, _ = evaluate(spec, s)
    return cmath.exp(_gamma_factor_log(spec, s)) * value


def root_number(spec: LFunctionSpec) -> complex:
    """epsilon with Lambda(s) = epsilon Lambda~(1 - s)."""
    if spec.family == "dirichlet":
        return spec.character.root_number()
    return 1.0 + 0j


# ---------------------------------------------------------------------------
# continuous argument


@dataclass(frozen=True)
class ArgTrace:
    """Unwrapped arg L(sigma + i t) tracked along the horizontal path."""

    sigma: float
    t: float
    arg_value: float
    path_points: int
    value: complex = field(default=0j, compare=False)
    derivative: complex = field(default=0j, compare=False)


def _arg_path(fixed, sigma: float, start: float = ARG_ANCHOR) -> tuple[float, int, complex, complex]:
    """Track arg from ``start`` down to ``sigma`` with the fixed-t evaluator."""
    val, der = fixed(start)
    if abs(val) < ARG_MIN_MODULUS:
        raise ZeroOnPathError(f"|L| < {ARG_MIN_MODULUS:g} at sigma = {start}")
    arg = cmath.phase(val)
    cur = start
    points = 1
    h = 0.25
    while cur > sigma:
        h = min(h, cur - sigma)
        nxt = cur - h if cur - h > sigma else sigma
        v2, d2 = fixed(nxt)
        points += 1
        if abs(v2) < ARG_MIN_MODULUS:
            raise ZeroOnPathError(f"|L| < {ARG_MIN_MODULUS:g} at sigma = {nxt}")
        step = cmath.phase(v2 / val)
        u1 = der / val
        u2 = d2 / v2
        pred = -(cur - nxt) * 0.5 * (u1.imag + u2.imag)
        reach = (cur - nxt) * max(abs(u1), abs(u2))
        if abs(step) < math.pi / 4 and abs(step - pred) < 0.1 and reach < 1.0:
            arg += step
            cur, val, der = nxt, v2, d2
            h = min(2.0 * h, 0.5)
        else:
            h *= 0.5
            if h < 1e-14:
                raise ZeroOnPathError(f"arg continuation stalled near sigma = {cur}")
    return arg, points, val, der


def continuous_arg(spec: LFunctionSpec, sigma: float, t: float) -> ArgTrace:
    """arg L(sigma + i t), continuous along the path from the right half-plane.

    For sigma >= 2 the coefficients satisfy sum_{n>=2} |c_n| n^-sigma < 1, so
    Re L > 0 there and the principal value already equals the value carried
    continuously from sigma = 10.  Below 2 the phase is followed in adaptive
    steps, each checked against the trapezoid prediction -h Im Upsilon.
    """
    if spec.family == "modular_tau":
        raise DomainError("continuous_arg is implemented for degree-one families")
    sigma = float(sigma)
    t = float(t)
    _check_range(complex(sigma, t))
    if sigma <= 0.0:
        raise DomainError("continuous_arg needs sigma > 0")
    ser = series_for(spec)
    fixed = ser.path(t)
    if sigma >= ARG_ANCHOR:
        val, der = fixed(sigma)
        return ArgTrace(sigma, t, cmath.phase(val), 1, val, der)
    if spec.has_pole and abs(t) < 1e-9 and sigma <= 1.0:
        raise ZeroOnPathError("path crosses the pole at s = 1")
    arg, points, val, der = _arg_path(fixed, sigma)
    return ArgTrace(sigma, t, arg, points, val, der)


# ---------------------------------------------------------------------------
# Euler products and prime zeta

_DIRECT_PRIME_RE = 8.0
_SMALL_PRIMES_BOUND = 2000


def _log_zeta(s: complex) -> complex:
    """log zeta(s) on the branch continuous from +infinity along Im s = const."""
    if s.real >= _DIRECT_PRIME_RE:
        p = primes.primes_up_to(_SMALL_PRIMES_BOUND).astype(float)
        # tail beyond 2000 is below 2000^-7 ~ 1e-23
        return complex(-np.log1p(-np.exp(-s * np.log(p))).sum())
    if s.real >= ARG_ANCHOR:
        val, _ = zeta_and_derivative(s)
        return cmath.log(val)
    try:
        tr = continuous_arg(_ZETA, s.real, s.imag)
    except ZeroOnPathError as exc:
        raise BranchError(f"log zeta branch undefined: the path to {s} meets a zero") from exc
    return complex(math.log(abs(tr.value)), tr.arg_value)


def _upsilon_zeta(s: complex) -> complex:
    if s.real >= _DIRECT_PRIME_RE:
        p = primes.primes_up_to(_SMALL_PRIMES_BOUND).astype(float)
        lp = np.log(p)
        w = np.exp(-s * lp)
        return complex(-(lp * w / (1.0 - w)).sum())
    return upsilon(_ZETA, s)


def _truncation(re: float) -> int:
    # terms decay like 2^{-k re}; stop once below 1e-17
    return max(2, math.ceil(57.0 / re) + 1)


def prime_zeta(s: complex) -> complex:
    """P(s) = sum_p p^-s continued by P(s) = sum_k mu(k)/k log zeta(ks)."""
    s = complex(s)
    if s.real <= 0.5:
        raise DomainError("prime_zeta is continued to Re s > 1/2 only")
    total = 0j
    for k in range(1, _truncation(s.real) + 1):
        mu = primes.mobius(k)
        if mu:
            total += mu / k * _log_zeta(k * s)
    return total


def prime_zeta_derivative(s: complex) -> complex:
    """P'(s) = sum_k mu(k) Upsilon(ks)."""
    s = complex(s)
    if s.real <= 0.5:
        raise DomainError("prime_zeta is continued to Re s > 1/2 only")
    total = 0j
    for k in range(1, _truncation(s.real) + 1):
        mu = primes.mobius(k)
        if mu:
            total += mu * _upsilon_zeta(k * s)
    return total


def upsilon_prime_zeta(s: complex) -> complex:
    """Upsilon(s) rebuilt as sum_{n>=1} P'(ns), truncated below 1e-14."""
    s = complex(s)
    if s.real <= 1.0:
        raise DomainError("the prime-zeta series for Upsilon needs Re s > 1")
    total = 0j
    n = 1
    while True:
        w = n * s
        if w.real >= _DIRECT_PRIME_RE:
            p = primes.primes_up_to(_SMALL_PRIMES_BOUND).astype(float)
            lp = np.log(p)
            term = complex(-(lp * np.exp(-w * lp)).sum())
        else:
            term = prime_zeta_derivative(w)
        total += term
        if abs(term) < 1e-14:
            break
        n += 1
    return total


def finite_phase_sum(E: float, sigma: float, N: int) -> float:
    """sum over the first N primes of -Im log(1 - p^{-sigma - iE}), principal Arg."""
    if N < 0:
        raise DomainError("N must be non-negative")
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    if N == 0:
        return 0.0
    lp = np.log(primes.first_primes(N).astype(float))
    z = np.exp(-sigma * lp) * np.exp(-1j * E * lp)
    return float(-np.angle(1.0 - z).sum())
