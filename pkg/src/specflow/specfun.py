"""Complex special functions: log-Gamma, digamma, Lambert W and theta phases.

Everything here is plain IEEE double arithmetic.  log-Gamma and digamma use
the Stirling series after an upward recurrence shift to ``|z| >= 10``;
Bernoulli numbers are generated exactly once with :mod:`fractions`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, PoleError

LOG_PI = math.log(math.pi)
LOG_2PI = math.log(2.0 * math.pi)
HALF_LOG_2PI = 0.5 * LOG_2PI

_STIRLING_TERMS = 12
_SHIFT_RADIUS = 10.0


@lru_cache(maxsize=None)
def bernoulli_numbers(n_max: int) -> tuple[Fraction, ...]:
    """Exact B_0..B_n_max (convention B_1 = -1/2), Akiyama-Tanigawa."""
    out = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    if n_max >= 1:
        out[1] = -out[1]
    return tuple(out)


@lru_cache(maxsize=None)
def _stirling_coeffs(terms: int) -> tuple[float, ...]:
    bern = bernoulli_numbers(2 * terms)
    return tuple(float(bern[2 * k] / (2 * k * (2 * k - 1))) for k in range(1, terms + 1))


@lru_cache(maxsize=None)
def _digamma_coeffs(terms: int) -> tuple[float, ...]:
    bern = bernoulli_numbers(2 * terms)
    return tuple(float(bern[2 * k] / (2 * k)) for k in range(1, terms + 1))


def _check_pole(z: complex) -> None:
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"Gamma has a pole at {z.real:g}")


def _shift(z: complex) -> tuple[complex, int]:
    m = 0
    while z.real < 0.0 or abs(z) < _SHIFT_RADIUS:
        z += 1.0
        m += 1
    return z, m


def log_gamma(s: complex) -> complex:
    """Principal branch of log Gamma(s), continuous off the negative real axis."""
    z = complex(s)
    _check_pole(z)
    w, m = _shift(z)
    acc = 0j
    for j in range(m):
        acc += cmath.log(z + j)
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0j
    power = inv
    for c in _stirling_coeffs(_STIRLING_TERMS):
        series += c * power
        power *= inv2
    return (w - 0.5) * cmath.log(w) - w + HALF_LOG_2PI + series - acc


def digamma(s: complex) -> complex:
    """psi(s) = Gamma'(s)/Gamma(s)."""
    z = complex(s)
    _check_pole(z)
    w, m = _shift(z)
    acc = 0j
    for j in range(m):
        acc += 1.0 / (z + j)
    inv2 = 1.0 / (w * w)
    series = 0j
    power = inv2
    for c in _digamma_coeffs(_STIRLING_TERMS):
        series += c * power
        power *= inv2
    return cmath.log(w) - 0.5 / w - series - acc


def lambert_w0(x: float) -> float:
    """Principal branch W_0 of the Lambert function for real ``x >= -1/e``.

    Halley iteration from a branch-point series seed near ``-1/e`` and a
    logarithmic seed for large ``x``.
    """
    x = float(x)
    branch = -math.exp(-1.0)
    if x < branch:
        # tolerate the rounding of -1/e itself
        if x > branch - 4e-17:
            return -1.0
        raise DomainError(f"lambert_w0 requires x >= -1/e, got {x!r}")
    if x == 0.0:
        return 0.0
    if x - branch < 1e-300:
        return -1.0
    if x < -0.25:
        p = math.sqrt(2.0 * (math.e * x + 1.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    elif x < 3.0:
        w = math.log1p(x) * (1.0 - math.log1p(math.log1p(x)) / (2.0 + math.log1p(x)))
    else:
        l1 = math.log(x)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1
    for _ in range(50):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        dw = f / denom
        w -= dw
        if abs(dw) <= 4e-16 * (1.0 + abs(w)):
            break
    return w


@dataclass(frozen=True)
class ThetaKind:
    """Which smooth theta phase to use.

    ``family`` is one of ``"zeta"``, ``"dh"``, ``"dirichlet"`` or ``"modular"``.
    ``q``/``parity`` describe the Gamma factor Gamma((s + parity)/2) (q/pi)^{s/2}
    of a degree-one L-function; ``weight`` the modular Gamma(s) (2 pi)^{-s}.
    """

    family: str = "zeta"
    q: int = 1
    parity: int = 0
    weight: int = 12

    def __post_init__(self):
        if self.family not in ("zeta", "dh", "dirichlet", "modular"):
            raise DomainError(f"unknown theta family {self.family!r}")
        if self.q < 1:
            raise DomainError("modulus q must be >= 1")
        if self.parity not in (0, 1):
            raise DomainError("parity must be 0 or 1")
        if self.family == "modular" and (self.weight % 2 or self.weight < 12):
            raise DomainError("modular weight must be even and >= 12")

    @classmethod
    def zeta(cls) -> "ThetaKind":
        return cls("zeta", 1, 0)

    @classmethod
    def dh(cls) -> "ThetaKind":
        return cls("dh", 5, 1)

    @classmethod
    def dirichlet(cls, q: int, parity: int) -> "ThetaKind":
        return cls("dirichlet", q, parity)

    @classmethod
    def modular(cls, weight: int = 12) -> "ThetaKind":
        return cls("modular", 1, 0, weight)


def theta_sigma(kind: ThetaKind, sigma: float, t: float) -> float:
    """Smooth phase of the Gamma/conductor factor at s = sigma + i t."""
    if kind.family == "modular":
        return log_gamma(complex(sigma, t)).imag - t * LOG_2PI
    parity = 1 if kind.family == "dh" else kind.parity
    q = 5 if kind.family == "dh" else kind.q
    return log_gamma(complex((sigma + parity) / 2.0, t / 2.0)).imag - 0.5 * t * (LOG_PI - math.log(q))


def rs_theta(kind: ThetaKind, t: float) -> float:
    """Riemann-Siegel type theta on the critical line, from the exact log-Gamma.

    zeta: Im logGamma(1/4 + i t/2) - (t/2) log pi;
    DH:   Im logGamma(3/4 + i t/2) - (t/2) log(pi/5).
    """
    if kind.family == "modular":
        return theta_sigma(kind, kind.weight / 2.0, t)
    return theta_sigma(kind, 0.5, t)


def rs_theta_deriv(kind: ThetaKind, t: float) -> float:
    """d/dt of :func:`rs_theta`, via the digamma function."""
    if kind.family == "modular":
        return digamma(complex(kind.weight / 2.0, t)).real - LOG_2PI
    parity = 1 if kind.family == "dh" else kind.parity
    q = 5 if kind.family == "dh" else kind.q
    return 0.5 * digamma(complex((0.5 + parity) / 2.0, t / 2.0)).real - 0.5 * (LOG_PI - math.log(q))
