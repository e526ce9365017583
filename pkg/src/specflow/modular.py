"""Ramanujan tau and the L-function of the weight-12 discriminant.

tau(n) comes from the power-series identity for E(q)^24, E(q) = prod (1 - q^n)
given by Euler's pentagonal theorem; the coefficients of Q = E^m obey the
J.C.P. Miller recurrence

    n Q_n = sum_{k >= 1} ((m + 1) k - n) e_k Q_{n-k},

which is exact in Python integers and costs O(n^1.5) because only the
pentagonal e_k are nonzero.

L_f(s) is continued through the Mellin integral of f(iy) split at the fixed
point of y -> 1/y.  Both halves run along rays rotated by +-phi, which keeps
the oscillating integrand from cancelling down to exp(-pi |t| / 2).
"""
from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import AccuracyError, DomainError, NearZeroError
from .specfun import LOG_2PI, digamma, log_gamma

WEIGHT = 12
CRITICAL_RE = WEIGHT / 2
TAU_N_MAX = 10**5
T_SCAN_MAX = 50.0

# exp(-ROTATION_SLACK) is the cancellation the rotated rays still allow
ROTATION_SLACK = 6.0
_DECAY = 40.0
_PANEL_POINTS = 24


@dataclass(frozen=True)
class TauTable:
    """tau(1..n_max); ``tau[0]`` is unused and set to 0."""

    n_max: int
    tau: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"tau({n}) outside table 1..{self.n_max}")
        return self.tau[n]

    def as_float(self) -> np.ndarray:
        return np.array(self.tau, dtype=float)


def _pentagonal_coeffs(n_max: int) -> list[tuple[int, int]]:
    """Nonzero (k, e_k) of prod (1 - q^n) with 1 <= k <= n_max."""
    out = []
    j = 1
    while True:
        sign = -1 if j % 2 else 1
        k1 = j * (3 * j - 1) // 2
        k2 = j * (3 * j + 1) // 2
        if k1 > n_max:
            break
        out.append((k1, sign))
        if k2 <= n_max:
            out.append((k2, sign))
        j += 1
    return out


@lru_cache(maxsize=4)
def _tau_cached(n_max: int) -> TauTable:
    m = 24
    size = n_max  # Q_0 .. Q_{n_max - 1}
    pent = _pentagonal_coeffs(size)
    Q = [0] * size
    Q[0] = 1
    for n in range(1, size):
        acc = 0
        for k, e in pent:
            if k > n:
                break
            acc += ((m + 1) * k - n) * e * Q[n - k]
        q, r = divmod(acc, n)
        if r:
            raise ArithmeticError("non-integral coefficient in the power recurrence")
        Q[n] = q
    return TauTable(n_max, (0,) + tuple(Q))


def ramanujan_tau(n_max: int) -> TauTable:
    """tau(n) for 1 <= n <= n_max, from q prod (1 - q^n)^24."""
    n_max = int(n_max)
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    if n_max > TAU_N_MAX:
        raise OverflowError(f"n_max above {TAU_N_MAX} is outside the supported table size")
    return _tau_cached(n_max)


# ---------------------------------------------------------------------------
# L_f through rotated Mellin rays

_coef_lock = threading.Lock()
_coef: np.ndarray = np.zeros(0)


def _tau_float(count: int) -> np.ndarray:
    global _coef
    if _coef.shape[0] <= count:
        with _coef_lock:
            if _coef.shape[0] <= count:
                size = max(count + 1, 256)
                if size - 1 > TAU_N_MAX:
                    raise AccuracyError("required tau coefficients exceed the table limit")
                arr = ramanujan_tau(size - 1).as_float()
                arr.setflags(write=False)
                _coef = arr
    return _coef[: count + 1]


@lru_cache(maxsize=None)
def _gauss_legendre(npts: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(npts)


def rotation_angle(t: float, slack: float = ROTATION_SLACK) -> float:
    """phi = sign(t) max(0, pi/2 - slack/|t|)."""
    if abs(t) <= slack / (0.5 * math.pi):
        return 0.0
    return math.copysign(0.5 * math.pi - slack / abs(t), t)


def _f_on_ray(u: np.ndarray, phase: complex) -> np.ndarray:
    """f(i y) = sum tau(n) exp(-2 pi n y) at y = u * phase."""
    q = np.exp(-2.0 * math.pi * u * phase)
    qmax = float(np.abs(q).max())
    # enough terms that the tail |q|^n n^6 is below 1e-18
    if qmax <= 0.0:
        return np.zeros_like(q)
    lq = -math.log(qmax)
    n = 8
    while n * lq - 6.0 * math.log(n) < 41.5:
        n += 8
    c = _tau_float(n)
    # Horner in q; c[0] = 0 so the result carries the leading factor q
    acc = np.full_like(q, c[n])
    for k in range(n - 1, -1, -1):
        acc = acc * q + c[k]
    return acc


def _ray_nodes(phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [1, U] for the ray at angle phi."""
    decay = 2.0 * math.pi * max(math.cos(phi), 1e-3)
    upper = 1.0 + _DECAY / decay
    # panels of width about 1/4 resolve the oscillation of f along the ray
    npanel = max(8, int(math.ceil((upper - 1.0) * 4.0)))
    x, w = _gauss_legendre(_PANEL_POINTS)
    edges = np.linspace(1.0, upper, npanel + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def completed_tau_parts(s: complex, slack: float = ROTATION_SLACK, normalise: complex = 0j) -> tuple[complex, complex]:
    """exp(normalise) * (Lambda(s), Lambda'(s)) from the two rotated rays.

    ``normalise`` is added to the exponent of every integrand so that large
    scale factors never materialise separately.
    """
    s = complex(s)
    phi = rotation_angle(s.imag, slack)
    u, w = _ray_nodes(phi)
    logu = np.log(u)
    e_up = cmath.exp(1j * phi)
    e_dn = cmath.exp(-1j * phi)
    f_up = _f_on_ray(u, e_up)
    f_dn = _f_on_ray(u, e_dn)
    la = logu + 1j * phi
    lb = logu - 1j * phi
    ka = np.exp((s - 1.0) * la + normalise) * e_up
    kb = np.exp((WEIGHT - 1.0 - s) * lb + normalise) * e_dn
    ia = w * f_up * ka
    ib = w * f_dn * kb
    lam = complex(ia.sum() + ib.sum())
    dlam = complex((ia * la).sum() - (ib * lb).sum())
    return lam, dlam


def completed_tau(s: complex, slack: float = ROTATION_SLACK) -> complex:
    """Lambda(s) = (2 pi)^-s Gamma(s) L_f(s)."""
    return completed_tau_parts(s, slack)[0]


def l_tau_and_derivative(s: complex, slack: float = ROTATION_SLACK) -> tuple[complex, complex]:
    """(L_f(s), L_f'(s)) with the Gamma factor folded into the integrand."""
    s = complex(s)
    if s.real <= 0.0 and s.imag == 0.0 and s.real == math.floor(s.real):
        raise DomainError("L_f is entire but Gamma(s) has a pole here; use completed_tau")
    if abs(s.imag) > 2.0 * T_SCAN_MAX:
        raise AccuracyError(f"|Im s| above {2.0 * T_SCAN_MAX:g} is outside the supported window")
    norm = s * LOG_2PI - log_gamma(s)
    lam, dlam = completed_tau_parts(s, slack, norm)
    # L = Lambda G with G = (2 pi)^s / Gamma(s), G'/G = log 2 pi - psi(s)
    return lam, dlam + lam * (LOG_2PI - digamma(s))


def l_tau(s: complex) -> complex:
    """L_f(s) = sum tau(n) n^-s, continued to all s."""
    return l_tau_and_derivative(s)[0]


def upsilon_tau(s: complex) -> complex:
    """L_f'(s)/L_f(s)."""
    val, der = l_tau_and_derivative(s)
    if val == 0 or abs(val) < 1e-8 * abs(der):
        raise NearZeroError(f"s = {complex(s)} is within 1e-8 of a zero of L_f")
    return der / val


def hardy_tau(t: float) -> float:
    """Lambda(6 + i t), real for real t."""
    return completed_tau(complex(CRITICAL_RE, t)).real


def _refine_sign_change(f, a: float, b: float, fa: float, fb: float, tol: float = 1e-12) -> float:
    """Illinois regula falsi on a bracketing interval."""
    side = 0
    for _ in range(200):
        c = (a * fb - b * fa) / (fb - fa)
        fc = f(c)
        if fc == 0.0 or abs(b - a) < tol * max(1.0, abs(c)):
            return c
        if (fc > 0) == (fb > 0):
            b, fb = c, fc
            if side == -1:
                fa *= 0.5
            side = -1
        else:
            a, fa = c, fc
            if side == 1:
                fb *= 0.5
            side = 1
    return 0.5 * (a + b)


def tau_zero_ordinates(t_max: float, step: float = 0.05) -> list[float]:
    """Zeros of L_f on Re s = 6 with 0 < t <= t_max, from sign changes of Lambda."""
    if t_max > 2.0 * T_SCAN_MAX:
        raise AccuracyError("zero scan window exceeds the supported range")
    grid = np.arange(step, t_max + step, step)
    # Lambda decays like exp(-pi t/2); rescale so the sign test is well conditioned
    vals = [hardy_tau(t) * math.exp(0.5 * math.pi * t) for t in grid]
    out = []
    f = lambda x: hardy_tau(x) * math.exp(0.5 * math.pi * x)
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            out.append(float(grid[i]))
        elif (vals[i] > 0) != (vals[i + 1] > 0):
            out.append(_refine_sign_change(f, float(grid[i]), float(grid[i + 1]), vals[i], vals[i + 1]))
    return out


def grand_criterion_scan(sigma: float, t_range: Sequence[float], grid_step: float, zeros: Sequence[float] | None = None):
    """lhs = -Re L_f'/L_f against rhs = log(t/2 pi) on a grid right of Re s = 6."""
    from .criterion import CriterionSample, NEAR_POLE_WINDOW

    if sigma <= CRITICAL_RE:
        raise DomainError("the scan needs sigma > 6")
    t_lo, t_hi = float(t_range[0]), float(t_range[1])
    if t_hi > T_SCAN_MAX:
        raise DomainError(f"scan window is capped at t <= {T_SCAN_MAX:g}")
    if grid_step <= 0 or t_hi < t_lo:
        raise DomainError("need grid_step > 0 and t_lo <= t_hi")
    if zeros is None:
        zeros = tau_zero_ordinates(t_hi + 1.0)
    zs = np.asarray(sorted(zeros), dtype=float)
    count = int(math.floor((t_hi - t_lo) / grid_step + 1e-9)) + 1
    out = []
    for i in range(count):
        t = t_lo + i * grid_step
        val, der = l_tau_and_derivative(complex(sigma, t))
        lhs = -(der / val).real
        rhs = math.log(t / (2.0 * math.pi))
        near = bool(zs.size) and float(np.min(np.abs(zs - t))) < NEAR_POLE_WINDOW
        out.append(CriterionSample(t, lhs, rhs, rhs - lhs, near))
    return out
