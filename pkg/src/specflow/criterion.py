"""Log-derivative criteria and the Hadamard identity for zeta.

The scans compare lhs = -Re Upsilon(sigma + it) with the family bound

    zeta            1/2 log(t / 2 pi)
    Dirichlet mod q 1/2 log(q t / 2 pi)   (DH uses q = 5)
    modular tau     log(t / 2 pi)

Upsilon has simple poles at zeros, so samples within NEAR_POLE_WINDOW of a
known ordinate are flagged rather than treated as violations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import lfunc
from .errors import DomainError, InsufficientDataError, NearZeroError
from .lfunc import LFunctionSpec
from .specfun import LOG_2PI, LOG_PI, digamma

NEAR_POLE_WINDOW = 0.05
EULER_GAMMA = 0.57721566490153286061

# B = -gamma/2 - 1 + log(2 sqrt(pi)), the constant of the Hadamard product of xi
B_CONSTANT = -0.5 * EULER_GAMMA - 1.0 + math.log(2.0) + 0.5 * LOG_PI

# lower edge of the regime where the bound is expected to hold
T_STAR = {"zeta": 17.85, "davenport_heilbronn": 3.0, "dirichlet": 3.0, "modular_tau": 25.0}


@dataclass(frozen=True)
class CriterionSample:
    """One grid point; ``in_regime`` is False below the family's t*."""

    t: float
    lhs: float
    rhs: float
    margin: float
    near_pole: bool
    in_regime: bool = True


def bound(spec: LFunctionSpec, t: float) -> float:
    """The right-hand side of the criterion for ``spec`` at height t."""
    if t <= 0:
        raise DomainError("the bound needs t > 0")
    if spec.family == "modular_tau":
        return math.log(t) - LOG_2PI
    q = 1 if spec.family == "zeta" else spec.q
    return 0.5 * (math.log(q * t) - LOG_2PI)


def scan_grid(t_lo: float, t_hi: float, step: float) -> np.ndarray:
    if step <= 0 or t_hi < t_lo:
        raise DomainError("need step > 0 and t_lo <= t_hi")
    count = int(math.floor((t_hi - t_lo) / step + 1e-9)) + 1
    return t_lo + step * np.arange(count)


def known_ordinates(spec: LFunctionSpec, t_lo: float, t_hi: float) -> list[float]:
    """Converged critical-line ordinates in [t_lo, t_hi] from the solver."""
    from .solver import count_zeros, solve_range

    lo = max(1, int(math.floor(count_zeros(spec, max(t_lo, 1.0)))) - 1)
    hi = int(math.ceil(count_zeros(spec, t_hi))) + 1
    recs = solve_range(spec, lo, hi)
    return [r.energy for r in recs if r.converged and t_lo <= r.energy <= t_hi]


def _near(zs: np.ndarray, t: float) -> bool:
    return bool(zs.size) and float(np.min(np.abs(zs - t))) < NEAR_POLE_WINDOW


def criterion_scan(spec: LFunctionSpec, sigma: float, t_lo: float, t_hi: float, step: float,
                   zeros: Optional[Sequence[float]] = None) -> list[CriterionSample]:
    """Sample -Re Upsilon(sigma + it) against the family bound on a t grid.

    ``zeros`` are the ordinates used for the near_pole flag; by default the
    solver's critical-line zeros in the window are used.
    """
    t_star = T_STAR[spec.family]
    if spec.family == "modular_tau":
        from .modular import grand_criterion_scan

        raw = grand_criterion_scan(sigma, (t_lo, t_hi), step, zeros)
        return [CriterionSample(s.t, s.lhs, s.rhs, s.margin, s.near_pole, s.t > t_star) for s in raw]
    if sigma <= 0.5:
        raise DomainError("the scan needs sigma > 1/2")
    if t_lo <= 0:
        raise DomainError("the scan needs t_lo > 0")
    grid = scan_grid(float(t_lo), float(t_hi), float(step))
    if zeros is None:
        zeros = known_ordinates(spec, float(grid[0]) - 1.0, float(grid[-1]) + 1.0)
    return scan_points(spec, sigma, grid, zeros)


def scan_points(spec: LFunctionSpec, sigma: float, ts: Sequence[float], zeros: Sequence[float]) -> list[CriterionSample]:
    """criterion samples at explicit heights ``ts`` (zeta, Dirichlet and DH)."""
    if sigma <= 0.5:
        raise DomainError("the scan needs sigma > 1/2")
    t_star = T_STAR[spec.family]
    zs = np.asarray(sorted(zeros), dtype=float)
    out = []
    for t in ts:
        t = float(t)
        val, der = lfunc.evaluate(spec, complex(sigma, t))
        lhs = -(der / val).real if val != 0 else -math.inf
        rhs = bound(spec, t)
        out.append(CriterionSample(t, lhs, rhs, rhs - lhs, _near(zs, t), t > t_star))
    return out


def _midpoints(zeros: Sequence[float], t_window: Optional[Sequence[float]]) -> np.ndarray:
    zs = np.asarray(zeros, dtype=float)
    if zs.ndim != 1 or np.any(np.diff(zs) <= 0):
        raise DomainError("zero ordinates must be strictly increasing")
    mids = 0.5 * (zs[1:] + zs[:-1])
    if t_window is not None:
        lo, hi = float(t_window[0]), float(t_window[1])
        mids = mids[(mids >= lo) & (mids <= hi)]
    return mids


def critical_line_equality(t_window: Optional[Sequence[float]], zeros: Sequence[float],
                           spec: Optional[LFunctionSpec] = None) -> list[float]:
    """r(t) = -Re Upsilon(1/2 + it) - 1/2 log(t / 2 pi) at midpoints of ``zeros``.

    Only midpoints inside ``t_window`` are used (all of them when it is None).
    """
    spec = spec or LFunctionSpec.zeta()
    out = []
    for t in _midpoints(zeros, t_window):
        ups = lfunc.upsilon(spec, complex(0.5, float(t)))
        out.append(float(-ups.real - bound(spec, float(t))))
    return out


def critical_line_model(t: float) -> float:
    """The exact value of r(t) for zeta.

    On the line the zero sum of xi'/xi is purely imaginary, leaving
    r(t) = 1/2 Re psi(s/2) - 1/2 log(t/2) with s = 1/2 + it, which is
    -1/(48 t^2) + O(t^-4).
    """
    s = complex(0.5, t)
    return 0.5 * digamma(0.5 * s).real - 0.5 * math.log(0.5 * t)


# ---------------------------------------------------------------------------
# zero sums

def symmetric_orbit(rho: complex, tol: float = 1e-12) -> list[complex]:
    """Distinct members of {rho, conj rho, 1 - rho, 1 - conj rho}."""
    out: list[complex] = []
    for z in (rho, rho.conjugate(), 1.0 - rho, 1.0 - rho.conjugate()):
        if all(abs(z - w) > tol for w in out):
            out.append(z)
    return out


def symmetrized_zero_sum(s: complex, rhos: Iterable[complex]) -> complex:
    """sum over the orbits of ``rhos`` of 1/(s - rho) + 1/rho."""
    total = 0j
    for rho in rhos:
        for z in symmetric_orbit(complex(rho)):
            total += 1.0 / (s - z) + 1.0 / z
    return total


def _line_zero_sum(s: complex, gammas: np.ndarray) -> complex:
    # orbit of 1/2 + i gamma is {1/2 + i gamma, 1/2 - i gamma}; sum from the top so small terms go first
    g = np.asarray(gammas, dtype=float)[::-1]
    rho = 0.5 + 1j * g
    terms = 1.0 / (s - rho) + 1.0 / (s - rho.conjugate()) + 1.0 / (0.25 + g * g)
    return complex(terms.sum())


def zero_sum_tail(s: complex, T: float) -> complex:
    """Integral of the paired line-zero term beyond height T with density log(t/2pi)/2pi.

    The paired term is 2(s - 1/2)/((s - 1/2)^2 + t^2) + 1/(1/4 + t^2) ~ 2s/t^2.
    """
    L = math.log(T / (2.0 * math.pi))
    a2 = (s - 0.5) ** 2
    # int_T^inf log(t/2pi) t^-2 dt = (L + 1)/T, the t^-4 moment is (3L + 1)/(9 T^3)
    m2 = (L + 1.0) / T
    m4 = (3.0 * L + 1.0) / (9.0 * T**3)
    paired = 2.0 * (s - 0.5) * (m2 - a2 * m4) + (m2 - 0.25 * m4)
    return paired / (2.0 * math.pi)


def _tail_start(gammas: np.ndarray) -> float:
    last = float(gammas[-1])
    # half a mean spacing past the last ordinate
    return last + math.pi / math.log(last / (2.0 * math.pi))


def hadamard_rhs(s: complex, gammas: Sequence[float], tail: bool = True) -> complex:
    """1/(s-1) - B - log sqrt(pi) + 1/2 psi(s/2 + 1) - sum_rho (1/(s - rho) + 1/rho)."""
    g = np.asarray(gammas, dtype=float)
    zsum = _line_zero_sum(s, g)
    if tail and g.size:
        zsum += zero_sum_tail(s, _tail_start(g))
    return 1.0 / (s - 1.0) - B_CONSTANT - 0.5 * LOG_PI + 0.5 * digamma(0.5 * s + 1.0) - zsum


def hadamard_identity_check(s: complex, zeros_count: int, zeros: Optional[Sequence[float]] = None,
                            tol: Optional[float] = None, tail: bool = True) -> float:
    """|-Upsilon(s) - rhs(s)| using the first ``zeros_count`` zeta zeros plus the density tail.

    ``zeros`` are ordinates t_1 < t_2 < ...; computed with the solver when
    omitted.  With ``tol`` set, InsufficientDataError is raised when the tail
    estimate alone exceeds it.
    """
    s = complex(s)
    if s == 1.0:
        raise DomainError("s = 1 is the pole of zeta")
    if zeros_count < 1:
        raise InsufficientDataError("need at least one zero")
    if zeros is None:
        from .solver import zero_table

        recs = zero_table(LFunctionSpec.zeta(), 1, zeros_count)
        zeros = [r.energy for r in recs if r.converged]
    if len(zeros) < zeros_count:
        raise InsufficientDataError(f"{zeros_count} zeros requested, {len(zeros)} available")
    g = np.asarray(zeros[:zeros_count], dtype=float)
    if tol is not None:
        est = abs(zero_sum_tail(s, _tail_start(g)))
        if est > tol:
            raise InsufficientDataError(f"tail estimate {est:.2e} exceeds tolerance {tol:.2e}")
    try:
        lhs = -lfunc.upsilon(LFunctionSpec.zeta(), s)
    except NearZeroError:
        raise DomainError(f"s = {s} is a zero of zeta") from None
    return float(abs(lhs - hadamard_rhs(s, g, tail)))


def inverse_square_partials(zeros: Sequence[float], checkpoints: Optional[Sequence[int]] = None) -> np.ndarray:
    """Partial sums of 1/|rho_n|^2 = 1/(1/4 + t_n^2) over the positive ordinates.

    The full sum over all zeros of Re(1/rho) equals -B, and both signs of
    t pair up, so these partials increase towards -B.
    """
    g = np.asarray(zeros, dtype=float)
    partial = np.cumsum(1.0 / (0.25 + g * g))
    if checkpoints is None:
        return partial
    idx = np.asarray(checkpoints, dtype=int)
    if np.any(idx < 1) or np.any(idx > g.size):
        raise InsufficientDataError("checkpoint beyond the available zeros")
    return partial[idx - 1]


def offline_term(s: complex, rho: complex) -> float:
    """Re 1/(s - rho), the contribution an off-line zero adds to Re Upsilon."""
    return (1.0 / (complex(s) - complex(rho))).real
