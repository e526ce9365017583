"""Spectral flow sigma -> E_n(sigma) by predictor-corrector continuation.

Differentiating F_n(E; sigma) = theta(E) + arg L(sigma + iE) - (n - c) pi gives

    dE/dsigma = -Im Upsilon / (Re Upsilon + theta'(E)),

so the flow stiffens where the denominator vanishes (two levels merging) or
where Upsilon has a pole (the level runs into a zero of L).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import lfunc
from .errors import CoalescenceError, DomainError, NearZeroError, SpecflowError, ZeroOnPathError
from .lfunc import LFunctionSpec
from .solver import _PhaseEvaluator, _check_spec, solve_zero

REACHED_LINE = "reached_line"
COALESCED = "coalesced"
SOLVER_LOST = "solver_lost"

COALESCENCE_TOL = 1e-6
PAIR_WINDOW = 0.01
MAX_JUMP = 0.5
MAX_CORRECTOR_ITERS = 8
MIN_STEP = 1e-12
REFINE_DELTAS = (1e-7, 1e-8, 1e-9)


def _theta_deriv(spec: LFunctionSpec, E: float) -> float:
    from .specfun import rs_theta_deriv

    return rs_theta_deriv(spec.theta_kind, E)


def dE_dsigma(spec: LFunctionSpec, sigma: float, E: float) -> float:
    """-Im Upsilon / (Re Upsilon + theta'(E)) at s = sigma + iE."""
    ups = lfunc.upsilon(spec, complex(sigma, E))
    denom = ups.real + _theta_deriv(spec, E)
    if abs(denom) < COALESCENCE_TOL:
        raise CoalescenceError(f"flow denominator {denom:.3e} vanishes at sigma = {sigma}, E = {E}")
    return -ups.imag / denom


def dE_dn(spec: LFunctionSpec, sigma: float, E: float, exact_theta: bool = False) -> float:
    """pi / (Re Upsilon + 1/2 log(E / 2 pi)), the local level spacing.

    ``exact_theta`` replaces the logarithm by theta'(E).
    """
    if E <= 0:
        raise DomainError("E must be positive")
    ups = lfunc.upsilon(spec, complex(sigma, E))
    slope = _theta_deriv(spec, E) if exact_theta else 0.5 * math.log(E / (2.0 * math.pi))
    denom = ups.real + slope
    if abs(denom) < COALESCENCE_TOL:
        raise CoalescenceError(f"level-spacing denominator {denom:.3e} vanishes")
    return math.pi / denom


@dataclass(frozen=True)
class FlowSample:
    sigma: float
    energy: float
    dE_dsigma: float


@dataclass(frozen=True)
class FlowTrajectory:
    """Samples of E_n(sigma) with sigma strictly decreasing.

    ``sigma_c`` is the abscissa where continuation broke down (coalesced or
    solver_lost); ``denominator`` is Re Upsilon + theta' at the last sample.
    """

    n: int
    samples: tuple[FlowSample, ...]
    status: str
    sigma_c: Optional[float] = None
    denominator: float = float("nan")
    partner: Optional[int] = None
    pair_gap: Optional[float] = None
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def final(self) -> FlowSample:
        return self.samples[-1]

    def energies(self) -> list[float]:
        return [s.energy for s in self.samples]

    def sigmas(self) -> list[float]:
        return [s.sigma for s in self.samples]


def _correct(spec: LFunctionSpec, n: int, sigma: float, E0: float, max_iter: int = MAX_CORRECTOR_ITERS,
             delta: float = 0.0) -> tuple[bool, float, int]:
    """Newton on the surrogate h at fixed sigma, then a branch check on F."""
    ev = _PhaseEvaluator(spec, sigma)
    target = ev.phase.target(n)
    E = E0
    for it in range(1, max_iter + 1):
        h, dh, _ = ev.surrogate(E, n)
        if dh == 0 or not math.isfinite(dh):
            return False, E, it
        step = -h / dh
        E += step
        if abs(step) <= 1e-13 * max(1.0, abs(E)):
            break
    else:
        return False, E, max_iter + 1
    try:
        val, der = ev.raw(E)[:2]
    except ZeroOnPathError:
        return False, E, it
    F = val - target
    if abs(F) > 0.5 * math.pi:
        return False, E, it
    if der != 0 and abs(F / der) < 1.0:
        E -= F / der
    return True, E, it


def _march(spec: LFunctionSpec, n: int, sigma_start: float, sigma_end: float, step_init: float):
    rec = solve_zero(spec, n, sigma_start)
    if not rec.converged:
        raise SpecflowError(f"no converged start for n = {n} at sigma = {sigma_start} ({rec.status})")
    sig, E = float(sigma_start), rec.energy
    dE = dE_dsigma(spec, sig, E)
    samples = [FlowSample(sig, float(E), float(dE))]
    h = step_init
    while sig > sigma_end:
        h = min(h, sig - sigma_end)
        nxt = sig - h if sig - h > sigma_end else sigma_end
        pred = E - (sig - nxt) * dE
        ok, En, iters = _correct(spec, n, nxt, pred)
        if ok and abs(En - E) <= MAX_JUMP:
            try:
                dEn = dE_dsigma(spec, nxt, En)
            except (NearZeroError, CoalescenceError):
                ok = False
        else:
            ok = False
        if ok:
            sig, E, dE = nxt, En, dEn
            samples.append(FlowSample(float(sig), float(E), float(dE)))
            if iters <= 3:
                h = min(2.0 * h, step_init)
        else:
            h *= 0.5
            if h < MIN_STEP:
                return samples, sig
    return samples, None


def flow_trajectory(spec: LFunctionSpec, n: int, sigma_start: float = 3.0, sigma_end: float = 0.5 + 1e-6,
                    step_init: float = 0.02, refine: bool = True, check_pair: bool = True) -> FlowTrajectory:
    """Continue E_n(sigma) from ``sigma_start`` down to ``sigma_end``.

    Euler predictor with dE/dsigma, Newton corrector at the new sigma, step
    halving when |dE| > 0.5 per step or the corrector needs more than eight
    iterations.  A breakdown is reported as ``coalesced`` when a neighbouring
    level breaks down within 0.01 in sigma, otherwise as ``solver_lost``.
    """
    _check_spec(spec)
    if not sigma_start > sigma_end >= 0.5:
        raise DomainError("need sigma_start > sigma_end >= 1/2")
    if step_init <= 0:
        raise DomainError("step_init must be positive")
    samples, broke = _march(spec, n, sigma_start, sigma_end, step_init)
    last = samples[-1]
    ups = lfunc.upsilon(spec, complex(last.sigma, last.energy))
    denom = ups.real + _theta_deriv(spec, last.energy)
    if broke is None:
        if refine and sigma_end - 0.5 <= 1.000001e-6:
            E = last.energy
            for d in REFINE_DELTAS:
                if 0.5 + d >= last.sigma:
                    continue
                ok, E2, _ = _correct(spec, n, 0.5 + d, E, max_iter=20)
                if not ok:
                    break
                E = E2
                # within delta of the zero, inside upsilon's exclusion radius on purpose
                val, der = lfunc.evaluate(spec, complex(0.5 + d, E))
                ups = der / val
                denom = ups.real + _theta_deriv(spec, E)
                samples.append(FlowSample(0.5 + d, float(E), float(-ups.imag / denom)))
        return FlowTrajectory(n, tuple(samples), REACHED_LINE, None, float(denom))
    status = SOLVER_LOST
    partner = gap = None
    if check_pair:
        for m in (n - 1, n + 1):
            if m < 1:
                continue
            other, other_broke = _march(spec, m, sigma_start, sigma_end, step_init)
            if other_broke is not None and abs(other_broke - broke) <= PAIR_WINDOW:
                status = COALESCED
                partner = m
                gap = abs(other[-1].energy - last.energy)
                break
    return FlowTrajectory(n, tuple(samples), status, broke, float(denom), partner, gap)


def _trajectory_job(args) -> FlowTrajectory:
    spec, n, kwargs = args
    return flow_trajectory(spec, n, **kwargs)


def flow_trajectories(spec: LFunctionSpec, ns: Sequence[int], workers: int = 1, **kwargs) -> list[FlowTrajectory]:
    """flow_trajectory for each n, returned in the order of ``ns``."""
    jobs = [(spec, int(n), kwargs) for n in ns]
    if workers <= 1 or len(jobs) <= 1:
        return [_trajectory_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=int(workers)) as pool:
        return list(pool.map(_trajectory_job, jobs))
