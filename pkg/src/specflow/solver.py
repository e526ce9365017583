"""Zeros E_n(sigma) of the phase equation, zero counting and off-line zeros.

The phase function

    F_n(E) = theta(E) + arg L(sigma + iE) - (n - c) pi

is a smoothed staircase at sigma = 1/2 + delta: plateaus near (m + 1/2) pi and
jumps of pi, of width about delta, at every zero on the line.  A full
evaluation of F needs the continuous argument, so it is only used to
bracket and to fix the branch.  Inside the bracket the root is found on the
smooth surrogate

    h(E) = Im(exp(i (theta(E) - (n - c) pi)) L(sigma + iE)) = |L| sin F_n(E),

which is essentially Hardy's Z-function and costs one L evaluation.
"""
from __future__ import annotations

import cmath
import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from . import lfunc
from .errors import DomainError, SpecflowError, ZeroOnPathError
from .lfunc import LFunctionSpec
from .specfun import lambert_w0, rs_theta, rs_theta_deriv

CONVERGED = "converged"
NO_SOLUTION = "no_solution"
BRACKET_FAILED = "bracket_failed"
STATUSES = (CONVERGED, NO_SOLUTION, BRACKET_FAILED)

RESIDUAL_TOL = 1e-10
DEFAULT_DELTA = 1e-6
_MAX_EXPAND = 60
_MAX_BISECT = 200
_MAX_NEWTON = 60

CACHE_ENV = "SPECFLOW_CACHE_DIR"


class BracketFailedError(SpecflowError):
    """Numerical breakdown while scanning indices (distinct from no_solution)."""

    def __init__(self, message: str, indices: list[int]):
        super().__init__(message)
        self.indices = indices


@dataclass(frozen=True)
class ZeroRecord:
    """One solved level.

    ``residual`` is |F/F'| at the returned energy, i.e. the remaining
    Newton correction in ordinate units; ``l_residual`` is |L(sigma_eff + iE)|.
    """

    n: int
    sigma: float
    energy: float
    residual: float
    status: str
    delta: float = 0.0
    l_residual: float = float("nan")
    evaluations: int = 0

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED


@dataclass(frozen=True)
class OfflineZero:
    """A zero off the critical line, normalised to Re > 1/2, Im > 0."""

    rho: complex
    residual: float
    family: LFunctionSpec
    iterations: int = 0

    def symmetric_set(self) -> tuple[complex, complex, complex, complex]:
        r = self.rho
        return (r, r.conjugate(), 1 - r, 1 - r.conjugate())


@dataclass(frozen=True)
class OnLineZero:
    """Newton converged to a zero on Re s = 1/2."""

    rho: complex
    residual: float
    family: LFunctionSpec
    iterations: int = 0


# ---------------------------------------------------------------------------
# seeds and the theta backbone


def lambert_seed(n: int) -> float:
    """Free-theory seed 2 pi (n - 11/8) / W((n - 11/8)/e)."""
    if n < 1:
        raise DomainError("lambert_seed needs n >= 1")
    a = n - 11.0 / 8.0
    return 2.0 * math.pi * a / lambert_w0(a / math.e)


def asymptotic_theta(t: float) -> float:
    """(t/2) log(t/2 pi e) - pi/8 + 1/(48 t)."""
    return 0.5 * t * math.log(t / (2.0 * math.pi * math.e)) - math.pi / 8.0 + 1.0 / (48.0 * t)


def asymptotic_theta_deriv(t: float) -> float:
    return 0.5 * math.log(t / (2.0 * math.pi)) - 1.0 / (48.0 * t * t)


class _Phase:
    """theta, theta' and the target (n - c) pi for one spec."""

    def __init__(self, spec: LFunctionSpec, asymptotic: bool = False):
        if asymptotic and spec.family != "zeta":
            raise DomainError("the asymptotic theta form exists for zeta only")
        self.spec = spec
        self.kind = spec.theta_kind
        self.asymptotic = asymptotic
        self.c = spec.zero_offset
        self._tmin = None

    def theta(self, t: float) -> float:
        return asymptotic_theta(t) if self.asymptotic else rs_theta(self.kind, t)

    def dtheta(self, t: float) -> float:
        return asymptotic_theta_deriv(t) if self.asymptotic else rs_theta_deriv(self.kind, t)

    def target(self, n: int) -> float:
        return (n - self.c) * math.pi

    @property
    def t_min(self) -> float:
        """Where theta' changes sign; theta is increasing beyond it."""
        if self._tmin is None:
            lo, hi = 0.05, 40.0
            if self.dtheta(lo) >= 0:
                self._tmin = lo
            else:
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    if self.dtheta(mid) < 0:
                        lo = mid
                    else:
                        hi = mid
                self._tmin = hi
        return self._tmin

    def backbone(self, n: int) -> float:
        """Root of theta(E) = (n - c) pi on the increasing branch."""
        if self.spec.family == "zeta" and not self.asymptotic:
            return lambert_seed(n)
        target = self.target(n)
        lo = self.t_min
        if self.theta(lo) >= target:
            return lo
        hi = max(2.0 * lo, 10.0)
        while self.theta(hi) < target:
            hi *= 2.0
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if self.theta(mid) < target:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-12 * hi:
                break
        return 0.5 * (lo + hi)


def _check_spec(spec: LFunctionSpec) -> None:
    if not spec.real_on_line:
        raise DomainError(f"the phase equation is implemented for self-dual families, not {spec.family}")


def _effective_sigma(sigma: float, delta: float) -> float:
    if sigma < 0.5:
        raise DomainError("sigma must be >= 1/2")
    if delta < 0:
        raise DomainError("delta must be >= 0")
    return 0.5 + delta if sigma == 0.5 else sigma


class _PhaseEvaluator:
    """Evaluates F and the surrogate h, caching full F evaluations by E."""

    def __init__(self, spec: LFunctionSpec, sigma_eff: float, asymptotic: bool = False):
        self.spec = spec
        self.sigma = sigma_eff
        self.phase = _Phase(spec, asymptotic)
        self.cache: dict[float, tuple[float, float]] = {}
        self.count = 0

    def raw(self, E: float) -> tuple[float, float, complex, complex]:
        """(theta + arg, theta' + Re Upsilon, L, L') at E."""
        self.count += 1
        tr = lfunc.continuous_arg(self.spec, self.sigma, E)
        ups = tr.derivative / tr.value
        return self.phase.theta(E) + tr.arg_value, self.phase.dtheta(E) + ups.real, tr.value, tr.derivative

    def total_phase(self, E: float) -> float:
        """theta + arg at E; perturbs E slightly if the path meets a zero."""
        hit = self.cache.get(E)
        if hit is not None:
            return hit[0]
        try:
            val, der = self.raw(E)[:2]
        except ZeroOnPathError:
            val, der = self.raw(E * (1.0 + 1e-12) + 1e-12)[:2]
        self.cache[E] = (val, der)
        return val

    def surrogate(self, E: float, n: int) -> tuple[float, float, complex]:
        self.count += 1
        val, der = lfunc.evaluate(self.spec, complex(self.sigma, E))
        rot = cmath.exp(1j * (self.phase.theta(E) - self.phase.target(n)))
        h = (rot * val).imag
        dh = (rot * (self.phase.dtheta(E) * val + der)).real
        return h, dh, val


def _bracket(ev: _PhaseEvaluator, n: int) -> Optional[tuple[float, float, float, float]]:
    """Expanded bracket [lo, hi] with F(lo) < 0 < F(hi), or None."""
    ph = ev.phase
    target = ph.target(n)
    mid = ph.backbone(n)
    nxt = ph.backbone(n + 1)
    hi = 0.5 * (mid + nxt)
    if n > 1:
        lo = 0.5 * (ph.backbone(n - 1) + mid)
    else:
        lo = mid - 0.5 * (nxt - mid)
    floor = ph.t_min if ev.spec.has_pole or ph.asymptotic else 0.5 * ph.t_min
    lo = max(lo, floor)
    width = hi - lo
    flo = ev.total_phase(lo) - target
    for _ in range(_MAX_EXPAND):
        if flo < 0:
            break
        if lo <= floor:
            return None
        lo = max(lo - width, floor)
        flo = ev.total_phase(lo) - target
    else:
        return None
    fhi = ev.total_phase(hi) - target
    for _ in range(_MAX_EXPAND):
        if fhi > 0:
            break
        hi += width
        fhi = ev.total_phase(hi) - target
    else:
        return None
    return lo, hi, flo, fhi


def _solve_surrogate(ev: _PhaseEvaluator, n: int, lo: float, hi: float) -> tuple[float, float]:
    """Safeguarded Newton on h inside [lo, hi]; h(lo) < 0 < h(hi)."""
    x = 0.5 * (lo + hi)
    h, dh, val = ev.surrogate(x, n)
    for _ in range(_MAX_NEWTON):
        if h == 0.0:
            break
        if h < 0:
            lo = x
        else:
            hi = x
        step = -h / dh if dh != 0 else float("inf")
        x_new = x + step
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
            step = x_new - x
        x = x_new
        h, dh, val = ev.surrogate(x, n)
        if abs(step) <= 2e-15 * max(1.0, abs(x)) or hi - lo <= 4e-16 * abs(x):
            break
    return x, abs(val)


def _solve(ev: _PhaseEvaluator, n: int, sigma: float, delta: float) -> ZeroRecord:
    target = ev.phase.target(n)
    start = ev.count
    fail = lambda E=float("nan"): ZeroRecord(n, sigma, float(E), float("inf"), BRACKET_FAILED, delta, float("nan"), ev.count - start)

    br = _bracket(ev, n)
    if br is None:
        return fail()
    lo, hi, flo, fhi = br
    # bisect on F until both ends sit within one jump of the root
    collapse = 1e-10 * max(1.0, hi)
    for _ in range(_MAX_BISECT):
        if -math.pi < flo < 0 < fhi < math.pi:
            break
        if hi - lo < collapse:
            # the crossing is a discontinuity of the argument: no level here
            return ZeroRecord(n, sigma, float(0.5 * (lo + hi)), float("nan"), NO_SOLUTION, delta, float("nan"), ev.count - start)
        mid = 0.5 * (lo + hi)
        fm = ev.total_phase(mid) - target
        if fm < 0:
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    else:
        return fail()

    try:
        E, _ = _solve_surrogate(ev, n, lo, hi)
        # fix the branch, then polish with one Newton step on F itself
        val, der = ev.raw(E)[:2]
        F = val - target
        if abs(F) > 0.5 * math.pi or der <= 0:
            return fail(E)
        E = E - F / der
        val, der, L, _ = ev.raw(E)
        F = val - target
    except ZeroOnPathError:
        return fail()
    if abs(F) > 0.5 * math.pi or der <= 0:
        return fail(E)
    residual = abs(F / der)
    status = CONVERGED if residual < RESIDUAL_TOL else BRACKET_FAILED
    return ZeroRecord(n, sigma, float(E), float(residual), status, delta, float(abs(L)), ev.count - start)


def solve_zero(spec: LFunctionSpec, n: int, sigma: float = 0.5, delta: float = DEFAULT_DELTA,
               asymptotic: bool = False) -> ZeroRecord:
    """Solve theta(E) + arg L(sigma_eff + iE) = (n - c) pi for E = E_n(sigma).

    sigma_eff = 1/2 + delta on the critical line and sigma otherwise.
    ``asymptotic`` switches zeta's theta to its Stirling form.
    """
    _check_spec(spec)
    if n < 1:
        raise DomainError("n must be >= 1")
    sig = _effective_sigma(sigma, delta)
    ev = _PhaseEvaluator(spec, sig, asymptotic)
    return _solve(ev, n, float(sigma), float(delta) if sigma == 0.5 else 0.0)


def _solve_chunk(args) -> list[ZeroRecord]:
    spec, ns, sigma, delta, asymptotic = args
    sig = _effective_sigma(sigma, delta)
    ev = _PhaseEvaluator(spec, sig, asymptotic)
    d = float(delta) if sigma == 0.5 else 0.0
    out = []
    for n in ns:
        out.append(_solve(ev, n, float(sigma), d))
        if len(ev.cache) > 256:
            # keep only the values the next indices can reuse
            keep = sorted(ev.cache)[-32:]
            ev.cache = {k: ev.cache[k] for k in keep}
    return out


def solve_range(spec: LFunctionSpec, n_lo: int, n_hi: int, sigma: float = 0.5,
                delta: float = DEFAULT_DELTA, workers: int = 1, asymptotic: bool = False) -> list[ZeroRecord]:
    """solve_zero for n_lo..n_hi, ordered by n whatever the worker count."""
    _check_spec(spec)
    if n_lo < 1 and n_hi >= n_lo:
        raise DomainError("n must be >= 1")
    _effective_sigma(sigma, delta)
    ns = list(range(n_lo, n_hi + 1))
    if not ns:
        return []
    workers = max(1, int(workers))
    nchunks = 1 if workers == 1 else min(len(ns), 4 * workers)
    bounds = np.linspace(0, len(ns), nchunks + 1).astype(int)
    chunks = [(spec, ns[bounds[i]:bounds[i + 1]], sigma, delta, asymptotic) for i in range(nchunks) if bounds[i + 1] > bounds[i]]
    if workers == 1:
        parts = [_solve_chunk(c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_solve_chunk, chunks))
    records = [r for part in parts for r in part]
    records.sort(key=lambda r: r.n)
    return records


def count_zeros(spec: LFunctionSpec, T: float, delta: float = DEFAULT_DELTA) -> float:
    """N(T) from the argument principle; round to get the strip count."""
    _check_spec(spec)
    if T <= 0:
        raise DomainError("T must be positive")
    ph = _Phase(spec)
    tr = lfunc.continuous_arg(spec, 0.5 + delta, T)
    total = (ph.theta(T) + tr.arg_value) / math.pi
    return total + 1.0 if spec.has_pole else total


def detect_missing(spec: LFunctionSpec, n_lo: int, n_hi: int, sigma: float = 0.5,
                   delta: float = DEFAULT_DELTA, workers: int = 1) -> list[int]:
    """Indices with no solution; raises BracketFailedError on numerical breakdown."""
    if n_lo < 1:
        raise DomainError("n_lo must be >= 1")
    if n_lo > n_hi:
        return []
    records = solve_range(spec, n_lo, n_hi, sigma, delta, workers)
    failed = [r.n for r in records if r.status == BRACKET_FAILED]
    if failed:
        raise BracketFailedError(f"solver breakdown at n = {failed}", failed)
    return sorted(r.n for r in records if r.status == NO_SOLUTION)


def _normalise(rho: complex) -> complex:
    if rho.real < 0.5:
        rho = 1.0 - rho.conjugate()
    if rho.imag < 0:
        rho = rho.conjugate()
    return rho


def find_offline_zero(spec: LFunctionSpec, seed: complex, max_iter: int = 100,
                      tol: float = 1e-10) -> Union[OfflineZero, OnLineZero]:
    """Damped Newton for L(rho) = 0 started from ``seed``.

    The 2x2 Jacobian of (Re L, Im L) is [[Re L', -Im L'], [Im L', Re L']]
    by Cauchy-Riemann, so the 2D Newton step is the complex step -L/L'.
    """
    z = complex(seed)
    if not 0.0 < z.real < 1.0:
        raise DomainError("seed must lie inside the critical strip")
    val, der = lfunc.evaluate(spec, z)
    for it in range(1, max_iter + 1):
        if der == 0:
            break
        step = -val / der
        lam = 1.0
        while True:
            cand = z + lam * step
            if cand.real <= 0.0:
                lam *= 0.5
                continue
            v2, d2 = lfunc.evaluate(spec, cand)
            if abs(v2) < abs(val) or lam < 1e-6:
                break
            lam *= 0.5
        z, val, der = cand, v2, d2
        if abs(val) < tol and abs(lam * step) < 1e-12 * max(1.0, abs(z)):
            break
    else:
        raise SpecflowError(f"Newton did not converge in {max_iter} iterations (|L| = {abs(val):.2e})")
    if abs(val) >= tol:
        raise SpecflowError(f"Newton stalled at |L| = {abs(val):.2e}")
    rho = _normalise(z)
    if abs(rho.real - 0.5) < 1e-8:
        return OnLineZero(complex(0.5, rho.imag), abs(val), spec, it)
    return OfflineZero(rho, abs(val), spec, it)


# ---------------------------------------------------------------------------
# cached zero tables

_STATUS_CODE = {s: i for i, s in enumerate(STATUSES)}


def cache_dir() -> Optional[Path]:
    root = os.environ.get(CACHE_ENV)
    return Path(root) if root else None


def _table_key(spec: LFunctionSpec, n_lo: int, n_hi: int, sigma: float, delta: float) -> str:
    meta = {"family": spec.family, "q": spec.q, "n_lo": n_lo, "n_hi": n_hi, "sigma": repr(float(sigma)),
            "delta": repr(float(delta)), "version": 1}
    return hashlib.sha1(json.dumps(meta, sort_keys=True).encode()).hexdigest()[:16]


def zero_table(spec: LFunctionSpec, n_lo: int, n_hi: int, sigma: float = 0.5, delta: float = DEFAULT_DELTA,
               workers: int = 1, cache: Optional[Union[str, Path]] = None) -> list[ZeroRecord]:
    """solve_range with an optional flat-file cache (``$SPECFLOW_CACHE_DIR``)."""
    root = Path(cache) if cache is not None else cache_dir()
    path = None
    if root is not None:
        path = root / f"zeros-{spec.family}-{_table_key(spec, n_lo, n_hi, sigma, delta)}.npz"
        if path.exists():
            data = np.load(path)
            return [ZeroRecord(int(n), float(sigma), float(e), float(r), STATUSES[int(c)], float(d), float(lr), 0)
                    for n, e, r, c, d, lr in zip(data["n"], data["energy"], data["residual"], data["status"],
                                                 data["delta"], data["l_residual"])]
    records = solve_range(spec, n_lo, n_hi, sigma, delta, workers)
    if path is not None:
        root.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp.npz")
        np.savez(tmp, n=np.array([r.n for r in records]), energy=np.array([r.energy for r in records]),
                 residual=np.array([r.residual for r in records]),
                 status=np.array([_STATUS_CODE[r.status] for r in records]),
                 delta=np.array([r.delta for r in records]), l_residual=np.array([r.l_residual for r in records]))
        os.replace(tmp, path)
    return records


def record_dict(rec: ZeroRecord) -> dict:
    return asdict(rec)
