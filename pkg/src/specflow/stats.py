"""Unfolded level spacings and their comparison with random-matrix laws.

Spacings are unfolded with the mean density log(E/2pi)/2pi,

    delta_n^(k) = (E_{n+k} - E_n) log(E_n / 2 pi) / 2 pi,

so that k = 1 spacings have unit mean.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, InsufficientDataError
from .lfunc import LFunctionSpec

MIN_SPACINGS = 100

_erf = np.frompyfunc(math.erf, 1, 1)


@dataclass(frozen=True)
class SpacingSample:
    n: int
    k: int
    value: float


def _unfolded(energies: np.ndarray, k: int) -> np.ndarray:
    if k < 1:
        raise DomainError("neighbour order k must be >= 1")
    E = np.asarray(energies, dtype=float)
    if E.ndim != 1:
        raise DomainError("energies must be one-dimensional")
    if E.size and (np.any(np.diff(E) <= 0) or E[0] <= 2.0 * math.pi):
        raise DomainError("energies must be strictly increasing and above 2 pi")
    if E.size <= k:
        return np.zeros(0)
    return (E[k:] - E[:-k]) * np.log(E[:-k] / (2.0 * math.pi)) / (2.0 * math.pi)


def normalized_spacings(energies: Sequence[float], k: int = 1, first_index: int = 1) -> list[SpacingSample]:
    """delta_n^(k) for consecutive energies; ``first_index`` labels energies[0]."""
    vals = _unfolded(np.asarray(energies, dtype=float), k)
    return [SpacingSample(first_index + i, k, float(v)) for i, v in enumerate(vals)]


def wigner_surmise(v):
    """rho_w(v) = 32 v^2 / pi^2 exp(-4 v^2 / pi)."""
    v = np.asarray(v, dtype=float)
    if np.any(v < 0):
        raise DomainError("v must be non-negative")
    out = 32.0 / math.pi**2 * v * v * np.exp(-4.0 * v * v / math.pi)
    return float(out) if out.ndim == 0 else out


def wigner_cdf(v):
    """Integral of the surmise from 0 to v: erf(2v/sqrt(pi)) - (4v/pi) exp(-4v^2/pi)."""
    v = np.maximum(np.asarray(v, dtype=float), 0.0)
    out = np.asarray(_erf(2.0 * v / math.sqrt(math.pi)), dtype=float) - 4.0 / math.pi * v * np.exp(-4.0 * v * v / math.pi)
    return float(out) if out.ndim == 0 else out


def gue_pair_correlation(v):
    """1 - (sin(pi v) / (pi v))^2."""
    v = np.asarray(v, dtype=float)
    if np.any(v < 0):
        raise DomainError("v must be non-negative")
    out = 1.0 - np.sinc(v) ** 2
    return float(out) if out.ndim == 0 else out


def ks_statistic(values: Sequence[float], cdf=wigner_cdf) -> float:
    """Kolmogorov-Smirnov distance between the empirical CDF of ``values`` and ``cdf``."""
    x = np.sort(np.asarray(values, dtype=float))
    m = x.size
    if m == 0:
        raise InsufficientDataError("no samples")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - F), np.max(F - (i - 1) / m)))


@dataclass(frozen=True)
class SpacingHistogram:
    """Unit-area histogram of unfolded spacings.

    ``gap`` is the left edge of the first occupied bin, so the empirical
    density vanishes on (0, gap).
    """

    edges: np.ndarray
    density: np.ndarray
    ks: float
    n_samples: int
    min_spacing: float
    gap: float
    mean: float

    def rows(self) -> list[tuple[float, float, float]]:
        return [(float(a), float(b), float(d)) for a, b, d in zip(self.edges[:-1], self.edges[1:], self.density)]

    def summary(self) -> dict:
        return {"ks": self.ks, "n_samples": self.n_samples, "min_spacing": self.min_spacing,
                "gap": self.gap, "mean": self.mean}


def histogram_from_spacings(values: Sequence[float], bins: int = 50, v_max: Optional[float] = None) -> SpacingHistogram:
    """Histogram, KS distance against the surmise and minimum spacing."""
    v = np.asarray(values, dtype=float)
    if v.size < MIN_SPACINGS:
        raise InsufficientDataError(f"{v.size} spacings; at least {MIN_SPACINGS} are needed")
    if bins < 1:
        raise DomainError("bins must be >= 1")
    top = float(v.max())
    if v_max is None or v_max < top:
        v_max = top * (1.0 + 1e-12)
    counts, edges = np.histogram(v, bins=bins, range=(0.0, v_max))
    density = counts / (v.size * np.diff(edges))
    first = int(np.flatnonzero(counts)[0])
    return SpacingHistogram(edges, density, ks_statistic(v), int(v.size), float(v.min()), float(edges[first]),
                            float(v.mean()))


def spacing_histogram(spec: LFunctionSpec, sigma: float, n_lo: int, n_hi: int, bins: int = 50,
                      energies: Optional[Sequence[float]] = None, k: int = 1, workers: int = 1,
                      v_max: Optional[float] = None) -> SpacingHistogram:
    """Spacing statistics of E_n(sigma) for n_lo <= n <= n_hi.

    Energies are taken from the (cached) zero table unless given; levels that
    did not converge are dropped, which a caller can detect from n_samples.
    """
    if energies is None:
        from .solver import zero_table

        recs = zero_table(spec, n_lo, n_hi, sigma, workers=workers)
        energies = [r.energy for r in recs if r.converged]
    vals = _unfolded(np.asarray(energies, dtype=float), k)
    return histogram_from_spacings(vals, bins, v_max)
