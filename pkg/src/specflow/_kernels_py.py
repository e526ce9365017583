"""Pure numpy implementation of the partial Dirichlet sums.

Same signatures and results (to rounding) as the compiled ``_kernels``.
"""
import numpy as np


def dirichlet_sum(logn, cre, cim, sigma, t):
    n = len(logn)
    z = np.exp(-complex(sigma, t) * logn)
    c = cre[:n] + 1j * cim[:n]
    cz = c * z
    return complex(cz.sum()), complex(-(logn * cz).sum())


def dirichlet_sum_real(logn, cre, sigma, t):
    n = len(logn)
    cz = cre[:n] * np.exp(-complex(sigma, t) * logn)
    return complex(cz.sum()), complex(-(logn * cz).sum())


def phase_table(logn, cre, cim, t):
    n = len(logn)
    p = (cre[:n] + 1j * cim[:n]) * np.exp(-1j * t * logn)
    return np.ascontiguousarray(p.real), np.ascontiguousarray(p.imag)


def phased_sum(logn, pr, pi, sigma):
    w = np.exp(-sigma * logn)
    wr = w * pr
    wi = w * pi
    return complex(wr.sum(), wi.sum()), complex(-(logn * wr).sum(), -(logn * wi).sum())
