# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled partial Dirichlet sums (the dominant cost of every L evaluation)."""
from libc.math cimport cos, exp, sin


def dirichlet_sum(const double[::1] logn, const double[::1] cre,
                  const double[::1] cim, double sigma, double t):
    """Return (sum c_n n^-s, sum -c_n log(n) n^-s) for s = sigma + i t."""
    cdef Py_ssize_t j, n = logn.shape[0]
    cdef double sr = 0.0, si = 0.0, dr = 0.0, di = 0.0
    cdef double L, w, a, zr, zi, tr, ti, sa, ca
    if cre.shape[0] < n or cim.shape[0] < n:
        raise ValueError("coefficient arrays shorter than log table")
    for j in range(n):
        L = logn[j]
        w = exp(-sigma * L)
        a = t * L
        ca = cos(a)
        sa = sin(a)
        zr = w * ca
        zi = -w * sa
        tr = zr * cre[j] - zi * cim[j]
        ti = zr * cim[j] + zi * cre[j]
        sr += tr
        si += ti
        dr -= L * tr
        di -= L * ti
    return complex(sr, si), complex(dr, di)


def dirichlet_sum_real(const double[::1] logn, const double[::1] cre,
                       double sigma, double t):
    """Real-coefficient variant of :func:`dirichlet_sum`."""
    cdef Py_ssize_t j, n = logn.shape[0]
    cdef double sr = 0.0, si = 0.0, dr = 0.0, di = 0.0
    cdef double L, w, a, tr, ti, sa, ca
    if cre.shape[0] < n:
        raise ValueError("coefficient array shorter than log table")
    for j in range(n):
        L = logn[j]
        w = cre[j] * exp(-sigma * L)
        a = t * L
        ca = cos(a)
        sa = sin(a)
        tr = w * ca
        ti = -w * sa
        sr += tr
        si += ti
        dr -= L * tr
        di -= L * ti
    return complex(sr, si), complex(dr, di)


def phase_table(const double[::1] logn, const double[::1] cre,
                const double[::1] cim, double t):
    """Return (re, im) arrays of c_n n^{-i t} for repeated use at fixed t."""
    cdef Py_ssize_t j, n = logn.shape[0]
    cdef double sa, ca
    out_re = bytearray(8 * n)
    out_im = bytearray(8 * n)
    cdef double[::1] pr = memoryview(out_re).cast("d")
    cdef double[::1] pi = memoryview(out_im).cast("d")
    for j in range(n):
        ca = cos(t * logn[j])
        sa = sin(t * logn[j])
        pr[j] = ca * cre[j] + sa * cim[j]
        pi[j] = ca * cim[j] - sa * cre[j]
    return pr, pi


def phased_sum(const double[::1] logn, const double[::1] pr,
               const double[::1] pi, double sigma):
    """Sum over precomputed phases: (sum p_n n^-sigma, sum -p_n log(n) n^-sigma)."""
    cdef Py_ssize_t j, n = logn.shape[0]
    cdef double sr = 0.0, si = 0.0, dr = 0.0, di = 0.0, L, w
    for j in range(n):
        L = logn[j]
        w = exp(-sigma * L)
        sr += w * pr[j]
        si += w * pi[j]
        dr -= L * w * pr[j]
        di -= L * w * pi[j]
    return complex(sr, si), complex(dr, di)
