# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loop for the pair-creation superposition quadrature.

Contract identical to ``_kernels_py.scatter_phase_sum``. Outputs are
processed in blocks so each pump row is streamed once per block instead
of once per output, and all complex arithmetic runs on split re/im
arrays, which the C compiler can vectorize.
"""

import numpy as np

from libc.math cimport cos, sin

HAVE_COMPILED = True

cdef enum:
    BLOCK = 16  # outputs per block; phase tables stay cache resident


cdef void _run(const double* pre, const double* pim,
               Py_ssize_t n_rho, Py_ssize_t n_z, Py_ssize_t n_t,
               const double* rho, const double* z, const double* t,
               const double* q_sum, const double* kz_sum, const double* w_sum,
               Py_ssize_t n_out,
               double* prre, double* prim, double* pzre, double* pzim,
               double* ptre, double* ptim,
               double complex* out) noexcept nogil:
    cdef Py_ssize_t o0, nb, oo, o, a, b, c, base
    cdef Py_ssize_t block = BLOCK
    cdef double ph, xr, xi, yr, yi, dre, dim_, wr, wi
    cdef double accre[BLOCK]
    cdef double accim[BLOCK]

    o0 = 0
    while o0 < n_out:
        nb = n_out - o0
        if nb > block:
            nb = block
        for oo in range(nb):
            o = o0 + oo
            for a in range(n_rho):
                ph = -q_sum[o] * rho[a]
                prre[oo * n_rho + a] = cos(ph)
                prim[oo * n_rho + a] = sin(ph)
            for b in range(n_z):
                ph = -kz_sum[o] * z[b]
                pzre[oo * n_z + b] = cos(ph)
                pzim[oo * n_z + b] = sin(ph)
            for c in range(n_t):
                ph = w_sum[o] * t[c]
                ptre[oo * n_t + c] = cos(ph)
                ptim[oo * n_t + c] = sin(ph)
            accre[oo] = 0.0
            accim[oo] = 0.0
        for a in range(n_rho):
            for b in range(n_z):
                base = (a * n_z + b) * n_t
                for oo in range(nb):
                    dre = 0.0
                    dim_ = 0.0
                    for c in range(n_t):
                        xr = pre[base + c]
                        xi = pim[base + c]
                        yr = ptre[oo * n_t + c]
                        yi = ptim[oo * n_t + c]
                        dre = dre + xr * yr - xi * yi
                        dim_ = dim_ + xr * yi + xi * yr
                    wr = (pzre[oo * n_z + b] * prre[oo * n_rho + a]
                          - pzim[oo * n_z + b] * prim[oo * n_rho + a])
                    wi = (pzre[oo * n_z + b] * prim[oo * n_rho + a]
                          + pzim[oo * n_z + b] * prre[oo * n_rho + a])
                    accre[oo] = accre[oo] + dre * wr - dim_ * wi
                    accim[oo] = accim[oo] + dre * wi + dim_ * wr
        for oo in range(nb):
            out[o0 + oo] = accre[oo] + 1j * accim[oo]
        o0 += block


def scatter_phase_sum(pump, rho, z, t, q_sum, kz_sum, w_sum, out):
    pump = np.ascontiguousarray(pump, dtype=np.complex128)
    cdef const double[::1] pre = np.ascontiguousarray(pump.real).reshape(-1)
    cdef const double[::1] pim = np.ascontiguousarray(pump.imag).reshape(-1)
    cdef const double[::1] rho_v = np.ascontiguousarray(rho, dtype=np.float64)
    cdef const double[::1] z_v = np.ascontiguousarray(z, dtype=np.float64)
    cdef const double[::1] t_v = np.ascontiguousarray(t, dtype=np.float64)
    cdef const double[::1] qs = np.ascontiguousarray(q_sum, dtype=np.float64)
    cdef const double[::1] kzs = np.ascontiguousarray(kz_sum, dtype=np.float64)
    cdef const double[::1] ws = np.ascontiguousarray(w_sum, dtype=np.float64)
    cdef double complex[::1] out_v = out

    cdef Py_ssize_t n_rho = pump.shape[0]
    cdef Py_ssize_t n_z = pump.shape[1]
    cdef Py_ssize_t n_t = pump.shape[2]
    cdef Py_ssize_t n_out = out_v.shape[0]
    if n_out == 0:
        return np.asarray(out)

    scratch = np.empty((6, BLOCK * max(n_rho, n_z, n_t)), dtype=np.float64)
    cdef double[:, ::1] sc = scratch

    with nogil:
        _run(&pre[0], &pim[0], n_rho, n_z, n_t,
             &rho_v[0], &z_v[0], &t_v[0], &qs[0], &kzs[0], &ws[0], n_out,
             &sc[0, 0], &sc[1, 0], &sc[2, 0], &sc[3, 0], &sc[4, 0], &sc[5, 0],
             &out_v[0])
    return np.asarray(out)
