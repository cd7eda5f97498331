"""Pure-NumPy implementation of the superposition quadrature kernel.

Same contract as the compiled extension in ``_kernels.pyx``. The triple
phase sum factorizes per output point, so the work is staged as three
matrix contractions over output chunks (the time contraction is a GEMM
and dominates).
"""

from __future__ import annotations

import numpy as np

HAVE_COMPILED = False

_CHUNK_TARGET = 1 << 21  # complex temporaries per chunk, ~32 MB


def scatter_phase_sum(pump, rho, z, t, q_sum, kz_sum, w_sum, out):
    """Accumulate, for every output point o,

        out[o] = sum_{a,b,c} pump[a,b,c]
                 * exp(i*(w_sum[o]*t[c] - kz_sum[o]*z[b] - q_sum[o]*rho[a]))

    ``pump`` has shape (len(rho), len(z), len(t)); ``out`` is overwritten.
    """
    n_rho, n_z, n_t = pump.shape
    n_out = out.shape[0]
    pump2 = pump.reshape(n_rho * n_z, n_t)
    chunk = max(1, _CHUNK_TARGET // max(n_rho * n_z, 1))
    for s in range(0, n_out, chunk):
        e = min(s + chunk, n_out)
        e_t = np.exp(1j * np.outer(t, w_sum[s:e]))            # (n_t, m)
        g = (pump2 @ e_t).reshape(n_rho, n_z, e - s)          # (n_rho, n_z, m)
        e_z = np.exp(-1j * np.outer(kz_sum[s:e], z))          # (m, n_z)
        h = np.einsum("abo,ob->ao", g, e_z)                   # (n_rho, m)
        e_r = np.exp(-1j * np.outer(q_sum[s:e], rho))         # (m, n_rho)
        out[s:e] = np.einsum("ao,oa->o", h, e_r)
    return out
