"""Quadrature-kernel backend selection.

The compiled Cython extension is used when it was built; otherwise the
NumPy implementation takes over transparently. ``SPDCSIM_BACKEND=numpy``
forces the fallback (useful for benchmarking and debugging). Output points
are independent, so multi-thread execution just splits the output range;
results do not depend on the thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels_py
from .errors import ValidationError

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built; pure-Python install
    _compiled = None

_BACKENDS = {"numpy": _kernels_py}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

_env = os.environ.get("SPDCSIM_BACKEND", "").strip().lower()
if _env and _env not in _BACKENDS:
    raise ValidationError(
        f"SPDCSIM_BACKEND={_env!r} not available (choices: {sorted(_BACKENDS)})"
    )
DEFAULT_BACKEND = _env or ("compiled" if _compiled is not None else "numpy")


def backend_name() -> str:
    return DEFAULT_BACKEND


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def scatter_phase_sum(pump, rho, z, t, q_sum, kz_sum, w_sum,
                      threads: int = 1, backend: str | None = None) -> np.ndarray:
    """Evaluate the triple phase sum for every output point.

    out[o] = sum_{a,b,c} pump[a,b,c]
             * exp(i*(w_sum[o]*t[c] - kz_sum[o]*z[b] - q_sum[o]*rho[a]))
    """
    name = backend or DEFAULT_BACKEND
    try:
        impl = _BACKENDS[name]
    except KeyError:
        raise ValidationError(
            f"unknown kernel backend {name!r} (choices: {sorted(_BACKENDS)})"
        ) from None

    pump = np.ascontiguousarray(pump, dtype=np.complex128)
    rho = np.ascontiguousarray(rho, dtype=float)
    z = np.ascontiguousarray(z, dtype=float)
    t = np.ascontiguousarray(t, dtype=float)
    q_sum = np.ascontiguousarray(q_sum, dtype=float)
    kz_sum = np.ascontiguousarray(kz_sum, dtype=float)
    w_sum = np.ascontiguousarray(w_sum, dtype=float)
    n_out = q_sum.shape[0]
    out = np.empty(n_out, dtype=np.complex128)

    if threads <= 1 or n_out < 2 * threads:
        impl.scatter_phase_sum(pump, rho, z, t, q_sum, kz_sum, w_sum, out)
        return out

    bounds = np.linspace(0, n_out, threads + 1, dtype=int)

    def run(lo, hi):
        impl.scatter_phase_sum(
            pump, rho, z, t, q_sum[lo:hi], kz_sum[lo:hi], w_sum[lo:hi], out[lo:hi]
        )

    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(run, bounds[i], bounds[i + 1])
            for i in range(threads)
            if bounds[i] < bounds[i + 1]
        ]
        for fut in futures:
            fut.result()
    return out
