"""Pump photon models.

Two variants: an on-axis monochromatic plane wave (the idealized limit,
represented on grids by a discrete delta surrogate) and a Gaussian
beam/pulse with spectral amplitude

    phi_p(q, w) = exp(-q^2 w0^2 / 4) * exp(-(w - w0_c)^2 / (4 sigma_w^2)).

The position-space amplitude follows from the plane-wave decomposition
psi_p(rho', z', t') = sum over (q, w) of phi_p * exp(i q rho' + i kz z'
- i w t') with the paraxial longitudinal component; for the Gaussian model
it is evaluated by midpoint quadrature over the pump's own mode grid.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import mode_kz
from .errors import GridTooCoarse, ValidationError
from .phasematch import wavenumber

MAX_PHASE_STEP = math.pi / 4.0  # aliasing guard for all midpoint quadratures


def _nearest_mask(dist: np.ndarray) -> np.ndarray:
    """Mask of entries tied (to float fuzz) with the minimum distance."""
    dmin = float(dist.min())
    span = float(dist.max()) - dmin
    return dist <= dmin + 1e-9 * span


def midpoint_nodes(half_width: float, n: int) -> tuple[np.ndarray, float]:
    """Midpoint nodes and step covering [-half_width, +half_width]."""
    if n < 1:
        raise ValidationError("quadrature needs at least one node")
    step = 2.0 * half_width / n
    nodes = -half_width + (np.arange(n) + 0.5) * step
    return nodes, step


@dataclass(frozen=True)
class PumpQuadrature:
    """Mode-grid resolution for the Gaussian pump's plane-wave sum."""

    n_q: int = 64
    n_omega: int = 64
    span_sigmas: float = 5.0

    def __post_init__(self):
        if self.n_q < 2 or self.n_omega < 2:
            raise ValidationError("pump quadrature needs >= 2 points per axis")
        if not (self.span_sigmas > 0):
            raise ValidationError("pump quadrature span must be > 0")


@dataclass(frozen=True)
class PlaneWavePump:
    """Monochromatic on-axis plane wave at angular frequency omega0."""

    omega0: float
    index_model: object
    kind = "planewave"

    def __post_init__(self):
        if not (self.omega0 > 0):
            raise ValidationError("pump.omega0 must be > 0")

    @property
    def wavenumber0(self) -> float:
        return float(wavenumber(self.omega0, self.index_model))

    def spectral_amplitude(self, q, w):
        """Discrete delta surrogate: 1 on the evaluation points nearest
        (q=0, w=omega0), 0 elsewhere.

        Nearness is judged within the supplied arrays, which stand in for
        the grid bins; a strict delta only arises in the continuum limit.
        """
        q = np.atleast_1d(np.asarray(q, dtype=float))
        w = np.atleast_1d(np.asarray(w, dtype=float))
        q, w = np.broadcast_arrays(q, w)
        mask = _nearest_mask(np.abs(q)) & _nearest_mask(np.abs(w - self.omega0))
        return mask.astype(np.complex128)

    def position_amplitude(self, rho, z, t):
        """exp(i (k_p z - omega0 t)); unit modulus everywhere."""
        rho, z, t = np.broadcast_arrays(
            np.asarray(rho, dtype=float), np.asarray(z, dtype=float),
            np.asarray(t, dtype=float))
        return np.exp(1j * (self.wavenumber0 * z - self.omega0 * t))

    def position_amplitude_grid(self, rho, z, t):
        """Amplitude on the outer product of 1D node arrays (n_rho, n_z, n_t)."""
        rho = np.asarray(rho, dtype=float)
        z = np.asarray(z, dtype=float)
        t = np.asarray(t, dtype=float)
        vals = np.exp(1j * (self.wavenumber0 * z[None, :, None]
                            - self.omega0 * t[None, None, :]))
        return np.broadcast_to(vals, (rho.size, z.size, t.size)).copy()


@dataclass(frozen=True)
class GaussianPump:
    """Gaussian beam/pulse pump.

    omega0: carrier angular frequency (rad/s); sigma_omega: standard
    deviation of the modulus-squared spectrum (rad/s); waist: 1/e^2
    intensity beam radius w0 (m).
    """

    omega0: float
    sigma_omega: float
    waist: float
    index_model: object
    kind = "gaussian"

    def __post_init__(self):
        if not (self.omega0 > 0):
            raise ValidationError("pump.omega0 must be > 0")
        if not (self.sigma_omega > 0):
            raise ValidationError("pump.sigma_omega must be > 0")
        if not (self.waist > 0):
            raise ValidationError("pump.waist must be > 0")
        k0 = float(wavenumber(self.omega0, self.index_model))
        if 2.0 / self.waist > 0.1 * k0:
            raise ValidationError(
                "pump waist too small for the paraxial regime: need 2/w0 <= 0.1 k_p")
        if self.sigma_omega > 0.05 * self.omega0:
            warnings.warn("sigma_omega above 0.05*omega0: the quasi-monochromatic "
                          "assumption behind the position-space form degrades",
                          stacklevel=2)

    @property
    def sigma_q(self) -> float:
        """Std of the modulus-squared transverse spectrum, 1/w0."""
        return 1.0 / self.waist

    def spectral_amplitude(self, q, w):
        q = np.asarray(q, dtype=float)
        w = np.asarray(w, dtype=float)
        return np.exp(-(q * q) * self.waist**2 / 4.0
                      - (w - self.omega0) ** 2 / (4.0 * self.sigma_omega**2)
                      ).astype(np.complex128)

    def _mode_grid(self, quad: PumpQuadrature):
        q, dq = midpoint_nodes(quad.span_sigmas * self.sigma_q, quad.n_q)
        w_half = quad.span_sigmas * self.sigma_omega
        w, dw = midpoint_nodes(w_half, quad.n_omega)
        w = w + self.omega0
        k = np.asarray(wavenumber(w, self.index_model))
        kz = mode_kz(q[:, None], k[None, :], paraxial=True)  # (n_q, n_w)
        phi = np.asarray(self.spectral_amplitude(q[:, None], w[None, :]))
        return q, dq, w, dw, k, kz, phi

    def _check_sampling(self, dq, dw, q, k, rho_max, z_max, t_max):
        # Midpoint sums alias once the integrand phase advances more than
        # MAX_PHASE_STEP between neighbouring mode-grid nodes.
        k_min = float(np.min(k))
        rate_q = rho_max + float(np.max(np.abs(q))) / k_min * z_max
        rate_w = t_max + float(np.max(k)) / self.omega0 * z_max  # dk/dw <= n/c ~ k/w
        if dq * rate_q > MAX_PHASE_STEP:
            raise GridTooCoarse("pump q grid: phase advance per step exceeds pi/4")
        if dw * rate_w > MAX_PHASE_STEP:
            raise GridTooCoarse("pump omega grid: phase advance per step exceeds pi/4")

    def position_amplitude(self, rho, z, t, quad: PumpQuadrature | None = None):
        """Midpoint quadrature of the plane-wave decomposition at points
        broadcast from (rho, z, t)."""
        quad = quad or PumpQuadrature()
        rho, z, t = np.broadcast_arrays(
            np.asarray(rho, dtype=float), np.asarray(z, dtype=float),
            np.asarray(t, dtype=float))
        shape = rho.shape
        q, dq, w, dw, k, kz, phi = self._mode_grid(quad)
        self._check_sampling(dq, dw, q, k,
                             float(np.max(np.abs(rho), initial=0.0)),
                             float(np.max(np.abs(z), initial=0.0)),
                             float(np.max(np.abs(t), initial=0.0)))
        pts = np.stack([rho.ravel(), z.ravel(), t.ravel()], axis=0)
        phase = (q[:, None, None] * pts[0]
                 + kz[:, :, None] * pts[1]
                 - w[None, :, None] * pts[2])
        vals = np.einsum("qw,qwp->p", phi, np.exp(1j * phase)) * (dq * dw)
        return vals.reshape(shape)

    def position_amplitude_grid(self, rho, z, t, quad: PumpQuadrature | None = None):
        """Amplitude on the outer product of 1D node arrays (n_rho, n_z, n_t).

        Staged contraction: the z-dependent part couples q and omega
        through kz, so the (q, omega) sum is carried out per z node.
        """
        quad = quad or PumpQuadrature()
        rho = np.asarray(rho, dtype=float)
        z = np.asarray(z, dtype=float)
        t = np.asarray(t, dtype=float)
        q, dq, w, dw, k, kz, phi = self._mode_grid(quad)
        self._check_sampling(dq, dw, q, k,
                             float(np.max(np.abs(rho), initial=0.0)),
                             float(np.max(np.abs(z), initial=0.0)),
                             float(np.max(np.abs(t), initial=0.0)))
        e_rho = np.exp(1j * np.outer(rho, q))      # (n_rho, n_q)
        e_t = np.exp(-1j * np.outer(w, t))         # (n_w, n_t)
        out = np.empty((rho.size, z.size, t.size), dtype=np.complex128)
        for b in range(z.size):
            modes_b = phi * np.exp(1j * kz * z[b])  # (n_q, n_w)
            out[:, b, :] = e_rho @ (modes_b @ e_t)
        out *= dq * dw
        return out
