"""Wavenumbers, dispersion models and longitudinal phase matching.

Pair generation is efficient only where the creation amplitudes from
different depths of the crystal interfere constructively. Integrating the
residual longitudinal phase exp(i*dkz*z') over the crystal length L gives
the familiar L*sinc(dkz*L/2) factor; collinear operation requires
n_p = (n_1 + n_2)/2 at the matched frequencies, and when k_1 + k_2
exceeds k_p the efficient directions form a cone in transverse momentum.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import C_LIGHT
from .errors import OutOfValidityRange, PoleProximity, ValidationError

_POLE_GUARD_UM2 = 1e-6  # minimum |lambda^2 - C_j| in um^2


@dataclass(frozen=True)
class ConstantIndex:
    """Dispersionless refractive index."""

    n: float

    def __post_init__(self):
        if not (self.n >= 1.0):
            raise ValidationError("constant index must be >= 1")

    def refractive_index(self, omega):
        if np.ndim(omega) == 0:
            return self.n
        return np.full(np.shape(omega), self.n)


@dataclass(frozen=True)
class SellmeierIndex:
    """n^2(lambda) = 1 + sum_j B_j lambda^2 / (lambda^2 - C_j), lambda in um.

    ``terms`` is a tuple of (B_j, C_j[um^2]) pairs; ``lambda_min`` and
    ``lambda_max`` (um) bound the declared validity range.
    """

    terms: tuple[tuple[float, float], ...]
    lambda_min: float
    lambda_max: float

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((float(b), float(c)) for b, c in self.terms))
        if not self.terms:
            raise ValidationError("Sellmeier model needs at least one term")
        if not (0 < self.lambda_min < self.lambda_max):
            raise ValidationError("Sellmeier validity range must satisfy 0 < min < max")
        for lam in (self.lambda_min, self.lambda_max):
            n2 = self._n_squared(lam)
            if not np.all(n2 > 0):
                raise ValidationError("Sellmeier n^2 must stay positive on the validity range")

    def _n_squared(self, lam_um):
        lam2 = np.asarray(lam_um, dtype=float) ** 2
        n2 = np.ones_like(lam2)
        for b, c in self.terms:
            dist = lam2 - c
            if np.any(np.abs(dist) < _POLE_GUARD_UM2):
                raise PoleProximity(
                    f"lambda^2 within {_POLE_GUARD_UM2} um^2 of resonance C={c}"
                )
            n2 = n2 + b * lam2 / dist
        return n2

    def refractive_index(self, omega):
        lam_um = 2.0 * math.pi * C_LIGHT / np.asarray(omega, dtype=float) * 1e6
        if np.any(lam_um < self.lambda_min) or np.any(lam_um > self.lambda_max):
            raise OutOfValidityRange(
                f"wavelength outside validity range [{self.lambda_min}, {self.lambda_max}] um"
            )
        return np.sqrt(self._n_squared(lam_um))


def refractive_index(model, omega):
    """Refractive index of ``model`` at angular frequency ``omega`` (rad/s)."""
    return model.refractive_index(omega)


def wavenumber(omega, model):
    """k(omega) = omega * n(omega) / c, in rad/m."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValidationError("omega must be > 0")
    return omega * model.refractive_index(omega) / C_LIGHT


@dataclass(frozen=True)
class CrystalConfig:
    """Crystal length and the per-field index models.

    The transverse extent is treated as infinite (much wider than the pump
    beam). ``pdc_type`` is a label only: it records which fields are meant
    to see distinct indices, all physics goes through the three models.
    """

    L: float
    index_pump: object
    index_signal: object
    index_idler: object
    pdc_type: str = "I"

    def __post_init__(self):
        if not (self.L > 0):
            raise ValidationError("crystal length L must be > 0")
        if self.pdc_type not in ("I", "II"):
            raise ValidationError("pdc_type must be 'I' or 'II'")


def longitudinal_mismatch(q_p, q_1, q_2, omega_1, omega_2, crystal: CrystalConfig):
    """Residual longitudinal wavevector of a pair-creation event.

    dkz = (k_p - k_1 - k_2) - (q_p^2/k_p - q_1^2/k_1 - q_2^2/k_2)/2 with
    omega_p = omega_1 + omega_2 and paraxial longitudinal components.
    Warns when any |q| exceeds 0.2 k, where the paraxial form degrades.
    """
    omega_1 = np.asarray(omega_1, dtype=float)
    omega_2 = np.asarray(omega_2, dtype=float)
    q_p = np.asarray(q_p, dtype=float)
    q_1 = np.asarray(q_1, dtype=float)
    q_2 = np.asarray(q_2, dtype=float)
    k_p = wavenumber(omega_1 + omega_2, crystal.index_pump)
    k_1 = wavenumber(omega_1, crystal.index_signal)
    k_2 = wavenumber(omega_2, crystal.index_idler)
    for q, k in ((q_p, k_p), (q_1, k_1), (q_2, k_2)):
        if np.any(np.abs(q) > 0.2 * k):
            warnings.warn("transverse wavevector beyond 0.2 k: paraxial form degrades",
                          stacklevel=2)
            break
    return (k_p - k_1 - k_2) - (q_p**2 / k_p - q_1**2 / k_1 - q_2**2 / k_2) / 2.0


def sinc(x):
    """sin(x)/x with sinc(0) = 1 (unnormalized convention)."""
    return np.sinc(np.asarray(x, dtype=float) / math.pi)


def phase_matching_factor(dkz, L: float):
    """Closed form of the longitudinal interference integral.

    integral_{-L/2}^{L/2} exp(i*dkz*z') dz' = L * sinc(dkz*L/2); real and
    even in dkz, first zeros at dkz = +-2*pi/L.
    """
    if not (L > 0):
        raise ValidationError("crystal length L must be > 0")
    return L * sinc(np.asarray(dkz, dtype=float) * L / 2.0)


@dataclass(frozen=True)
class CollinearCheck:
    matched: bool
    residual: float


def collinear_condition(omega_1: float, omega_2: float, crystal: CrystalConfig,
                        tol: float = 1e-4) -> CollinearCheck:
    """Residual of n_p(omega_1+omega_2) - (n_1(omega_1) + n_2(omega_2))/2.

    Zero residual means collinear emission interferes constructively over
    the whole crystal; a positive residual (normal dispersion, equal
    polarizations) suppresses it.
    """
    if omega_1 <= 0 or omega_2 <= 0:
        raise ValidationError("frequencies must be > 0")
    n_p = float(crystal.index_pump.refractive_index(omega_1 + omega_2))
    n_1 = float(crystal.index_signal.refractive_index(omega_1))
    n_2 = float(crystal.index_idler.refractive_index(omega_2))
    residual = n_p - (n_1 + n_2) / 2.0
    return CollinearCheck(matched=abs(residual) <= tol, residual=residual)


@dataclass(frozen=True)
class ConeLocus:
    """Transverse-momentum locus of efficient emission at fixed frequencies.

    alpha = k_1 + k_2 - k_p (q_p assumed negligible). alpha > 0 puts the
    efficiently generated pairs on the locus q_1^2/k_1 + q_2^2/k_2 =
    2*alpha; for equal signal/idler wavenumbers the symmetric solution is
    degenerate_q = sqrt(k*alpha). alpha < 0 has no real cone.
    """

    alpha: float
    degenerate_q: float | None


def cone_transverse_momenta(omega_1: float, omega_2: float,
                            crystal: CrystalConfig) -> ConeLocus:
    k_1 = float(wavenumber(omega_1, crystal.index_signal))
    k_2 = float(wavenumber(omega_2, crystal.index_idler))
    k_p = float(wavenumber(omega_1 + omega_2, crystal.index_pump))
    alpha = k_1 + k_2 - k_p
    if alpha < 0:
        return ConeLocus(alpha=alpha, degenerate_q=None)
    if abs(k_1 - k_2) > 1e-9 * max(k_1, k_2):
        # general (q_1, q_2) locus left implicit in longitudinal_mismatch
        return ConeLocus(alpha=alpha, degenerate_q=None)
    return ConeLocus(alpha=alpha, degenerate_q=math.sqrt(k_1 * alpha))
