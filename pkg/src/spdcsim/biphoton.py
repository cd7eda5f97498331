"""Two-photon amplitudes, computed two independent ways.

The direct path sums pair-creation amplitudes coherently over creation
time t' in [-T/2, T/2], depth z' in [-L/2, L/2] and transverse position
rho' in [-W, W]: each output mode pair (q1, w1, q2, w2) accumulates

    sum over nodes of  psi_p(rho', z', t')
        * exp(-i (q1+q2) rho' - i (kz1+kz2) z' + i (w1+w2) t')

which is the mode coefficient of the emitted pair state (the phases the
photons pick up propagating to the observation plane cancel out of the
coefficient). Conservation of energy and transverse momentum is not
imposed anywhere: it emerges as the window kernels sharpen with T and W.

The analytic path is the closed-form limit of large windows and thin
crystal: the joint amplitude is the pump spectral amplitude evaluated at
the sum coordinates, optionally multiplied by the longitudinal
phase-matching factor. ``finite_window_joint_amplitude`` exposes the
window kernels themselves (plane-wave pump only), where the finite-T and
finite-W sinc factors stand in for the energy and momentum delta
functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .core import C_LIGHT, Axis, ComplexField, l2_normalize, mode_kz
from .errors import AxisMismatch, GridTooCoarse, ValidationError
from .phasematch import (CrystalConfig, longitudinal_mismatch,
                         phase_matching_factor, sinc, wavenumber)
from .pump import MAX_PHASE_STEP, PumpQuadrature, midpoint_nodes

SPECTRAL2D = "spectral2d"
SPATIAL2D = "spatial2d"
FULL4D = "full4d"

MODE_LABELS = {
    SPECTRAL2D: ("w1", "w2"),
    SPATIAL2D: ("q1", "q2"),
    FULL4D: ("q1", "w1", "q2", "w2"),
}


def mode_from_axes(axes) -> str:
    labels = tuple(a.label for a in axes)
    for mode, expected in MODE_LABELS.items():
        if labels == expected:
            return mode
    raise AxisMismatch(f"axis labels {labels} do not form a joint-amplitude mode")


@dataclass(frozen=True)
class ModePoint:
    """One plane-wave mode of a generated photon: (q, omega) plus the
    derived wavenumber and paraxial longitudinal component."""

    q: float
    omega: float
    k: float
    kz: float

    def __post_init__(self):
        if self.kz > self.k:
            raise ValidationError("mode invariant violated: kz must not exceed k")

    @classmethod
    def create(cls, q: float, omega: float, index_model, paraxial: bool = True):
        k = float(wavenumber(omega, index_model))
        kz = float(mode_kz(q, k, paraxial=paraxial))
        return cls(q=float(q), omega=float(omega), k=k, kz=kz)


@dataclass(frozen=True)
class ScatterWindows:
    """Integration windows for the direct path: creation-time half range
    T/2 and transverse half width W (the z' range is the crystal length)."""

    T: float
    W: float

    def __post_init__(self):
        if not (self.T > 0):
            raise ValidationError("windows.T must be > 0")
        if not (self.W > 0):
            raise ValidationError("windows.W must be > 0")


@dataclass(frozen=True)
class DirectQuadrature:
    """Midpoint node counts for the direct superposition quadrature."""

    n_time: int = 256
    n_z: int = 16
    n_rho: int = 16
    pump: PumpQuadrature = PumpQuadrature()

    def __post_init__(self):
        if min(self.n_time, self.n_z, self.n_rho) < 1:
            raise ValidationError("quadrature node counts must be >= 1")

    def doubled(self) -> "DirectQuadrature":
        return DirectQuadrature(
            n_time=2 * self.n_time, n_z=2 * self.n_z, n_rho=2 * self.n_rho,
            pump=PumpQuadrature(2 * self.pump.n_q, 2 * self.pump.n_omega,
                                self.pump.span_sigmas))


@dataclass(eq=False)
class JointAmplitude:
    """A normalized two-photon amplitude over a product grid."""

    mode: str
    field: ComplexField
    provenance: str  # "analytic" | "direct"
    window_T: float | None = None
    window_W: float | None = None
    crystal_L: float | None = None

    def __post_init__(self):
        if self.mode not in MODE_LABELS:
            raise ValidationError(f"unknown joint-amplitude mode {self.mode!r}")
        if self.field.labels() != MODE_LABELS[self.mode]:
            raise AxisMismatch(
                f"axes {self.field.labels()} do not match mode {self.mode!r}")
        if self.provenance not in ("analytic", "direct"):
            raise ValidationError("provenance must be 'analytic' or 'direct'")

    def photon_axis_split(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Axis indices belonging to photon 1 and photon 2."""
        if self.mode == FULL4D:
            return (0, 1), (2, 3)
        return (0,), (1,)


def point_scatter_amplitude(psi_p_val, r_prime, t_prime, modes1, modes2,
                            r1, r2, t, weights1=None, weights2=None):
    """Pair amplitude from a single creation event at (r', t').

    Each photon propagates from the creation point to its observation
    point in a coherent sum over its listed modes, every mode contributing
    the phase q(x - x') + kz(z - z') - omega(t - t'). Positions are (x, z)
    pairs in the reduced one-transverse-coordinate geometry. Returns
    psi_p_val times the product of the two weighted mode sums.
    """
    if not modes1 or not modes2:
        raise ValidationError("mode lists must be non-empty")
    if weights1 is None:
        weights1 = [1.0] * len(modes1)
    if weights2 is None:
        weights2 = [1.0] * len(modes2)

    def mode_sum(modes, weights, r_obs):
        acc = 0.0 + 0.0j
        for m, wgt in zip(modes, weights):
            phase = (m.q * (r_obs[0] - r_prime[0])
                     + m.kz * (r_obs[1] - r_prime[1])
                     - m.omega * (t - t_prime))
            acc += wgt * complex(math.cos(phase), math.sin(phase))
        return acc

    return psi_p_val * mode_sum(modes1, weights1, r1) * mode_sum(modes2, weights2, r2)


def _pump_phase_budget(pump):
    """Central values and spreads of the pump's (omega, k) content, used by
    the aliasing guard on the direct quadrature."""
    if pump.kind == "planewave":
        return pump.omega0, 0.0, pump.wavenumber0, 0.0
    span = PumpQuadrature().span_sigmas
    w_spread = span * pump.sigma_omega
    k0 = float(wavenumber(pump.omega0, pump.index_model))
    k_lo = float(wavenumber(pump.omega0 - w_spread, pump.index_model))
    k_hi = float(wavenumber(pump.omega0 + w_spread, pump.index_model))
    q_max = span * pump.sigma_q
    k_spread = max(abs(k_hi - k0), abs(k_lo - k0)) + q_max**2 / (2.0 * k_lo)
    return pump.omega0, w_spread, k0, k_spread


def _out_mode_sums(pump, crystal, axes):
    """Per-output-point sums (q1+q2, kz1+kz2, w1+w2) for a 2D output grid."""
    mode = mode_from_axes(axes)
    if mode == SPECTRAL2D:
        w1 = axes[0].values
        w2 = axes[1].values
        k1 = np.asarray(wavenumber(w1, crystal.index_signal))
        k2 = np.asarray(wavenumber(w2, crystal.index_idler))
        s_w = w1[:, None] + w2[None, :]
        s_kz = k1[:, None] + k2[None, :]  # q = 0 on axis
        s_q = np.zeros_like(s_w)
    elif mode == SPATIAL2D:
        q1 = axes[0].values
        q2 = axes[1].values
        w_half = pump.omega0 / 2.0
        k1 = float(wavenumber(w_half, crystal.index_signal))
        k2 = float(wavenumber(w_half, crystal.index_idler))
        kz1 = mode_kz(q1, k1, paraxial=True)
        kz2 = mode_kz(q2, k2, paraxial=True)
        s_q = q1[:, None] + q2[None, :]
        s_kz = kz1[:, None] + kz2[None, :]
        s_w = np.full_like(s_q, pump.omega0)
    else:
        raise AxisMismatch("direct path supports spectral (w1, w2) and spatial "
                           "(q1, q2) output grids")
    return mode, s_q, s_kz, s_w


def direct_wavefunction(pump, crystal: CrystalConfig, windows: ScatterWindows,
                        out_axes, quadrature: DirectQuadrature | None = None,
                        observation: tuple[float, float] | None = None,
                        threads: int = 1, kernel_backend: str | None = None
                        ) -> JointAmplitude:
    """Two-photon amplitude by direct superposition over creation events.

    ``out_axes`` is a pair of axes labelled (w1, w2) or (q1, q2).
    ``observation`` is an optional (z_obs, t_obs) pair for the observation
    plane; the evaluation time must exceed the light travel time to the
    plane plus T/2, otherwise amplitudes from the tail of the creation
    window could not have reached the detectors yet.

    Raises GridTooCoarse when any quadrature step advances the residual
    integrand phase by more than pi/4, and ZeroField when the windows or
    pump leave no amplitude on the grid.
    """
    quadrature = quadrature or DirectQuadrature()
    axes = tuple(out_axes)
    if len(axes) != 2:
        raise AxisMismatch("direct path needs a 2D output grid")
    mode, s_q, s_kz, s_w = _out_mode_sums(pump, crystal, axes)

    t_nodes, dt = midpoint_nodes(windows.T / 2.0, quadrature.n_time)
    z_nodes, dz = midpoint_nodes(crystal.L / 2.0, quadrature.n_z)
    rho_nodes, drho = midpoint_nodes(windows.W, quadrature.n_rho)

    w_ref, w_spread, kz_ref, kz_spread = _pump_phase_budget(pump)
    rate_t = float(np.max(np.abs(s_w - w_ref))) + w_spread
    rate_z = float(np.max(np.abs(s_kz - kz_ref))) + kz_spread
    rate_rho = float(np.max(np.abs(s_q))) + (0.0 if pump.kind == "planewave"
                                             else PumpQuadrature().span_sigmas * pump.sigma_q)
    for rate, step, name in ((rate_t, dt, "t'"), (rate_z, dz, "z'"),
                             (rate_rho, drho, "rho'")):
        if rate * step > MAX_PHASE_STEP:
            raise GridTooCoarse(
                f"{name} quadrature: phase advance {rate * step:.3f} rad per "
                f"step exceeds pi/4; increase the node count")

    _check_observation(pump, crystal, windows, observation)

    if pump.kind == "planewave":
        pump_grid = pump.position_amplitude_grid(rho_nodes, z_nodes, t_nodes)
    else:
        pump_grid = pump.position_amplitude_grid(rho_nodes, z_nodes, t_nodes,
                                                 quad=quadrature.pump)

    out = backend.scatter_phase_sum(
        pump_grid, rho_nodes, z_nodes, t_nodes,
        s_q.ravel(), s_kz.ravel(), s_w.ravel(),
        threads=threads, backend=kernel_backend)
    data = out.reshape(s_q.shape) * (dt * dz * drho)
    field = l2_normalize(ComplexField(axes, data))
    return JointAmplitude(mode=mode, field=field, provenance="direct",
                          window_T=windows.T, window_W=windows.W,
                          crystal_L=crystal.L)


def _check_observation(pump, crystal, windows, observation):
    if observation is None:
        return
    z_obs, t_obs = observation
    if z_obs <= crystal.L / 2.0:
        raise ValidationError("observation plane must lie beyond the crystal")
    n_obs = float(crystal.index_signal.refractive_index(pump.omega0 / 2.0))
    travel = n_obs * z_obs / C_LIGHT
    if t_obs < travel + windows.T / 2.0:
        raise ValidationError(
            "observation time precedes light travel time plus T/2; amplitudes "
            "from the creation window could not all have arrived")


def _mode_coordinates(pump, axes):
    """Broadcastable (q1, w1, q2, w2) coordinate arrays for a grid."""
    mode = mode_from_axes(axes)
    if mode == SPECTRAL2D:
        w1 = axes[0].values[:, None]
        w2 = axes[1].values[None, :]
        q1 = np.zeros((1, 1))
        q2 = np.zeros((1, 1))
    elif mode == SPATIAL2D:
        q1 = axes[0].values[:, None]
        q2 = axes[1].values[None, :]
        w_half = pump.omega0 / 2.0
        w1 = np.full((1, 1), w_half)
        w2 = np.full((1, 1), w_half)
    else:
        q1 = axes[0].values[:, None, None, None]
        w1 = axes[1].values[None, :, None, None]
        q2 = axes[2].values[None, None, :, None]
        w2 = axes[3].values[None, None, None, :]
    return mode, q1, w1, q2, w2


def joint_amplitude_analytic(pump, crystal: CrystalConfig, grid_axes,
                             include_pm_factor: bool = True) -> JointAmplitude:
    """Closed-form joint amplitude: pump spectral amplitude at the sum
    coordinates, phi_p(q1+q2, w1+w2), optionally times the longitudinal
    phase-matching factor.

    Raises ZeroField when the pump support misses the grid's sum range.
    """
    axes = tuple(grid_axes)
    mode, q1, w1, q2, w2 = _mode_coordinates(pump, axes)
    shape = tuple(a.n for a in axes)
    q_sum = q1 + q2
    w_sum = w1 + w2
    amp = np.asarray(pump.spectral_amplitude(q_sum, w_sum), dtype=np.complex128)
    amp = np.broadcast_to(amp, np.broadcast_shapes(amp.shape, shape)).copy()
    if include_pm_factor:
        dkz = longitudinal_mismatch(q_sum, q1, q2, w1, w2, crystal)
        amp *= phase_matching_factor(dkz, crystal.L)
    amp = np.broadcast_to(amp, shape)
    field = l2_normalize(ComplexField(axes, amp))
    return JointAmplitude(mode=mode, field=field, provenance="analytic",
                          crystal_L=crystal.L)


def finite_window_joint_amplitude(pump, windows: ScatterWindows,
                                  grid_axes) -> JointAmplitude:
    """Window kernels of the direct path in closed form (plane-wave pump).

    Restricting creation times to [-T/2, T/2] replaces the energy delta
    function by sinc((w0 - w1 - w2) T/2), with first zero at
    |w0 - w1 - w2| = 2 pi / T; restricting transverse positions to
    [-W, W] replaces the momentum delta function by sinc((q1 + q2) W).
    """
    if pump.kind != "planewave":
        raise ValidationError("window kernels are defined for the plane-wave pump")
    axes = tuple(grid_axes)
    mode, q1, w1, q2, w2 = _mode_coordinates(pump, axes)
    shape = tuple(a.n for a in axes)
    amp = (sinc((pump.omega0 - w1 - w2) * windows.T / 2.0)
           * sinc((0.0 - q1 - q2) * windows.W)).astype(np.complex128)
    amp = np.broadcast_to(amp, shape)
    field = l2_normalize(ComplexField(axes, amp))
    return JointAmplitude(mode=mode, field=field, provenance="analytic",
                          window_T=windows.T, window_W=windows.W)


def spectral_axes(n: int, center: float, step: float) -> tuple[Axis, Axis]:
    """Symmetric (w1, w2) axes for a spectral grid."""
    return Axis("w1", n, center, step), Axis("w2", n, center, step)


def spatial_axes(n: int, center: float, step: float) -> tuple[Axis, Axis]:
    """Symmetric (q1, q2) axes for a spatial grid."""
    return Axis("q1", n, center, step), Axis("q2", n, center, step)
