"""Entanglement and correlation diagnostics of a joint amplitude.

A two-photon amplitude factorizes into a product of single-photon states
exactly when its Schmidt number is 1; the Schmidt weights are the squared
singular values of the (measure-weighted) amplitude matrix. Momentum
anticorrelation and position correlation are quantified by the variances
of the rotated coordinates q1+q2 and x1-x2; their product is the EPR
witness (hbar = 1, momenta as wavevectors), below 1 for no separable
state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .biphoton import FULL4D, SPATIAL2D, SPECTRAL2D, JointAmplitude
from .core import RealField, fourier_q_to_x
from .errors import AxisMismatch, ModeMismatch, NotTwoPartite, ValidationError


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Normalized Schmidt weights (descending) with the derived scalars."""

    weights: tuple[float, ...]
    schmidt_number: float
    entropy_bits: float

    def __post_init__(self):
        w = np.asarray(self.weights)
        if np.any(w < -1e-12):
            raise ValidationError("Schmidt weights must be nonnegative")
        if abs(float(w.sum()) - 1.0) > 1e-9:
            raise ValidationError("Schmidt weights must sum to 1")
        if not (1.0 - 1e-9 <= self.schmidt_number <= len(w) + 1e-9):
            raise ValidationError("Schmidt number must lie in [1, rank]")
        if self.entropy_bits < -1e-12:
            raise ValidationError("entropy must be nonnegative")


def schmidt_decompose(a: JointAmplitude) -> SchmidtSpectrum:
    """Schmidt spectrum of the photon-1 vs photon-2 bipartition.

    The amplitude matrix is weighted by sqrt of the cell measure so the
    weights are discretization-independent probabilities; the 4D mode is
    flattened to (q1, w1) x (q2, w2).
    """
    if not a.field.normalized:
        raise ValidationError("schmidt_decompose expects a normalized amplitude")
    axes = a.field.axes
    if len(axes) not in (2, 4):
        raise NotTwoPartite("amplitude axes do not split into two photons")
    side1, side2 = a.photon_axis_split()
    rows = int(np.prod([axes[i].n for i in side1]))
    cols = int(np.prod([axes[i].n for i in side2]))
    measure = a.field.cell_measure
    matrix = a.field.data.reshape(rows, cols) * math.sqrt(measure)
    sv = np.linalg.svd(matrix, compute_uv=False)
    lam = sv * sv
    lam = lam / lam.sum()
    positive = lam[lam > 0]
    k = 1.0 / float(np.sum(lam * lam))
    entropy = float(-np.sum(positive * np.log2(positive)))
    return SchmidtSpectrum(weights=tuple(float(x) for x in lam),
                           schmidt_number=k, entropy_bits=entropy)


def marginal(a: JointAmplitude, keep=None):
    """Probability density of a subset of axes (modulus squared, summed
    with the cell measure over the complement).

    ``keep`` lists axis labels to retain, in field order; ``keep=[]``
    integrates everything out and returns the total probability. Defaults
    to the photon-1 axes.
    """
    field = a.field
    if not field.normalized:
        raise ValidationError("marginal expects a normalized amplitude")
    labels = field.labels()
    if keep is None:
        keep = [labels[i] for i in a.photon_axis_split()[0]]
    keep = list(keep)
    for name in keep:
        if name not in labels:
            raise AxisMismatch(f"axis {name!r} not present in amplitude {labels}")
    keep_idx = sorted(labels.index(name) for name in keep)
    drop_idx = tuple(i for i in range(len(labels)) if i not in keep_idx)
    density = np.abs(field.data) ** 2
    drop_measure = 1.0
    for i in drop_idx:
        drop_measure *= field.axes[i].step
    summed = density.sum(axis=drop_idx) * drop_measure if drop_idx else density
    if not keep_idx:
        return float(summed)
    return RealField(tuple(field.axes[i] for i in keep_idx), summed)


@dataclass(frozen=True)
class CorrelationReport:
    """Sum/difference variances, conditional widths and the EPR witness.

    Fields that do not apply to the amplitude's mode are None: spectral
    amplitudes have no transverse statistics and vice versa. The witness
    epr_product = var(x1 - x2) * var(q1 + q2) uses hbar = 1 with momenta
    as wavevectors.
    """

    mode: str
    var_sum_q: float | None
    var_diff_x: float | None
    var_sum_w: float | None
    conditional_peak1: float
    conditional_peak2: float
    conditional_width: float
    epr_product: float | None
    epr_flag: bool | None
    epr_threshold: float

    def rows(self) -> list[tuple[str, str]]:
        out = []
        for key in ("mode", "var_sum_q", "var_diff_x", "var_sum_w",
                    "conditional_peak1", "conditional_peak2",
                    "conditional_width", "epr_product", "epr_flag",
                    "epr_threshold"):
            val = getattr(self, key)
            if isinstance(val, float):
                val = format(val, ".17g")
            out.append((key, str(val)))
        return out


def _joint_density(field):
    v1 = field.axes[0].values
    v2 = field.axes[1].values
    p = np.abs(field.data) ** 2
    p = p / p.sum()
    return v1, v2, p


def _variance_sum(field, sign: float) -> float:
    """Variance of v1 + sign*v2 under the joint density."""
    v1, v2, p = _joint_density(field)
    s = v1[:, None] + sign * v2[None, :]
    mean = float(np.sum(p * s))
    return float(np.sum(p * (s - mean) ** 2))


def _conditional_at_peak(field):
    """Conditional density of the photon-2 coordinate at the photon-1 bin
    with the largest marginal probability."""
    v1, v2, p = _joint_density(field)
    m1 = p.sum(axis=1)
    i_peak = int(np.argmax(m1))
    cond = p[i_peak, :]
    total = cond.sum()
    if total == 0.0:
        raise ValidationError("empty conditional slice at the photon-1 peak")
    cond = cond / total
    j_peak = int(np.argmax(cond))
    mean = float(np.sum(cond * v2))
    width = math.sqrt(float(np.sum(cond * (v2 - mean) ** 2)))
    return float(v1[i_peak]), float(v2[j_peak]), width


def position_representation(a: JointAmplitude):
    """The Spatial2D amplitude with both transverse axes Fourier
    transformed to position space."""
    if a.mode != SPATIAL2D:
        raise ModeMismatch("position representation needs a spatial (q1, q2) amplitude")
    return fourier_q_to_x(fourier_q_to_x(a.field, axis=0), axis=1)


def position_space_pair_density(a: JointAmplitude) -> RealField:
    """|psi(x1, x2)|^2 at the crystal exit face.

    For a plane-wave pump the density concentrates on the x1 = x2
    diagonal; the anti-diagonal width is conjugate to the grid's q span.
    """
    x_field = position_representation(a)
    density = np.abs(x_field.data) ** 2
    return RealField(x_field.axes, density)


def _axes_and_mass(obj):
    if isinstance(obj, JointAmplitude):
        if obj.mode == FULL4D:
            raise ModeMismatch("coordinate marginals need a 2D amplitude mode")
        return obj.field.axes, np.abs(obj.field.data) ** 2
    if isinstance(obj, RealField) and len(obj.axes) == 2:
        return obj.axes, obj.data
    raise ModeMismatch("expected a 2D joint amplitude or 2D density field")


def _lattice_marginal(obj, sign: int):
    axes, p = _axes_and_mass(obj)
    ax1, ax2 = axes
    if abs(ax1.step - ax2.step) > 1e-12 * ax1.step:
        raise AxisMismatch("coordinate marginals need equal axis steps")
    p = p / p.sum()
    i = np.arange(ax1.n)
    j = np.arange(ax2.n)
    if sign > 0:
        index = np.add.outer(i, j)
        start = ax1.values[0] + ax2.values[0]
    else:
        index = np.subtract.outer(i, j) + (ax2.n - 1)
        start = ax1.values[0] - ax2.values[-1]
    mass = np.bincount(index.ravel(), weights=p.ravel(),
                       minlength=ax1.n + ax2.n - 1)
    values = start + np.arange(ax1.n + ax2.n - 1) * ax1.step
    return values, mass / ax1.step


def sum_coordinate_marginal(a) -> tuple[np.ndarray, np.ndarray]:
    """Probability density of the sum coordinate v1 + v2 of a 2D amplitude
    (or 2D density field).

    Both axes must share one step so the sums form a lattice; the density
    is the anti-diagonal probability mass divided by the lattice step.
    """
    return _lattice_marginal(a, +1)


def difference_coordinate_marginal(a) -> tuple[np.ndarray, np.ndarray]:
    """Probability density of the difference coordinate v1 - v2; see
    :func:`sum_coordinate_marginal`."""
    return _lattice_marginal(a, -1)


def first_zero_width(s: np.ndarray, density: np.ndarray) -> float:
    """Distance between the first local minima flanking the global peak.

    For densities with true zeros (window kernels) this is the first-zero
    width of the central lobe.
    """
    i_peak = int(np.argmax(density))
    j = i_peak
    while j + 1 < len(density) and density[j + 1] < density[j]:
        j += 1
    if j == len(density) - 1:
        raise ValidationError("no local minimum to the right of the peak")
    i = i_peak
    while i - 1 >= 0 and density[i - 1] < density[i]:
        i -= 1
    if i == 0:
        raise ValidationError("no local minimum to the left of the peak")
    return float(s[j] - s[i])


def sum_difference_statistics(a: JointAmplitude,
                              epr_threshold: float = 1.0) -> CorrelationReport:
    """Correlation variances and the EPR witness of a 2D amplitude.

    The conditional row is evaluated at the single peak bin of photon 1,
    mirroring a heralded measurement on that photon.
    """
    if a.mode == FULL4D:
        raise ModeMismatch("sum/difference statistics need a 2D amplitude mode")
    field = a.field
    peak1, peak2, width = _conditional_at_peak(field)
    if a.mode == SPECTRAL2D:
        return CorrelationReport(
            mode=a.mode, var_sum_q=None, var_diff_x=None,
            var_sum_w=_variance_sum(field, +1.0),
            conditional_peak1=peak1, conditional_peak2=peak2,
            conditional_width=width,
            epr_product=None, epr_flag=None, epr_threshold=epr_threshold)
    var_sum_q = _variance_sum(field, +1.0)
    x_field = position_representation(a)
    var_diff_x = _variance_sum(x_field, -1.0)
    epr_product = var_diff_x * var_sum_q
    return CorrelationReport(
        mode=a.mode, var_sum_q=var_sum_q, var_diff_x=var_diff_x, var_sum_w=None,
        conditional_peak1=peak1, conditional_peak2=peak2, conditional_width=width,
        epr_product=epr_product, epr_flag=bool(epr_product < epr_threshold),
        epr_threshold=epr_threshold)
