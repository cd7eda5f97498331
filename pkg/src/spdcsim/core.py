"""Grids, complex fields, normalization and the transverse Fourier transform.

All internal computation is in SI units (rad/m, rad/s, m, s). Fields are
sampled on uniform grids; integrals over them are measure-weighted sums
with the product of axis steps as the cell measure. The transverse
q <-> x transform uses the e^{+iqx} kernel for the forward direction and a
unitary 1/sqrt(2*pi) scale so the discrete L2 norm is preserved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import AxisMismatch, EvanescentMode, ValidationError, ZeroField

C_LIGHT = 2.99792458e8  # m/s, exact
HBAR = 1.054571817e-34  # J*s, reporting only; dynamics use omega and k

AXIS_LABELS = ("q1", "q2", "w1", "w2", "x1", "x2", "z", "t")

_DEFAULT_UNITS = {
    "q1": "rad/m",
    "q2": "rad/m",
    "w1": "rad/s",
    "w2": "rad/s",
    "x1": "m",
    "x2": "m",
    "z": "m",
    "t": "s",
}

_Q_TO_X = {"q1": "x1", "q2": "x2"}
_X_TO_Q = {v: k for k, v in _Q_TO_X.items()}


@dataclass(frozen=True)
class PhysConstants:
    """Physical constants plus the unit convention used in reports.

    ``hbar_units`` selects how momenta are reported: "natural" leaves them
    as wavevectors (hbar = 1), "SI" multiplies by hbar.
    """

    hbar_units: str = "natural"
    c: float = C_LIGHT

    def __post_init__(self):
        if self.hbar_units not in ("natural", "SI"):
            raise ValidationError("hbar_units must be 'natural' or 'SI'")

    def momentum(self, q):
        """Report a wavevector as a momentum in the selected convention."""
        return q if self.hbar_units == "natural" else HBAR * np.asarray(q)


@dataclass(frozen=True)
class Axis:
    """A uniform sample axis: value(i) = center + (i - (n-1)/2) * step."""

    label: str
    n: int
    center: float
    step: float
    unit: str = ""

    def __post_init__(self):
        if self.label not in AXIS_LABELS:
            raise ValidationError(f"unknown axis label {self.label!r}")
        if not isinstance(self.n, int) or self.n < 2:
            raise ValidationError(f"axis {self.label}: n_points must be an int >= 2")
        if not (self.step > 0):
            raise ValidationError(f"axis {self.label}: step must be > 0")
        if not self.unit:
            object.__setattr__(self, "unit", _DEFAULT_UNITS[self.label])

    @property
    def values(self) -> np.ndarray:
        i = np.arange(self.n)
        return self.center + (i - (self.n - 1) / 2.0) * self.step

    @property
    def span(self) -> float:
        return (self.n - 1) * self.step

    def conjugate(self) -> "Axis":
        """The position axis conjugate to a q axis (or back).

        Same point count, step 2*pi/(n*step), centered on zero, so the
        conjugate grid spans one full period of the discrete transform.
        """
        if self.label in _Q_TO_X:
            new_label = _Q_TO_X[self.label]
        elif self.label in _X_TO_Q:
            new_label = _X_TO_Q[self.label]
        else:
            raise AxisMismatch(f"axis {self.label!r} has no conjugate")
        return Axis(new_label, self.n, 0.0, 2.0 * math.pi / (self.n * self.step))


@dataclass(eq=False)
class ComplexField:
    """Complex samples over the product of one, two or four axes."""

    axes: tuple[Axis, ...]
    data: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        self.axes = tuple(self.axes)
        if len(self.axes) not in (1, 2, 4):
            raise ValidationError("field rank must be 1, 2 or 4")
        self.data = np.ascontiguousarray(self.data, dtype=np.complex128)
        shape = tuple(a.n for a in self.axes)
        if self.data.shape != shape:
            raise ValidationError(
                f"data shape {self.data.shape} does not match axes {shape}"
            )
        if self.normalized and abs(l2_norm(self) - 1.0) > 1e-9:
            raise ValidationError("field marked normalized but L2 norm is not 1")

    @property
    def cell_measure(self) -> float:
        m = 1.0
        for a in self.axes:
            m *= a.step
        return m

    def labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.axes)


def l2_norm(f: ComplexField) -> float:
    """Discrete L2 norm: sqrt(sum |v|^2 * prod(steps))."""
    return math.sqrt(float(np.sum(np.abs(f.data) ** 2)) * f.cell_measure)


def l2_normalize(f: ComplexField) -> ComplexField:
    """Scale a field to unit discrete L2 norm.

    The output is the input times a positive real scalar, so the phase
    pattern is untouched. Raises ZeroField when every sample is zero.
    """
    norm = l2_norm(f)
    if norm == 0.0:
        raise ZeroField("cannot normalize a field with no nonzero sample")
    return ComplexField(f.axes, f.data / norm, normalized=True)


def mode_kz(q, k, paraxial: bool = False):
    """Longitudinal wavevector of a plane-wave mode.

    Exact branch: sqrt(k^2 - q^2), only for |q| < k. Paraxial branch:
    k - q^2/(2k), the small-angle expansion used throughout the pump and
    pair-amplitude integrals.
    """
    q = np.asarray(q, dtype=float)
    k = np.asarray(k, dtype=float)
    if paraxial:
        return k - q * q / (2.0 * k)
    if np.any(np.abs(q) >= k):
        raise EvanescentMode("|q| >= k: mode does not propagate")
    return np.sqrt(k * k - q * q)


def _transform_matrix(q_axis: Axis, x_axis: Axis, sign: int, measure: float) -> np.ndarray:
    phase = sign * 1j * np.outer(x_axis.values, q_axis.values)
    return np.exp(phase) * (measure / math.sqrt(2.0 * math.pi))


def _apply_along_axis(mat: np.ndarray, data: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(data, axis, 0)
    out = np.tensordot(mat, moved, axes=(1, 0))
    return np.moveaxis(out, 0, axis)


def fourier_q_to_x(f: ComplexField, axis: int = 0) -> ComplexField:
    """Transform one transverse-wavevector axis to its position representation.

    psi(x_j) = (2*pi)^{-1/2} * sum_q phi(q) e^{i q x_j} dq on the conjugate
    grid, which makes the transform unitary in the discrete L2 norm (the
    inverse uses the e^{-iqx} kernel with the dx measure).
    """
    ax = f.axes[axis]
    if ax.label not in _Q_TO_X:
        raise AxisMismatch(f"axis {ax.label!r} is not a transverse-wavevector axis")
    x_axis = ax.conjugate()
    mat = _transform_matrix(ax, x_axis, +1, ax.step)
    data = _apply_along_axis(mat, f.data, axis)
    axes = list(f.axes)
    axes[axis] = x_axis
    return ComplexField(tuple(axes), data, normalized=False)


def fourier_x_to_q(f: ComplexField, axis: int = 0) -> ComplexField:
    """Inverse of :func:`fourier_q_to_x` on one position axis."""
    ax = f.axes[axis]
    if ax.label not in _X_TO_Q:
        raise AxisMismatch(f"axis {ax.label!r} is not a transverse-position axis")
    q_axis = ax.conjugate()
    phase = -1j * np.outer(q_axis.values, ax.values)
    mat = np.exp(phase) * (ax.step / math.sqrt(2.0 * math.pi))
    data = _apply_along_axis(mat, f.data, axis)
    axes = list(f.axes)
    axes[axis] = q_axis
    return ComplexField(tuple(axes), data, normalized=False)


@dataclass(eq=False)
class RealField:
    """Real nonnegative samples (a probability density) over axes."""

    axes: tuple[Axis, ...]
    data: np.ndarray

    def __post_init__(self):
        self.axes = tuple(self.axes)
        self.data = np.ascontiguousarray(self.data, dtype=float)
        shape = tuple(a.n for a in self.axes)
        if self.data.shape != shape:
            raise ValidationError(
                f"data shape {self.data.shape} does not match axes {shape}"
            )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_field_dump(f: ComplexField, path) -> None:
    """Write a field as UTF-8 text: one `# label n center step unit` header
    line per axis, then `index... re im` rows with 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for a in f.axes:
            fh.write(f"# {a.label} {a.n} {_fmt(a.center)} {_fmt(a.step)} {a.unit}\n")
        flat = f.data.reshape(-1)
        for idx, value in zip(np.ndindex(f.data.shape), flat):
            cells = [str(i) for i in idx]
            cells.append(_fmt(value.real))
            cells.append(_fmt(value.imag))
            fh.write(" ".join(cells) + "\n")


def read_field_dump(path) -> ComplexField:
    """Parse a field dump written by :func:`write_field_dump`."""
    axes = []
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) != 5:
                    raise ValidationError(f"malformed dump header: {line!r}")
                label, n, center, step, unit = parts
                axes.append(Axis(label, int(n), float(center), float(step), unit))
            else:
                rows.append(line.split())
    shape = tuple(a.n for a in axes)
    rank = len(shape)
    data = np.zeros(shape, dtype=np.complex128)
    for parts in rows:
        if len(parts) != rank + 2:
            raise ValidationError("dump row width does not match axis rank")
        idx = tuple(int(p) for p in parts[:rank])
        data[idx] = float(parts[rank]) + 1j * float(parts[rank + 1])
    return ComplexField(tuple(axes), data)


def relative_l2_error(a: ComplexField, b: ComplexField, align_phase: bool = True) -> float:
    """Relative L2 distance between two fields on identical axes.

    Normalization fixes only a positive scale, so each amplitude still
    carries an arbitrary global phase; by default the comparison removes
    it by rotating ``b`` onto ``a`` with the inner-product phase.
    """
    if tuple(a.labels()) != tuple(b.labels()) or a.data.shape != b.data.shape:
        raise AxisMismatch("fields must share axes for comparison")
    av = a.data.reshape(-1)
    bv = b.data.reshape(-1)
    if align_phase:
        inner = np.vdot(av, bv)
        if inner != 0.0:
            bv = bv * np.exp(-1j * np.angle(inner))
    denom = math.sqrt(float(np.sum(np.abs(av) ** 2)))
    if denom == 0.0:
        raise ZeroField("reference field is identically zero")
    return math.sqrt(float(np.sum(np.abs(bv - av) ** 2))) / denom


def scale_axis(axis: Axis, factor: float) -> Axis:
    """A copy of an axis with step (and hence span) scaled by ``factor``."""
    return replace(axis, step=axis.step * factor)
