import numpy as np
import pytest

import spdcsim as s


@pytest.fixture
def constant_crystal():
    """Thin crystal with matched constant indices (n_p = n_1 = n_2)."""
    idx = s.ConstantIndex(1.6)
    return s.CrystalConfig(L=1e-6, index_pump=idx, index_signal=idx,
                           index_idler=idx)


def make_double_gaussian(sigma_plus, sigma_minus, n=256):
    """Spatial amplitude exp(-(q1+q2)^2/(4 sp^2) - (q1-q2)^2/(4 sm^2)).

    The grid spans 3(sp+sm) per axis, which covers the rotated support and
    resolves the narrower width for any ratio up to ~1:10 at n=256.
    """
    half = 3.0 * (sigma_plus + sigma_minus)
    step = 2.0 * half / (n - 1)
    axes = s.spatial_axes(n, 0.0, step)
    q1 = axes[0].values[:, None]
    q2 = axes[1].values[None, :]
    data = np.exp(-(q1 + q2) ** 2 / (4.0 * sigma_plus**2)
                  - (q1 - q2) ** 2 / (4.0 * sigma_minus**2))
    field = s.l2_normalize(s.ComplexField(axes, data))
    return s.JointAmplitude(mode=s.SPATIAL2D, field=field, provenance="analytic")


def make_gaussian_product(width1, width2, n=256):
    """Separable spatial amplitude g(q1) h(q2) with amplitude widths
    exp(-q^2/(4 w^2)), i.e. intensity std w per photon."""
    half = 4.0 * max(width1, width2)
    step = 2.0 * half / (n - 1)
    axes = s.spatial_axes(n, 0.0, step)
    q1 = axes[0].values[:, None]
    q2 = axes[1].values[None, :]
    data = np.exp(-q1**2 / (4.0 * width1**2)) * np.exp(-q2**2 / (4.0 * width2**2))
    field = s.l2_normalize(s.ComplexField(axes, data))
    return s.JointAmplitude(mode=s.SPATIAL2D, field=field, provenance="analytic")
