"""spdcsim: two-photon state simulation for parametric downconversion.

The emitted pair state is built by coherently summing pair-creation
amplitudes over every position and time inside the crystal, which makes
energy and transverse-momentum conservation emerge from interference
rather than being imposed. A closed-form joint amplitude (pump spectral
amplitude at the sum coordinates, times the phase-matching sinc) serves
as the fast path and as the cross-check for the direct quadrature.
"""

__version__ = "0.1.0"

from .analysis import (CorrelationReport, SchmidtSpectrum,
                       difference_coordinate_marginal, first_zero_width,
                       marginal, position_space_pair_density,
                       schmidt_decompose, sum_coordinate_marginal,
                       sum_difference_statistics)
from .backend import available_backends, backend_name, scatter_phase_sum
from .biphoton import (FULL4D, SPATIAL2D, SPECTRAL2D, DirectQuadrature,
                       JointAmplitude, ModePoint, ScatterWindows,
                       direct_wavefunction, finite_window_joint_amplitude,
                       joint_amplitude_analytic, point_scatter_amplitude,
                       spatial_axes, spectral_axes)
from .config import (RunConfig, build_axes, build_crystal, build_pump,
                     build_quadrature, build_windows, parse_config,
                     serialize_config)
from .core import (Axis, ComplexField, PhysConstants, RealField,
                   fourier_q_to_x, fourier_x_to_q, l2_norm, l2_normalize,
                   mode_kz, read_field_dump, relative_l2_error,
                   write_field_dump)
from .errors import (AxisMismatch, EvanescentMode, GridTooCoarse,
                     ModeMismatch, NotTwoPartite, OutOfValidityRange,
                     ParseError, PoleProximity, SpdcError, ValidationError,
                     ZeroField)
from .phasematch import (CollinearCheck, ConeLocus, ConstantIndex,
                         CrystalConfig, SellmeierIndex, collinear_condition,
                         cone_transverse_momenta, longitudinal_mismatch,
                         phase_matching_factor, refractive_index, sinc,
                         wavenumber)
from .pump import GaussianPump, PlaneWavePump, PumpQuadrature

__all__ = [name for name in dir() if not name.startswith("_")]
