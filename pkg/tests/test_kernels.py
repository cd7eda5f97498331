"""Backend equivalence: compiled kernel, NumPy fallback and a naive
reference implementation must agree."""

import numpy as np
import pytest

import spdcsim as s


def naive_phase_sum(pump, rho, z, t, q_sum, kz_sum, w_sum):
    out = np.zeros(len(q_sum), complex)
    for o in range(len(q_sum)):
        phase = (w_sum[o] * t[None, None, :]
                 - kz_sum[o] * z[None, :, None]
                 - q_sum[o] * rho[:, None, None])
        out[o] = np.sum(pump * np.exp(1j * phase))
    return out


@pytest.fixture
def workload():
    rng = np.random.default_rng(42)
    pump = rng.normal(size=(5, 4, 7)) + 1j * rng.normal(size=(5, 4, 7))
    rho = np.linspace(-1.0, 1.0, 5)
    z = np.linspace(-0.5, 0.5, 4)
    t = np.linspace(-2.0, 2.0, 7)
    q_sum = rng.normal(scale=3.0, size=33)
    kz_sum = rng.normal(scale=5.0, size=33)
    w_sum = rng.normal(scale=2.0, size=33)
    return pump, rho, z, t, q_sum, kz_sum, w_sum


def test_backends_match_reference(workload):
    ref = naive_phase_sum(*workload)
    for name in s.available_backends():
        got = s.scatter_phase_sum(*workload, backend=name)
        assert np.allclose(got, ref, rtol=1e-12, atol=1e-12 * np.abs(ref).max())


def test_threaded_result_identical(workload):
    single = s.scatter_phase_sum(*workload, threads=1)
    multi = s.scatter_phase_sum(*workload, threads=4)
    assert np.array_equal(single, multi)


def test_unknown_backend_rejected(workload):
    with pytest.raises(s.ValidationError):
        s.scatter_phase_sum(*workload, backend="fortran")


def test_backend_name_listed():
    assert s.backend_name() in s.available_backends()
