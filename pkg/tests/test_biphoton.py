import math

import numpy as np
import pytest

import spdcsim as s

OMEGA0 = 4.8e15
INDEX = s.ConstantIndex(1.6)


def plane_pump():
    return s.PlaneWavePump(omega0=OMEGA0, index_model=INDEX)


def gaussian_pump(sigma_omega=5e11, waist=1e-4):
    return s.GaussianPump(omega0=OMEGA0, sigma_omega=sigma_omega, waist=waist,
                          index_model=INDEX)


def crystal(L=1e-6):
    return s.CrystalConfig(L=L, index_pump=INDEX, index_signal=INDEX,
                           index_idler=INDEX)


class TestModePoint:
    def test_derived_members(self):
        m = s.ModePoint.create(0.0, OMEGA0 / 2, INDEX)
        assert m.k == pytest.approx(1.6 * OMEGA0 / 2 / 2.99792458e8)
        assert m.kz == m.k
        m2 = s.ModePoint.create(1e4, OMEGA0 / 2, INDEX)
        assert m2.kz < m2.k

    def test_invariant_enforced(self):
        with pytest.raises(s.ValidationError):
            s.ModePoint(q=0.0, omega=1.0, k=1.0, kz=2.0)


class TestPointScatter:
    def test_zero_pump_amplitude(self):
        m = s.ModePoint.create(0.0, OMEGA0 / 2, INDEX)
        val = s.point_scatter_amplitude(0.0, (0.0, 0.0), 0.0, [m], [m],
                                        (1.0, 2.0), (3.0, 4.0), 1e-9)
        assert val == 0

    def test_coincident_event_in_phase(self):
        modes = [s.ModePoint.create(q, OMEGA0 / 2, INDEX) for q in (0.0, 1e4, 2e4)]
        r = (1e-4, 2e-4)
        t = 3e-13
        val = s.point_scatter_amplitude(0.5 + 0.5j, r, t, modes, modes[:2],
                                        r, r, t, weights1=[1.0, 2.0, 3.0],
                                        weights2=[1.0, 1.0])
        assert val == pytest.approx((0.5 + 0.5j) * 6.0 * 2.0)

    def test_destructive_interference(self):
        x_obs = 1e-3
        m_zero = s.ModePoint.create(0.0, OMEGA0 / 2, INDEX)
        m_pi = s.ModePoint.create(math.pi / x_obs, OMEGA0 / 2, INDEX)
        # evaluate at z = z', t = t': only the q(x - x') phase survives,
        # and it differs by pi between the two modes of photon 1
        val = s.point_scatter_amplitude(1.0, (0.0, 0.0), 0.0,
                                        [m_zero, m_pi], [m_zero],
                                        (x_obs, 0.0), (0.0, 0.0), 0.0)
        assert abs(val) < 1e-12

    def test_empty_mode_list_rejected(self):
        m = s.ModePoint.create(0.0, OMEGA0 / 2, INDEX)
        with pytest.raises(s.ValidationError):
            s.point_scatter_amplitude(1.0, (0, 0), 0.0, [], [m],
                                      (0, 0), (0, 0), 0.0)


class TestFiniteWindow:
    def test_peak_on_conservation_surface(self):
        step = 1e11
        axes = s.spectral_axes(64, OMEGA0 / 2, step)
        win = s.ScatterWindows(T=2 * math.pi / (8 * step), W=1e-4)
        amp = s.finite_window_joint_amplitude(plane_pump(), win, axes)
        mods = np.abs(amp.field.data)
        i, j = np.unravel_index(np.argmax(mods), mods.shape)
        assert i + j == 63  # w1 + w2 = omega0 anti-diagonal

    def test_first_zero_at_two_pi_over_T(self):
        step = 1e11
        n = 64
        T = 2 * math.pi / (8 * step)  # first zero 8 lattice steps out
        axes = s.spectral_axes(n, OMEGA0 / 2, step)
        amp = s.finite_window_joint_amplitude(
            plane_pump(), s.ScatterWindows(T=T, W=1e-4), axes)
        w1 = axes[0].values
        # pick the bin with w1 + w2 - omega0 = 8 step exactly
        i, j = 35, 36  # (i + j - 63) * step = 8 * step
        assert (w1[i] + w1[j] - OMEGA0) == pytest.approx(8 * step, rel=1e-9)
        assert abs(amp.field.data[i, j]) < 1e-12 * np.abs(amp.field.data).max()

    def test_doubling_T_halves_frequency_width(self):
        step = 1e11
        axes = s.spectral_axes(64, OMEGA0 / 2, step)
        widths = []
        for T in (2 * math.pi / (8 * step), 2 * math.pi / (4 * step)):
            amp = s.finite_window_joint_amplitude(
                plane_pump(), s.ScatterWindows(T=T, W=1e-4), axes)
            widths.append(s.first_zero_width(*s.sum_coordinate_marginal(amp)))
        assert widths[1] == pytest.approx(widths[0] / 2, rel=0.05)

    def test_doubling_W_halves_momentum_width(self):
        step = 2e3
        axes = s.spatial_axes(64, 0.0, step)
        widths = []
        for W in (math.pi / (8 * step), math.pi / (4 * step)):
            amp = s.finite_window_joint_amplitude(
                plane_pump(), s.ScatterWindows(T=1e-12, W=W), axes)
            widths.append(s.first_zero_width(*s.sum_coordinate_marginal(amp)))
        assert widths[1] == pytest.approx(widths[0] / 2, rel=0.05)

    def test_gaussian_pump_rejected(self):
        axes = s.spectral_axes(8, OMEGA0 / 2, 1e11)
        with pytest.raises(s.ValidationError):
            s.finite_window_joint_amplitude(
                gaussian_pump(), s.ScatterWindows(T=1e-12, W=1e-4), axes)


class TestAnalytic:
    def test_gaussian_spectral_efold_at_two_sigma(self):
        pump = gaussian_pump()
        step = pump.sigma_omega / 4
        axes = s.spectral_axes(64, OMEGA0 / 2, step)
        amp = s.joint_amplitude_analytic(pump, crystal(), axes,
                                         include_pm_factor=False)
        mods = np.abs(amp.field.data)
        peak = mods[31, 32]  # w1 + w2 = omega0
        val = mods[35, 36]   # w1 + w2 = omega0 + 8 step = omega0 + 2 sigma
        assert val / peak == pytest.approx(math.exp(-1.0), rel=1e-6)

    def test_peak_where_all_factors_peak(self):
        pump = gaussian_pump()
        axes = s.spatial_axes(63, 0.0, 1e3)  # odd n: q = 0 on the lattice
        amp = s.joint_amplitude_analytic(pump, crystal(), axes)
        mods = np.abs(amp.field.data)
        i, j = np.unravel_index(np.argmax(mods), mods.shape)
        assert (i + j) == 62  # q1 + q2 = 0

    def test_exchange_symmetry(self):
        pump = gaussian_pump()
        axes = s.spectral_axes(32, OMEGA0 / 2, 2e11)
        amp = s.joint_amplitude_analytic(pump, crystal(), axes)
        assert np.array_equal(amp.field.data, amp.field.data.T)

    def test_full4d_mode(self):
        pump = gaussian_pump(waist=5e-5)
        q_axes = s.spatial_axes(8, 0.0, 2e3)
        w_axes = s.spectral_axes(8, OMEGA0 / 2, 2.5e11)
        axes = (q_axes[0], w_axes[0], q_axes[1], w_axes[1])
        amp = s.joint_amplitude_analytic(pump, crystal(), axes)
        assert amp.mode == s.FULL4D
        assert amp.field.data.shape == (8, 8, 8, 8)
        swapped = np.transpose(amp.field.data, (2, 3, 0, 1))
        assert np.array_equal(amp.field.data, swapped)

    def test_pump_support_missing_grid(self):
        pump = gaussian_pump()
        axes = s.spectral_axes(8, OMEGA0 / 8, 1e10)  # sums far below omega0
        with pytest.raises(s.ZeroField):
            s.joint_amplitude_analytic(pump, crystal(), axes,
                                       include_pm_factor=False)


def matched_spectral_setup(n=16, step=1e11, n_time=256):
    """Plane-wave spectral grid whose T makes the time kernel vanish on
    every off-diagonal lattice line."""
    axes = s.spectral_axes(n, OMEGA0 / 2, step)
    win = s.ScatterWindows(T=2 * math.pi / step, W=1e-5)
    quad = s.DirectQuadrature(n_time=n_time, n_z=8, n_rho=8)
    return axes, win, quad


class TestDirect:
    def test_single_node_matches_point_scatter(self):
        axes, _, _ = matched_spectral_setup(n=4)
        win = s.ScatterWindows(T=1e-13, W=1e-5)
        quad = s.DirectQuadrature(n_time=1, n_z=1, n_rho=1)
        amp = s.direct_wavefunction(plane_pump(), crystal(), win, axes, quad)
        expected = np.empty((4, 4), complex)
        origin = (0.0, 0.0)
        for i, w1 in enumerate(axes[0].values):
            for j, w2 in enumerate(axes[1].values):
                m1 = s.ModePoint.create(0.0, w1, INDEX)
                m2 = s.ModePoint.create(0.0, w2, INDEX)
                expected[i, j] = s.point_scatter_amplitude(
                    1.0 + 0.0j, origin, 0.0, [m1], [m2], origin, origin, 0.0)
        expected /= np.linalg.norm(expected)
        got = amp.field.data / np.linalg.norm(amp.field.data)
        assert np.allclose(got, expected, rtol=1e-12, atol=1e-12)

    def test_multi_node_matches_manual_riemann(self):
        axes = s.spectral_axes(3, OMEGA0 / 2, 5e10)
        win = s.ScatterWindows(T=4e-13, W=2e-5)
        cr = crystal(L=2e-6)
        quad = s.DirectQuadrature(n_time=3, n_z=2, n_rho=2)
        amp = s.direct_wavefunction(plane_pump(), cr, win, axes, quad)

        t_nodes = -win.T / 2 + (np.arange(3) + 0.5) * (win.T / 3)
        z_nodes = -cr.L / 2 + (np.arange(2) + 0.5) * (cr.L / 2)
        r_nodes = -win.W + (np.arange(2) + 0.5) * win.W
        pump = plane_pump()
        expected = np.zeros((3, 3), complex)
        for i, w1 in enumerate(axes[0].values):
            m1 = s.ModePoint.create(0.0, w1, INDEX)
            for j, w2 in enumerate(axes[1].values):
                m2 = s.ModePoint.create(0.0, w2, INDEX)
                for tp in t_nodes:
                    for zp in z_nodes:
                        for rp in r_nodes:
                            psi = complex(pump.position_amplitude(rp, zp, tp))
                            expected[i, j] += s.point_scatter_amplitude(
                                psi, (rp, zp), tp, [m1], [m2],
                                (0.0, 0.0), (0.0, 0.0), 0.0)
        expected /= np.linalg.norm(expected)
        got = amp.field.data / np.linalg.norm(amp.field.data)
        assert np.allclose(got, expected, rtol=1e-10, atol=1e-10)

    def test_oracle_equivalence_spectral(self):
        axes, win, quad = matched_spectral_setup()
        direct = s.direct_wavefunction(plane_pump(), crystal(), win, axes, quad)
        analytic = s.joint_amplitude_analytic(plane_pump(), crystal(), axes)
        assert s.relative_l2_error(analytic.field, direct.field) < 1e-2

    def test_oracle_equivalence_spatial(self):
        step = 2e3
        axes = s.spatial_axes(16, 0.0, step)
        win = s.ScatterWindows(T=1e-12, W=math.pi / step)
        quad = s.DirectQuadrature(n_time=4, n_z=8, n_rho=128)
        cr = crystal(L=1e-4)
        direct = s.direct_wavefunction(plane_pump(), cr, win, axes, quad)
        analytic = s.joint_amplitude_analytic(plane_pump(), cr, axes)
        assert s.relative_l2_error(analytic.field, direct.field) < 1e-2

    def test_gaussian_pump_matches_analytic(self):
        pump = gaussian_pump()
        step = 2.5e11
        axes = s.spectral_axes(16, OMEGA0 / 2, step)
        win = s.ScatterWindows(T=2.4e-11, W=6e-4)
        quad = s.DirectQuadrature(n_time=256, n_z=8, n_rho=128,
                                  pump=s.PumpQuadrature(128, 128))
        direct = s.direct_wavefunction(pump, crystal(), win, axes, quad)
        analytic = s.joint_amplitude_analytic(pump, crystal(), axes)
        assert s.relative_l2_error(analytic.field, direct.field) < 2e-2

    def test_conservation_width_scales_with_T(self):
        step = 1e11
        axes = s.spectral_axes(64, OMEGA0 / 2, step)
        widths = []
        for T, n_time in ((2 * math.pi / (8 * step), 64),
                          (2 * math.pi / (4 * step), 128)):
            amp = s.direct_wavefunction(
                plane_pump(), crystal(), s.ScatterWindows(T=T, W=1e-5), axes,
                s.DirectQuadrature(n_time=n_time, n_z=4, n_rho=4))
            widths.append(s.first_zero_width(*s.sum_coordinate_marginal(amp)))
        assert widths[1] == pytest.approx(widths[0] / 2, rel=0.05)

    def test_momentum_width_scales_with_W(self):
        step = 2e3
        axes = s.spatial_axes(64, 0.0, step)
        widths = []
        for W, n_rho in ((math.pi / (8 * step), 64),
                         (math.pi / (4 * step), 128)):
            amp = s.direct_wavefunction(
                plane_pump(), crystal(L=1e-5), s.ScatterWindows(T=1e-12, W=W),
                axes, s.DirectQuadrature(n_time=4, n_z=4, n_rho=n_rho))
            widths.append(s.first_zero_width(*s.sum_coordinate_marginal(amp)))
        assert widths[1] == pytest.approx(widths[0] / 2, rel=0.05)

    def test_self_convergence_on_density_doubling(self):
        pump = gaussian_pump()
        axes = s.spectral_axes(16, OMEGA0 / 2, 2.5e11)
        win = s.ScatterWindows(T=2.4e-11, W=6e-4)
        quad = s.DirectQuadrature(n_time=256, n_z=8, n_rho=128,
                                  pump=s.PumpQuadrature(128, 128))
        coarse = s.direct_wavefunction(pump, crystal(), win, axes, quad)
        fine = s.direct_wavefunction(pump, crystal(), win, axes, quad.doubled())
        assert s.relative_l2_error(fine.field, coarse.field) < 1e-3

    def test_aliasing_guard_trips(self):
        axes, win, _ = matched_spectral_setup()
        with pytest.raises(s.GridTooCoarse):
            s.direct_wavefunction(plane_pump(), crystal(), win, axes,
                                  s.DirectQuadrature(n_time=2, n_z=4, n_rho=4))

    def test_observation_plane_validation(self):
        axes, win, quad = matched_spectral_setup(n=4, n_time=64)
        z_obs = 0.5
        travel = 1.6 * z_obs / 2.99792458e8
        with pytest.raises(s.ValidationError):
            s.direct_wavefunction(plane_pump(), crystal(), win, axes, quad,
                                  observation=(z_obs, 0.5 * travel))
        ok = s.direct_wavefunction(plane_pump(), crystal(), win, axes, quad,
                                   observation=(z_obs, travel + win.T))
        assert ok.provenance == "direct"

    def test_rejects_position_grid(self):
        axes = (s.Axis("x1", 4, 0.0, 1e-5), s.Axis("x2", 4, 0.0, 1e-5))
        with pytest.raises(s.AxisMismatch):
            s.direct_wavefunction(plane_pump(), crystal(),
                                  s.ScatterWindows(T=1e-13, W=1e-5), axes)

    def test_backends_agree(self):
        axes, win, quad = matched_spectral_setup(n=8, n_time=128)
        fields = [
            s.direct_wavefunction(plane_pump(), crystal(), win, axes, quad,
                                  kernel_backend=name).field.data
            for name in s.available_backends()]
        for other in fields[1:]:
            assert np.allclose(fields[0], other, rtol=1e-10, atol=1e-12)


class TestJointAmplitudeType:
    def test_mode_must_match_axes(self):
        axes = s.spectral_axes(4, OMEGA0 / 2, 1e11)
        field = s.l2_normalize(s.ComplexField(axes, np.ones((4, 4), complex)))
        with pytest.raises(s.AxisMismatch):
            s.JointAmplitude(mode=s.SPATIAL2D, field=field, provenance="analytic")

    def test_windows_require_positive_sizes(self):
        with pytest.raises(s.ValidationError):
            s.ScatterWindows(T=0.0, W=1.0)
        with pytest.raises(s.ValidationError):
            s.ScatterWindows(T=1.0, W=-1.0)
