import json

import numpy as np
import pytest
import scipy.linalg as sla

from degsyn import (
    DegradationParams,
    DegradationReport,
    FaultSignalBounds,
    InvalidDegradationError,
    InvalidInputError,
    actuator_channel_gain,
    degradation_report,
    filter_dynamics,
    is_hurwitz,
)


class TestDegradationParams:
    def test_noise_scaling(self):
        deg = DegradationParams(omega_c=[1.0, 1.0], kappa_a=[1.0, 4.0], gamma_xf=0.5)
        assert np.array_equal(deg.noise_scaling, [1.0, 0.5])

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(omega_c=[0.0], kappa_a=[1.0], gamma_xf=0.0),
            dict(omega_c=[1.0], kappa_a=[-1.0], gamma_xf=0.0),
            dict(omega_c=[1.0], kappa_a=[1.0], gamma_xf=-0.1),
            dict(omega_c=[1.0, 2.0], kappa_a=[1.0], gamma_xf=0.0),
        ],
    )
    def test_domain_validation(self, kwargs):
        with pytest.raises(InvalidDegradationError):
            DegradationParams(**kwargs)


class TestFaultSignalBounds:
    def test_nonnegative(self):
        FaultSignalBounds(gamma_a=0.5, gamma_u=1.0)
        with pytest.raises(InvalidInputError):
            FaultSignalBounds(gamma_a=-0.5, gamma_u=1.0)


class TestFilterDynamics:
    def test_scalar_lag_unit_dc_gain(self):
        filt = filter_dynamics(DegradationParams(omega_c=[1.0], kappa_a=[1.0], gamma_xf=0.0))
        assert np.array_equal(filt.A, [[-1.0]])
        assert np.array_equal(filt.Bu, [[1.0]])
        dc = filt.Cz @ np.linalg.solve(-filt.A, filt.Bu)
        assert np.allclose(dc, [[1.0]])

    def test_two_channel_decoupled(self):
        filt = filter_dynamics(DegradationParams(omega_c=[2.0, 5.0], kappa_a=[1.0, 1.0], gamma_xf=0.0))
        assert np.array_equal(filt.A, np.diag([-2.0, -5.0]))
        dc = filt.Cz @ np.linalg.solve(-filt.A, filt.Bu)
        assert np.allclose(dc, np.eye(2))

    def test_step_response_first_order(self):
        # unit step into the wc = 2 channel: x_F(t) = 1 - exp(-2 t)
        filt = filter_dynamics(DegradationParams(omega_c=[2.0], kappa_a=[1.0], gamma_xf=0.0))
        for t in (0.1, 0.5, 1.0, 3.0):
            xf = (np.eye(1) - sla.expm(filt.A * t)) @ np.linalg.solve(-filt.A, filt.Bu)
            assert abs(xf[0, 0] - (1.0 - np.exp(-2.0 * t))) < 1e-12

    def test_always_hurwitz(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            wc = 10.0 ** rng.uniform(-5, 5, size=rng.integers(1, 5))
            filt = filter_dynamics(DegradationParams(omega_c=wc, kappa_a=np.ones_like(wc), gamma_xf=0.0))
            assert is_hurwitz(filt)

    def test_rejects_nonpositive_cutoff(self):
        with pytest.raises(InvalidDegradationError):
            DegradationParams(omega_c=[1.0, 0.0], kappa_a=[1.0, 1.0], gamma_xf=0.0)


class TestActuatorChannelGain:
    def test_identity_gain_rows(self):
        wc = np.array([2.0, 5.0, 0.3])
        deg = DegradationParams(omega_c=wc, kappa_a=np.ones(3), gamma_xf=0.0)
        V = np.diag(wc)  # K = I
        for i in range(3):
            assert abs(actuator_channel_gain(deg, V, i) - 1.0) < 1e-12

    def test_zero_gain(self):
        deg = DegradationParams(omega_c=[1.0, 2.0], kappa_a=[1.0, 1.0], gamma_xf=0.0)
        assert actuator_channel_gain(deg, np.zeros((2, 3)), 0) == 0.0

    def test_grid_supremum_matches_analytic(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            nu, nx = int(rng.integers(1, 4)), int(rng.integers(1, 5))
            wc = 10.0 ** rng.uniform(-2, 3, size=nu)
            deg = DegradationParams(omega_c=wc, kappa_a=np.ones(nu), gamma_xf=0.0)
            V = rng.standard_normal((nu, nx))
            for i in range(nu):
                analytic = np.linalg.norm(V[i] / wc[i])
                w = np.logspace(np.log10(wc[i]) - 4, np.log10(max(wc.max(), 1.0)) + 4, 10000)
                grid = np.max(np.linalg.norm(V[i]) / np.abs(1j * w + wc[i]))
                # grid undershoots only
                assert grid <= analytic + 1e-6
                assert grid >= analytic - 1e-4 * analytic
                assert abs(actuator_channel_gain(deg, V, i) - analytic) < 1e-12

    def test_index_out_of_range(self):
        deg = DegradationParams(omega_c=[1.0], kappa_a=[1.0], gamma_xf=0.0)
        with pytest.raises(InvalidInputError):
            actuator_channel_gain(deg, np.ones((1, 2)), 1)


class TestDegradationReport:
    def test_unit_noise_scaling(self):
        deg = DegradationParams(omega_c=np.ones(3), kappa_a=[1.0, 1.0, 1.0], gamma_xf=0.0)
        rep = degradation_report(deg, np.zeros((3, 4)), objective=0.0)
        assert [r.noise_scale for r in rep.rows] == [1.0, 1.0, 1.0]

    def test_inverse_sqrt_kappa(self):
        deg = DegradationParams(omega_c=np.ones(1), kappa_a=[4.0], gamma_xf=0.0)
        rep = degradation_report(deg, np.zeros((1, 2)), objective=0.0)
        assert rep.rows[0].noise_scale == 0.5

    def test_schema_spans_reported_range(self):
        # cutoffs from the study span 2.4381 .. 16079.2678 rad/s
        wc = np.array([2.4381, 16079.2678, 2033.7134])
        deg = DegradationParams(omega_c=wc, kappa_a=[618.6, 510204.1, 137174.2], gamma_xf=8.5e6)
        rep = degradation_report(deg, np.diag(wc) @ np.ones((3, 4)) * 0.1, objective=1.0,
                                 actuator_labels=["T", "delta_e", "delta_lef"])
        payload = json.dumps(rep.to_dict())
        back = DegradationReport.from_dict(json.loads(payload))
        assert back == rep  # bit-exact float round-trip through JSON
        assert [r.actuator for r in back.rows] == ["T", "delta_e", "delta_lef"]

    def test_label_count_mismatch(self):
        deg = DegradationParams(omega_c=np.ones(2), kappa_a=np.ones(2), gamma_xf=0.0)
        with pytest.raises(InvalidInputError):
            degradation_report(deg, np.zeros((2, 2)), 0.0, actuator_labels=["a"])
