import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dwdm_qkd.gmcs import (
    GmcsParams,
    gmcs_point,
    secure_distance,
    theta,
    total_excess_noise,
)
from dwdm_qkd.noise import ComponentParams, DomainError, LinkParams, channel_transmittance, compute_noise_budget

PARAMS = GmcsParams()
COMP = ComponentParams()


def rate_at(z_km, m=1, det=PARAMS, comp=COMP, strict=False):
    link = LinkParams(fiber_length_km=z_km, classical_channel_count=m)
    budget = compute_noise_budget(
        link, comp, 1e-9, eta_bob=det.eta_bob,
        detector_bandwidth_hz=det.detector_bandwidth_hz, n_lo=det.n_lo,
    )
    eta_ch = channel_transmittance(z_km, link.alpha_db_per_km)
    eps_in = budget.eps_in + (budget.eps_out if strict else 0.0)
    eps = total_excess_noise(
        det.eps0, eps_in, eta_ch, comp.eta_dmu, det.eta_bob,
        sigma_meas=det.sigma_meas, conservative=det.conservative,
    )
    return gmcs_point(eta_ch, det, eps, eta_dmu=comp.eta_dmu, z_km=z_km)


class TestTheta:
    def test_known_values(self):
        assert theta(0.0) == 0.0
        assert theta(1.0) == pytest.approx(2.0)
        assert theta(0.5) == pytest.approx(1.37744375, rel=1e-8)

    def test_negative_rejected_and_tolerance_clamped(self):
        with pytest.raises(DomainError):
            theta(-0.1)
        assert theta(-1e-14) == 0.0

    def test_grid_positive_increasing_concave(self):
        xs = [0.01 * i for i in range(1, 500)]
        ys = [theta(x) for x in xs]
        assert all(y > 0 for y in ys)
        assert all(b > a for a, b in zip(ys, ys[1:]))
        second = [ys[i + 1] - 2 * ys[i] + ys[i - 1] for i in range(1, len(ys) - 1)]
        assert all(d < 0 for d in second)


class TestTotalExcessNoise:
    def test_intrinsic_only(self):
        assert total_excess_noise(0.01, 0.0, 0.38, 0.71, 0.6) == 0.01

    def test_20km_example(self):
        eps = total_excess_noise(0.01, 2.13e-3, 0.380189, 0.71, 0.6)
        assert eps == pytest.approx(0.0232, abs=5e-4)

    def test_conservative_padding(self):
        eta = 0.380189 * 0.71 * 0.6
        eps = total_excess_noise(
            0.01, 2.13e-3, 0.380189, 0.71, 0.6, sigma_meas=0.024, conservative=True
        )
        assert eps == pytest.approx(0.0232 + 0.024 / eta, abs=1e-3)

    def test_zero_transmittance_rejected(self):
        with pytest.raises(DomainError):
            total_excess_noise(0.01, 1e-3, 0.0, 0.71, 0.6)


class TestGmcsPoint:
    def test_lossless_noiseless_closed_form(self):
        det = GmcsParams(v_el=0.0, eta_bob=1.0)
        point = gmcs_point(1.0, det, 0.0, eta_dmu=1.0)
        v = det.v_a + 1
        assert point.i_ab == pytest.approx(0.5 * math.log2(v), rel=1e-12)
        assert point.chi_be == pytest.approx(0.0, abs=1e-6)
        assert point.rate == pytest.approx(det.gamma * 0.5 * math.log2(v), rel=1e-6)

    def test_channel_spectrum_against_numpy_symplectic_oracle(self):
        # sigma_1,2 must match the symplectic eigenvalues of the two-mode
        # covariance matrix [[V, sqrt(T)c sz], [sqrt(T)c sz, T(V+chi)]]
        for eta_ch, eps in [(0.9, 0.0), (0.38, 0.02), (0.1, 0.15)]:
            point = gmcs_point(eta_ch, PARAMS, eps, eta_dmu=COMP.eta_dmu)
            v = PARAMS.v_a + 1
            chi_line = 1 / eta_ch - 1 + eps
            c = math.sqrt(v * v - 1)
            a_blk = v * np.eye(2)
            b_blk = eta_ch * (v + chi_line) * np.eye(2)
            c_blk = math.sqrt(eta_ch) * c * np.diag([1, -1])
            gamma = np.block([[a_blk, c_blk], [c_blk, b_blk]])
            omega = np.kron(np.eye(2), np.array([[0, 1], [-1, 0]]))
            # eigenvalues of i*Omega*gamma come in +/-nu pairs; deduplicate
            nus = sorted(np.abs(np.linalg.eigvals(1j * omega @ gamma)))[::2]
            assert point.sigma[0] == pytest.approx(max(nus), rel=1e-9)
            assert point.sigma[1] == pytest.approx(min(nus), rel=1e-9)

    def test_vieta_consistency(self):
        for eta_ch, eps, v_el in [(0.99, 0.0, 0.0), (0.5, 0.05, 0.01), (0.12, 0.3, 0.1)]:
            det = dataclasses.replace(PARAMS, v_el=v_el)
            point = gmcs_point(eta_ch, det, eps, eta_dmu=COMP.eta_dmu)
            v = det.v_a + 1
            chi_line = 1 / eta_ch - 1 + eps
            chi_hom = (1 + v_el) / (COMP.eta_dmu * det.eta_bob) - 1
            chi_tot = chi_line + chi_hom / eta_ch
            a = v * v * (1 - 2 * eta_ch) + 2 * eta_ch + eta_ch**2 * (v + chi_line) ** 2
            b = eta_ch**2 * (v * chi_line + 1) ** 2
            c = (v * math.sqrt(b) + eta_ch * (v + chi_line) + a * chi_hom) / (
                eta_ch * (v + chi_tot)
            )
            d = math.sqrt(b) * (v + math.sqrt(b) * chi_hom) / (eta_ch * (v + chi_tot))
            s1, s2, s3, s4 = point.sigma
            assert s1**2 * s2**2 == pytest.approx(b, rel=1e-9)
            assert s1**2 + s2**2 == pytest.approx(a, rel=1e-9)
            assert s3**2 * s4**2 == pytest.approx(d, rel=1e-9)
            assert s3**2 + s4**2 == pytest.approx(c, rel=1e-9)

    def test_rate_nonincreasing_in_noise(self):
        for eta_ch in (0.9, 0.5, 0.2):
            rates_eps = [
                gmcs_point(eta_ch, PARAMS, eps, eta_dmu=COMP.eta_dmu).rate
                for eps in (0.0, 0.02, 0.05, 0.1, 0.2)
            ]
            assert all(b <= a for a, b in zip(rates_eps, rates_eps[1:]))
            rates_vel = [
                gmcs_point(
                    eta_ch, dataclasses.replace(PARAMS, v_el=v), 0.01, eta_dmu=COMP.eta_dmu
                ).rate
                for v in (0.0, 0.01, 0.05, 0.1, 0.3)
            ]
            assert all(b <= a for a, b in zip(rates_vel, rates_vel[1:]))

    @settings(max_examples=60, deadline=None)
    @given(
        st.floats(min_value=0.02, max_value=1.0),
        st.floats(min_value=0.0, max_value=0.4),
        st.floats(min_value=0.0, max_value=0.3),
    )
    def test_physical_sweep_stays_finite_and_nonnegative(self, eta_ch, eps, v_el):
        det = dataclasses.replace(PARAMS, v_el=v_el)
        point = gmcs_point(eta_ch, det, eps, eta_dmu=COMP.eta_dmu)
        assert point.i_ab >= 0
        assert point.chi_be >= 0
        assert point.rate >= 0
        assert all(s >= 1 - 1e-9 for s in point.sigma)

    def test_continuity_at_no_multiplexing_limit(self):
        faint = rate_at(20, m=1)
        # push the launch power to nothing and pin the booster at unit gain
        # (ASE scales with G - 1, not with launch power): recovers the
        # unmultiplexed curve
        link = LinkParams(fiber_length_km=20, classical_channel_count=1, p_out_dbm=-300)
        quiet = dataclasses.replace(COMP, gain_fixed=1.0)
        budget = compute_noise_budget(link, quiet, 1e-9, eta_bob=0.6)
        eta_ch = channel_transmittance(20, 0.21)
        eps = total_excess_noise(0.01, budget.eps_in, eta_ch, 0.71, 0.6)
        none = gmcs_point(eta_ch, PARAMS, eps, eta_dmu=0.71).rate
        clean = rate_at(20, m=0).rate
        assert none == pytest.approx(clean, rel=1e-9)
        assert faint.rate < clean

    def test_invalid_inputs(self):
        with pytest.raises(DomainError):
            gmcs_point(0.0, PARAMS, 0.01)
        with pytest.raises(DomainError):
            gmcs_point(0.5, PARAMS, -0.01)


class TestSecureDistance:
    def test_zero_when_never_positive(self):
        assert secure_distance(lambda z: 0.0, 80) == 0.0

    def test_linear_rate_root(self):
        dist = secure_distance(lambda z: max(0.0, 25.0 - z), 80)
        assert dist == pytest.approx(25.0, abs=0.05)

    def test_warns_when_positive_at_zmax(self):
        with pytest.warns(UserWarning):
            assert secure_distance(lambda z: 1.0, 30) == 30

    def test_38_channel_scenario_near_10km(self):
        det = PARAMS
        dist = secure_distance(lambda z: rate_at(z, m=38).rate, 80)
        assert 8 <= dist <= 12

    def test_conservative_100mhz_detector_near_14km(self):
        det = dataclasses.replace(
            PARAMS, v_el=0.1, detector_bandwidth_hz=100e6, conservative=True
        )
        dist = secure_distance(lambda z: rate_at(z, m=1, det=det).rate, 80)
        assert 12 <= dist <= 16
