"""Noise-photon budget for a quantum channel multiplexed with classical DWDM traffic.

Covers the three physical noise sources seen by the quantum channel:

* broadband amplified spontaneous emission (ASE) from the booster EDFA,
  filtered by the MUX isolation,
* direct leakage of the classical carrier through the finite DEMUX isolation,
* spontaneous anti-Stokes Raman scattering (SASRS) generated along the fiber.

The budget is expressed per spatiotemporal mode, per detector gating window
(single-photon detection) and per local-oscillator mode (homodyne detection).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .units import (
    PLANCK_H,
    SPEED_OF_LIGHT,
    db_to_linear,
    dbm_to_watts,
    photon_energy,
    watts_to_dbm,
)


class DomainError(ValueError):
    """An input is outside the physically valid range of an operation."""


class UnfittableError(ValueError):
    """The measurement set cannot determine the requested coefficient."""


@dataclass(frozen=True)
class LinkParams:
    """Fiber span and classical-traffic description.

    p_out_dbm is the per-channel classical power at the fiber output
    (just before the DEMUX), held constant by the amplifier gain schedule.
    """

    fiber_length_km: float = 20.0
    alpha_db_per_km: float = 0.21
    beta_raman: float = 4e-9  # spontaneous Raman coefficient, 1/(km*nm)
    classical_channel_count: int = 1
    p_out_dbm: float = 0.0
    lambda_quantum_nm: float = 1550.0
    lambda_classical_nm: float = 1550.8

    def __post_init__(self):
        if self.fiber_length_km < 0:
            raise DomainError("fiber_length_km must be >= 0")
        if self.beta_raman < 0:
            raise DomainError("beta_raman must be >= 0")
        if self.classical_channel_count < 0:
            raise DomainError("classical_channel_count must be >= 0")
        if self.lambda_classical_nm <= self.lambda_quantum_nm:
            raise DomainError(
                "classical channels must sit at longer wavelengths than the "
                "quantum channel"
            )

    @property
    def p_out_w(self) -> float:
        return dbm_to_watts(self.p_out_dbm)


@dataclass(frozen=True)
class ComponentParams:
    """EDFA and MUX/DEMUX characteristics.

    The amplifier gain either follows the schedule G = gain_g0 / eta_ch
    (keeping the classical output power constant with distance) or is
    pinned to gain_fixed when that is set.
    """

    nf_db: float = 6.0206  # linear NF = 4
    gain_g0: float = 100.0
    gain_fixed: Optional[float] = None
    xi1: float = 1e-8  # MUX cross-channel isolation, linear
    xi2: float = 1e-8  # DEMUX cross-channel isolation, linear
    eta_mux: float = 0.71
    eta_dmu: float = 0.71
    delta_nu_hz: float = 75e9
    nsp_exact: bool = False  # False: n_sp = NF/2 high-gain convention

    def __post_init__(self):
        if not (0 < self.eta_mux <= 1 and 0 < self.eta_dmu <= 1):
            raise DomainError("insertion transmittances must be in (0, 1]")
        if not (0 <= self.xi1 <= 1 and 0 <= self.xi2 <= 1):
            raise DomainError("isolations must be in [0, 1]")
        if db_to_linear(self.nf_db) < 1:
            raise DomainError("linear noise figure must be >= 1")
        if self.gain_g0 < 1 or (self.gain_fixed is not None and self.gain_fixed < 1):
            raise DomainError("amplifier gain must be >= 1")
        if self.delta_nu_hz <= 0:
            raise DomainError("channel bandwidth must be positive")

    def gain_at(self, eta_ch: float) -> float:
        if self.gain_fixed is not None:
            return self.gain_fixed
        return self.gain_g0 / eta_ch


@dataclass(frozen=True)
class NoiseBudget:
    """Per-source noise tallies at one distance.

    Mode/rate quantities are aggregated over all classical channels.
    The window components satisfy
    n_spd_window == ase_window + leak_window + sasrs_window exactly.
    """

    n_ase_per_mode_at_a: float
    n_leak_per_s_at_c: float
    n_sasrs_per_mode_at_c: float
    ase_window: float
    leak_window: float
    sasrs_window: float
    n_spd_window: float
    n_gmcs_matched: float
    n_gmcs_unmatched: float
    eps_in: float
    eps_out: float


def channel_transmittance(z_km: float, alpha_db_per_km: float) -> float:
    """Linear transmittance of z_km of fiber with attenuation alpha (dB/km)."""
    if z_km < 0 or alpha_db_per_km < 0:
        raise DomainError("fiber length and attenuation must be >= 0")
    return 10.0 ** (-alpha_db_per_km * z_km / 10.0)


def nsp_from_nf(nf_linear: float, gain: float, high_gain: bool = False) -> float:
    """Spontaneous emission factor of an amplifier with linear noise figure NF.

    The exact unsaturated-regime inversion is (NF*G - 1) / (2*(G - 1));
    with high_gain=True the G >> 1 limit n_sp = NF/2 is used instead.
    """
    if nf_linear < 1:
        raise DomainError("linear noise figure must be >= 1")
    if high_gain:
        return nf_linear / 2.0
    if gain <= 1:
        raise DomainError("gain must exceed 1 to invert NF into n_sp")
    return (nf_linear * gain - 1.0) / (2.0 * (gain - 1.0))


def ase_per_mode(n_sp: float, gain: float) -> float:
    """ASE photons per spatiotemporal mode at the amplifier output.

    The factor 2 counts both polarization modes.
    """
    if n_sp < 1:
        raise DomainError("n_sp must be >= 1 (spontaneous-emission limit)")
    if gain < 1:
        raise DomainError("gain must be >= 1")
    return 2.0 * n_sp * (gain - 1.0)


def ase_after_mux(n_ase_per_mode: float, xi1: float) -> float:
    """In-band ASE per mode after bandpass filtering by the MUX isolation."""
    if not 0 <= xi1 <= 1:
        raise DomainError("xi1 must be in [0, 1]")
    return xi1 * n_ase_per_mode


def ase_band_power_dbm(
    n_ase_per_mode: float,
    delta_nu_hz: float,
    photon_energy_j: float,
    insertion_loss_db: float = 0.0,
) -> float:
    """Optical power (dBm) of the ASE within one channel bandwidth.

    Reproduces the bench check n * delta_nu * h*nu attenuated by the
    channel insertion loss.
    """
    if n_ase_per_mode <= 0:
        raise DomainError("photon count must be positive to express a power")
    if delta_nu_hz <= 0 or photon_energy_j <= 0:
        raise DomainError("bandwidth and photon energy must be positive")
    p_w = n_ase_per_mode * delta_nu_hz * photon_energy_j
    p_w *= db_to_linear(-insertion_loss_db)
    return watts_to_dbm(p_w)


def leakage_rate(p_out_w: float, xi2: float, photon_energy_j: float) -> float:
    """Classical-carrier photons per second leaking through the DEMUX."""
    if p_out_w < 0:
        raise DomainError("p_out must be >= 0")
    if not 0 <= xi2 <= 1:
        raise DomainError("xi2 must be in [0, 1]")
    return xi2 * p_out_w / photon_energy_j


def sasrs_band_power(
    p_out_w: float, beta: float, z_km: float, delta_lambda_nm: float
) -> float:
    """SASRS power (W) within delta_lambda_nm at the fiber output."""
    if min(p_out_w, beta, z_km, delta_lambda_nm) < 0:
        raise DomainError("all SASRS inputs must be >= 0")
    return p_out_w * beta * z_km * delta_lambda_nm


def sasrs_per_mode(
    p_out_w: float, beta: float, z_km: float, eta_dmu: float, lambda_m: float
) -> float:
    """In-band SASRS photons per spatiotemporal mode after the DEMUX.

    Equals sasrs_band_power / (h*nu * N_mode) * eta_dmu with
    N_mode = (c / lambda^2) * delta_lambda; the bandwidth cancels, leaving
    the closed form lambda^3 / (h c^2) * P_out * beta * z * eta_dmu.
    """
    if min(p_out_w, beta, z_km, eta_dmu) < 0:
        raise DomainError("all SASRS inputs must be >= 0")
    if lambda_m <= 0:
        raise DomainError("wavelength must be positive")
    beta_per_km_m = beta * 1e9  # 1/(km*nm) -> 1/(km*m)
    return (
        lambda_m**3
        / (PLANCK_H * SPEED_OF_LIGHT**2)
        * p_out_w
        * beta_per_km_m
        * z_km
        * eta_dmu
    )


def mode_count(delta_nu_hz: float, delta_t_s: float) -> float:
    """Number of spatiotemporal modes in a bandwidth-time window."""
    if delta_nu_hz <= 0 or delta_t_s <= 0:
        raise DomainError("bandwidth and time window must be positive")
    return delta_nu_hz * delta_t_s


def fit_raman_coefficient(
    measurements: Sequence[Tuple[float, float]],
    p_out_w: float,
    delta_lambda_nm: float,
    insertion_loss_db: float = 0.0,
) -> float:
    """Back the Raman coefficient beta out of (z_km, measured power W) points.

    Measurements are taken after a component with the given insertion loss;
    the model is P = P_out * beta * z * delta_lambda * 10^(-IL/10).
    Least-squares through the origin; a single point is exact inversion.
    """
    points = [(z, p) for z, p in measurements if z > 0]
    if not points:
        raise UnfittableError("need at least one measurement with z > 0")
    il = db_to_linear(-insertion_loss_db)
    scale = p_out_w * delta_lambda_nm * il
    if scale <= 0:
        raise DomainError("p_out and delta_lambda must be positive")
    num = sum(p * z for z, p in points)
    den = sum(z * z for z, _ in points)
    return num / (scale * den)


def compute_noise_budget(
    link: LinkParams,
    comp: ComponentParams,
    delta_t_s: float,
    eta_bob: float = 0.0,
    detector_bandwidth_hz: Optional[float] = None,
    n_lo: Optional[float] = None,
) -> NoiseBudget:
    """Evaluate every noise quantity for one link configuration.

    delta_t_s is the SPD gating window (it also sets the reference window
    for unmatched-mode homodyne noise). eta_bob, detector_bandwidth_hz and
    n_lo are only needed for the homodyne excess-noise outputs; when they
    are absent the corresponding fields are zero.
    """
    m = link.classical_channel_count
    eta_ch = channel_transmittance(link.fiber_length_km, link.alpha_db_per_km)
    p_out = link.p_out_w
    e_classical = photon_energy(link.lambda_classical_nm * 1e-9)

    if m > 0:
        gain = comp.gain_at(eta_ch)
        if gain > 1:
            n_sp = nsp_from_nf(db_to_linear(comp.nf_db), gain, high_gain=not comp.nsp_exact)
            n_ase = ase_per_mode(n_sp, gain)
        else:
            n_ase = 0.0
        n_ase_a = m * ase_after_mux(n_ase, comp.xi1)
        n_leak = m * leakage_rate(p_out, comp.xi2, e_classical)
        n_sasrs = m * sasrs_per_mode(
            p_out,
            link.beta_raman,
            link.fiber_length_km,
            comp.eta_dmu,
            link.lambda_quantum_nm * 1e-9,
        )
    else:
        n_ase_a = n_leak = n_sasrs = 0.0

    n_mod = mode_count(comp.delta_nu_hz, delta_t_s)
    ase_window = n_mod * eta_ch * comp.eta_dmu * n_ase_a
    leak_window = n_leak * delta_t_s
    sasrs_window = n_mod * n_sasrs
    n_spd = ase_window + leak_window + sasrs_window

    n_matched = 0.5 * (eta_ch * comp.eta_dmu * n_ase_a + n_sasrs)
    eps_in = 2.0 * eta_bob * n_matched

    n_unmatched = 0.0
    eps_out = 0.0
    if detector_bandwidth_hz is not None and n_lo is not None:
        if detector_bandwidth_hz <= 0 or n_lo <= 0:
            raise DomainError("detector bandwidth and LO photon number must be positive")
        delta_t_hom = 1.0 / (2.0 * math.pi * detector_bandwidth_hz)
        n_unmatched = (delta_t_hom / delta_t_s) * n_spd
        eps_out = eta_bob * n_unmatched / n_lo

    return NoiseBudget(
        n_ase_per_mode_at_a=n_ase_a,
        n_leak_per_s_at_c=n_leak,
        n_sasrs_per_mode_at_c=n_sasrs,
        ase_window=ase_window,
        leak_window=leak_window,
        sasrs_window=sasrs_window,
        n_spd_window=n_spd,
        n_gmcs_matched=n_matched,
        n_gmcs_unmatched=n_unmatched,
        eps_in=eps_in,
        eps_out=eps_out,
    )
