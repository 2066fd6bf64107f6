"""Asymptotic infinite-decoy BB84 key rate with multiplexing background noise.

Noise photons reaching the gated single-photon detector raise the background
count rate, which feeds the standard gain/QBER estimates and the GLLP-style
rate R = 1/2 [Q1 - f Qmu H2(Emu) - Q1 H2(e1)], clamped at zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .noise import ComponentParams, DomainError, LinkParams, compute_noise_budget

DEFAULT_MU_GRID = tuple(round(0.05 + 0.01 * i, 2) for i in range(96))  # 0.05..1.0


@dataclass(frozen=True)
class Bb84Params:
    mu: float = 0.5  # signal mean photon number
    y0_base: float = 5e-6  # intrinsic background rate per gate
    e_det: float = 0.003  # misalignment error probability
    e0: float = 0.5  # background error rate
    eta_bob: float = 0.038
    f_ec: float = 1.22  # error-correction inefficiency
    delta_t_s: float = 1e-9  # SPD gating window

    def __post_init__(self):
        if self.mu <= 0:
            raise DomainError("mu must be positive")
        if not 0 <= self.e_det <= 0.5:
            raise DomainError("e_det must be in [0, 0.5]")
        if self.f_ec < 1:
            raise DomainError("f_ec must be >= 1")
        if not 0 < self.eta_bob <= 1:
            raise DomainError("eta_bob must be in (0, 1]")
        if self.y0_base < 0:
            raise DomainError("y0_base must be >= 0")


@dataclass(frozen=True)
class Bb84Point:
    z_km: float
    y0: float
    q_mu: float
    e_mu: float
    q1: float
    e1: float
    rate: float


def background_rate(y0_base: float, eta_bob: float, n_spd_window: float) -> float:
    """Total background rate per gate, capped at 1."""
    if min(y0_base, eta_bob, n_spd_window) < 0:
        raise DomainError("background inputs must be >= 0")
    return min(1.0, y0_base + eta_bob * n_spd_window)


def binary_entropy(p: float) -> float:
    """Shannon entropy of a binary variable, in bits. H2(0) = H2(1) = 0."""
    if not 0 <= p <= 1:
        raise DomainError(f"probability {p} outside [0, 1]")
    if p == 0 or p == 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def bb84_point_from_rates(
    z_km: float, eta: float, y0: float, params: Bb84Params, mu: float
) -> Bb84Point:
    """Gains, QBERs and rate from the overall efficiency and background rate."""
    q_mu = y0 + 1.0 - math.exp(-eta * mu)
    q1 = (y0 + eta) * mu * math.exp(-mu)
    if q_mu <= 0 or q1 <= 0:
        return Bb84Point(z_km, y0, q_mu, 0.0, q1, 0.0, 0.0)
    e_mu = (params.e0 * y0 + params.e_det * (1.0 - math.exp(-eta * mu))) / q_mu
    e1 = (params.e0 * y0 + params.e_det * eta) * mu * math.exp(-mu) / q1

    rate = 0.5 * (
        q1
        - params.f_ec * q_mu * binary_entropy(min(e_mu, 0.5))
        - q1 * binary_entropy(min(e1, 0.5))
    )
    return Bb84Point(z_km, y0, q_mu, e_mu, q1, e1, max(0.0, rate))


def _efficiency_and_background(
    link: LinkParams, comp: ComponentParams, params: Bb84Params
) -> Tuple[float, float]:
    budget = compute_noise_budget(link, comp, params.delta_t_s)
    eta_ch = 10.0 ** (-link.alpha_db_per_km * link.fiber_length_km / 10.0)
    eta = eta_ch * comp.eta_dmu * params.eta_bob
    y0 = background_rate(params.y0_base, params.eta_bob, budget.n_spd_window)
    return eta, y0


def bb84_point(
    link: LinkParams,
    comp: ComponentParams,
    params: Bb84Params,
    mu: Optional[float] = None,
) -> Bb84Point:
    """Evaluate gains, QBERs and secure key rate at one distance."""
    eta, y0 = _efficiency_and_background(link, comp, params)
    return bb84_point_from_rates(
        link.fiber_length_km, eta, y0, params, params.mu if mu is None else mu
    )


def optimize_mu(
    link: LinkParams,
    comp: ComponentParams,
    params: Bb84Params,
    mu_grid: Sequence[float] = DEFAULT_MU_GRID,
) -> Tuple[float, Bb84Point]:
    """Grid argmax of the key rate over mu; ties go to the smaller mu."""
    if not mu_grid:
        raise ValueError("mu grid must be nonempty")
    eta, y0 = _efficiency_and_background(link, comp, params)
    best_mu, best_point = None, None
    for mu in mu_grid:
        point = bb84_point_from_rates(link.fiber_length_km, eta, y0, params, mu)
        if best_point is None or point.rate > best_point.rate:
            best_mu, best_point = mu, point
    return best_mu, best_point
