"""Gaussian-modulated coherent-state (homodyne) key rate, realistic model.

Reverse-reconciliation rate dI = gamma * I_AB - chi_BE where Eve's Holevo
information chi_BE comes from the symplectic spectrum of the channel and
conditional covariance matrices. Excess noise from multiplexed classical
channels enters through the matched-mode term; unmatched-mode noise is
reported and only added to epsilon in strict mode.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from .noise import DomainError

DISCRIMINANT_RTOL = 1e-9
# roundoff in the root extraction can leave a symplectic eigenvalue a few
# 1e-11 below 1; clamp at the same scale as DISCRIMINANT_RTOL
THETA_TOL = 1e-9


class PhysicalityError(ValueError):
    """A covariance discriminant came out negative beyond tolerance."""


@dataclass(frozen=True)
class GmcsParams:
    v_a: float = 10.0  # modulation variance, shot-noise units
    eta_bob: float = 0.6
    eps0: float = 0.01  # intrinsic excess noise, input-referred
    v_el: float = 0.01  # electronic noise of the homodyne detector
    gamma: float = 0.9  # reconciliation efficiency
    n_lo: float = 1e8  # LO photons per pulse
    detector_bandwidth_hz: float = 1e6
    sigma_meas: float = 0.024  # excess-noise measurement uncertainty
    conservative: bool = False  # add sigma_meas to the excess-noise estimate

    def __post_init__(self):
        if self.v_a <= 0:
            raise DomainError("v_a must be positive")
        if not 0 < self.eta_bob <= 1:
            raise DomainError("eta_bob must be in (0, 1]")
        if min(self.eps0, self.v_el, self.sigma_meas) < 0:
            raise DomainError("noise terms must be >= 0")
        if not 0 < self.gamma <= 1:
            raise DomainError("gamma must be in (0, 1]")
        if self.n_lo <= 0 or self.detector_bandwidth_hz <= 0:
            raise DomainError("n_lo and detector bandwidth must be positive")


@dataclass(frozen=True)
class GmcsPoint:
    z_km: float
    eps: float  # total input-referred excess noise
    i_ab: float
    chi_be: float
    rate: float
    sigma: Tuple[float, float, float, float]


def theta(x: float) -> float:
    """Bosonic entropy function (x+1)log2(x+1) - x log2 x, Theta(0) = 0."""
    if x < -THETA_TOL:
        raise DomainError(f"theta argument {x} must be >= 0")
    if x <= 0:
        return 0.0
    return (x + 1.0) * math.log2(x + 1.0) - x * math.log2(x)


def total_excess_noise(
    eps0: float,
    eps_in: float,
    eta_ch: float,
    eta_dmu: float,
    eta_bob: float,
    sigma_meas: float = 0.0,
    conservative: bool = False,
) -> float:
    """Input-referred excess noise: intrinsic plus multiplexing, optionally
    padded by the homodyne measurement uncertainty (conservative estimate)."""
    eta = eta_ch * eta_dmu * eta_bob
    if eta <= 0:
        raise DomainError("total transmittance must be positive")
    eps = eps0 + eps_in / eta
    if conservative:
        eps += sigma_meas / eta
    return eps


def _split_roots(s: float, p: float, label: str) -> Tuple[float, float]:
    # roots of x^2 - s*x + p, i.e. the squared symplectic eigenvalues
    disc = s * s - 4.0 * p
    if disc < 0:
        if disc < -DISCRIMINANT_RTOL * s * s:
            raise PhysicalityError(f"negative discriminant for {label}: {disc}")
        disc = 0.0
    root = math.sqrt(disc)
    return 0.5 * (s + root), 0.5 * (s - root)


def gmcs_point(
    eta_ch: float,
    params: GmcsParams,
    eps: float,
    eta_dmu: float = 0.71,
    z_km: float = 0.0,
) -> GmcsPoint:
    """Secure key rate per signal at one channel transmittance."""
    if not 0 < eta_ch <= 1:
        raise DomainError("eta_ch must be in (0, 1]")
    if eps < 0:
        raise DomainError("excess noise must be >= 0")

    v = params.v_a + 1.0
    eta_prime = eta_dmu * params.eta_bob
    chi_line = 1.0 / eta_ch - 1.0 + eps
    chi_hom = (1.0 + params.v_el) / eta_prime - 1.0
    chi_tot = chi_line + chi_hom / eta_ch

    i_ab = 0.5 * math.log2((v + chi_tot) / (1.0 + chi_tot))

    a = v * v * (1.0 - 2.0 * eta_ch) + 2.0 * eta_ch + eta_ch**2 * (v + chi_line) ** 2
    b = eta_ch**2 * (v * chi_line + 1.0) ** 2
    sqrt_b = math.sqrt(b)
    denom = eta_ch * (v + chi_tot)
    c = (v * sqrt_b + eta_ch * (v + chi_line) + a * chi_hom) / denom
    d = sqrt_b * (v + sqrt_b * chi_hom) / denom

    s1sq, s2sq = _split_roots(a, b, "channel spectrum")
    s3sq, s4sq = _split_roots(c, d, "conditional spectrum")
    sigma = tuple(math.sqrt(s) for s in (s1sq, s2sq, s3sq, s4sq))

    chi_be = (
        theta((sigma[0] - 1.0) / 2.0)
        + theta((sigma[1] - 1.0) / 2.0)
        - theta((sigma[2] - 1.0) / 2.0)
        - theta((sigma[3] - 1.0) / 2.0)
    )
    rate = max(0.0, params.gamma * i_ab - chi_be)
    return GmcsPoint(z_km, eps, i_ab, max(0.0, chi_be), rate, sigma)


def secure_distance(
    rate_fn: Callable[[float], float],
    z_max_km: float,
    tolerance_km: float = 0.05,
    scan_step_km: float = 1.0,
) -> float:
    """Largest distance with strictly positive rate, by scan then bisection.

    Returns 0 when the rate is never positive; returns z_max_km (with a
    warning) when the rate is still positive at the end of the scan.
    """
    grid = [i * scan_step_km for i in range(int(z_max_km / scan_step_km) + 1)]
    if grid[-1] < z_max_km:
        grid.append(z_max_km)
    positive = [z for z in grid if rate_fn(z) > 0]
    if not positive:
        return 0.0
    if positive[-1] == grid[-1]:
        warnings.warn(f"rate still positive at z_max = {z_max_km} km")
        return z_max_km

    # detect multiple sign changes; keep the largest root
    signs = [rate_fn(z) > 0 for z in grid]
    changes = sum(1 for i in range(1, len(signs)) if signs[i] != signs[i - 1])
    if changes > 1:
        warnings.warn("key rate crosses zero more than once; using largest root")

    lo = positive[-1]
    hi = next(z for z in grid if z > lo and rate_fn(z) <= 0)
    while hi - lo > tolerance_km:
        mid = 0.5 * (lo + hi)
        if rate_fn(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
