"""Physical constants and dB/dBm unit conversions.

All internal computation uses linear SI units; decibel quantities exist
only at the I/O boundary.
"""
from __future__ import annotations

import math

PLANCK_H = 6.62607015e-34  # J*s
SPEED_OF_LIGHT = 299792458.0  # m/s

# Rounded energy of a 1550 nm photon, kept for fixtures that reproduce
# published bench arithmetic. Prefer photon_energy() for general use.
PHOTON_ENERGY_1550_J = 1.28e-19


def db_to_linear(db: float) -> float:
    """Convert a dB value to a linear power ratio."""
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    """Convert a linear power ratio to dB. Requires x > 0."""
    if x <= 0:
        raise ValueError(f"cannot express non-positive ratio {x} in dB")
    return 10.0 * math.log10(x)


def dbm_to_watts(dbm: float) -> float:
    return 1e-3 * 10.0 ** (dbm / 10.0)


def watts_to_dbm(p_w: float) -> float:
    if p_w <= 0:
        raise ValueError(f"cannot express non-positive power {p_w} W in dBm")
    return 10.0 * math.log10(p_w / 1e-3)


def photon_energy(lambda_m: float) -> float:
    """Energy in joules of a photon at vacuum wavelength lambda_m (meters)."""
    if lambda_m <= 0:
        raise ValueError("wavelength must be positive")
    return PLANCK_H * SPEED_OF_LIGHT / lambda_m
