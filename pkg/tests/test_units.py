import math

import pytest
from hypothesis import given, strategies as st

from dwdm_qkd.units import (
    PHOTON_ENERGY_1550_J,
    db_to_linear,
    dbm_to_watts,
    linear_to_db,
    photon_energy,
    watts_to_dbm,
)


def test_photon_energy_1550_matches_compat_constant():
    # hc/1550nm, compared against the rounded bench constant
    assert photon_energy(1550e-9) == pytest.approx(PHOTON_ENERGY_1550_J, rel=2e-3)


def test_db_known_values():
    assert db_to_linear(0.0) == 1.0
    assert db_to_linear(-80.0) == pytest.approx(1e-8)
    assert dbm_to_watts(0.0) == pytest.approx(1e-3)
    assert dbm_to_watts(4.0) == pytest.approx(2.51188643e-3, rel=1e-8)


@given(st.floats(min_value=-120, max_value=120))
def test_db_round_trip(db):
    assert linear_to_db(db_to_linear(db)) == pytest.approx(db, rel=1e-12, abs=1e-12)


@given(st.floats(min_value=-90, max_value=60))
def test_dbm_round_trip(dbm):
    assert watts_to_dbm(dbm_to_watts(dbm)) == pytest.approx(dbm, rel=1e-12, abs=1e-12)


def test_nonpositive_ratios_rejected():
    with pytest.raises(ValueError):
        linear_to_db(0.0)
    with pytest.raises(ValueError):
        watts_to_dbm(-1e-3)
    with pytest.raises(ValueError):
        photon_energy(0.0)
