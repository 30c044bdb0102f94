import math

import pytest

from satroute import ConstellationParams, SatId


def make_params(planes, sats_per_plane, factor, inclination_deg=53.0, altitude_km=550.0):
    return ConstellationParams(
        inclination_rad=math.radians(inclination_deg),
        planes=planes,
        sats_per_plane=sats_per_plane,
        phasing_factor=factor,
        altitude_km=altitude_km,
    )


def sweep_constellations(alphas=(40.0, 53.0, 60.0, 70.0)):
    """The small-constellation sweep used by the validation criteria."""
    for alpha in alphas:
        for planes in range(3, 9):
            for q in range(4, 13):
                for factor in range(planes):
                    yield make_params(planes, q, factor, inclination_deg=alpha)


def all_sat_pairs(params):
    n = params.total_sats
    q = params.sats_per_plane
    for a in range(n):
        for b in range(a + 1, n):
            yield SatId(a // q, a % q), SatId(b // q, b % q)


@pytest.fixture(scope="session")
def fig3_params():
    """The 60 deg 50/5/2 constellation of the worked hop-count example."""
    return make_params(5, 10, 2, inclination_deg=60.0)


@pytest.fixture(scope="session")
def starlink_params():
    return make_params(72, 22, 39, inclination_deg=53.0)
