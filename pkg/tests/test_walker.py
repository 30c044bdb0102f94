import math
import random

import numpy as np
import pytest

from satroute import (
    EARTH_RADIUS_KM,
    ConstellationParams,
    EcefCoord,
    GeodeticCoord,
    SatId,
    SpecParseError,
    compile_model,
    isl_distance,
    neighbors,
    normalize,
    orbital_state,
    parse_spec,
    satellite_ecef,
    to_ecef,
    to_geodetic,
)
from conftest import make_params, sweep_constellations

TWO_PI = 2.0 * math.pi


class TestNormalize:
    def test_identity(self):
        assert normalize(0.0) == 0.0

    def test_wraps_down(self):
        assert normalize(3 * math.pi / 2) == pytest.approx(-math.pi / 2, abs=1e-15)

    def test_lower_boundary_included(self):
        assert normalize(-math.pi) == -math.pi

    def test_upper_boundary_maps_to_lower(self):
        assert normalize(math.pi) == -math.pi

    def test_range_and_congruence(self):
        rng = random.Random(0)
        for _ in range(2000):
            x = rng.uniform(-100.0, 100.0)
            y = normalize(x)
            assert -math.pi <= y < math.pi
            assert abs((y - x) % TWO_PI) < 1e-9 or abs((y - x) % TWO_PI - TWO_PI) < 1e-9

    def test_tiny_negative_float_quirk(self):
        # (x + pi) % 2pi can round up to exactly 2pi for tiny negative inputs
        y = normalize(-math.pi - 1e-17)
        assert -math.pi <= y < math.pi


class TestParams:
    def test_derived_spacings(self):
        p = make_params(5, 10, 2, inclination_deg=60.0)
        assert p.delta_raan == pytest.approx(math.radians(72.0))
        assert p.delta_phase == pytest.approx(math.radians(36.0))
        assert p.phase_offset == pytest.approx(math.radians(14.4))
        assert p.orbit_radius_km == pytest.approx(EARTH_RADIUS_KM + 550.0)

    def test_symmetry_invariant(self):
        # P * phase_offset must be a whole number of in-plane spacings
        for p in (make_params(5, 10, 2), make_params(72, 22, 39), make_params(8, 9, 7)):
            ratio = p.planes * p.phase_offset / p.delta_phase
            assert ratio == pytest.approx(round(ratio), abs=1e-9)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(planes=0, sats_per_plane=4, factor=0),
            dict(planes=4, sats_per_plane=0, factor=0),
            dict(planes=4, sats_per_plane=4, factor=4),
            dict(planes=4, sats_per_plane=4, factor=-1),
        ],
    )
    def test_invalid_params(self, kwargs):
        with pytest.raises(ValueError):
            make_params(kwargs["planes"], kwargs["sats_per_plane"], kwargs["factor"])

    def test_negative_altitude_allowed_for_unit_scaling(self):
        p = make_params(4, 4, 0, altitude_km=1.0 - EARTH_RADIUS_KM)
        assert p.orbit_radius_km == pytest.approx(1.0)


class TestSpecParsing:
    def test_starlink(self):
        p = parse_spec("53.0:1584/72/39@550")
        assert (p.planes, p.sats_per_plane, p.phasing_factor) == (72, 22, 39)
        assert p.inclination_rad == pytest.approx(math.radians(53.0))
        assert p.altitude_km == 550.0

    def test_roundtrip(self):
        for spec in ("53:1584/72/39@550", "60:50/5/2@550", "70:300/20/5@1200"):
            assert parse_spec(parse_spec(spec).to_spec()).to_spec() == parse_spec(spec).to_spec()

    def test_rejects_non_divisible_total(self):
        with pytest.raises(SpecParseError) as exc:
            parse_spec("53:1583/72/39@550")
        assert exc.value.position >= 0
        assert "divisible" in str(exc.value)

    @pytest.mark.parametrize(
        "text",
        ["", "53", "53:100/10@550", "53:100/10/2", "x:100/10/2@550",
         "53:a/10/2@550", "53:100/10/10@550", "53:100/0/0@550"],
    )
    def test_malformed_specs(self, text):
        with pytest.raises(SpecParseError):
            parse_spec(text)


class TestOrbitalState:
    def test_origin_satellite(self, fig3_params):
        st = orbital_state(fig3_params, SatId(0, 0))
        assert st.raan_initial == 0.0
        assert st.arg_latitude == 0.0
        assert st.ascending

    def test_wrapped_phase(self, fig3_params):
        # (0, 8): 8 * 36 deg = 288 deg wraps to -72 deg, still ascending
        st = orbital_state(fig3_params, SatId(0, 8))
        assert math.degrees(st.arg_latitude) == pytest.approx(-72.0)
        assert st.ascending

    def test_descending_satellite(self, fig3_params):
        # (2, 6): raan 144 deg, phase 2*14.4 + 216 = 244.8 -> -115.2 deg
        st = orbital_state(fig3_params, SatId(2, 6))
        assert math.degrees(st.raan_initial) == pytest.approx(144.0)
        assert math.degrees(st.arg_latitude) == pytest.approx(-115.2)
        assert not st.ascending

    def test_out_of_range(self, fig3_params):
        with pytest.raises(ValueError):
            orbital_state(fig3_params, SatId(5, 0))
        with pytest.raises(ValueError):
            orbital_state(fig3_params, SatId(0, 10))

    def test_ascending_boundary_closed(self):
        # u = +-pi/2 exactly counts as ascending
        p = make_params(1, 4, 0)
        assert orbital_state(p, SatId(0, 1)).arg_latitude == pytest.approx(math.pi / 2)
        assert orbital_state(p, SatId(0, 1)).ascending
        assert orbital_state(p, SatId(0, 3)).ascending


class TestCoordinates:
    def test_ascending_node(self, fig3_params):
        st = orbital_state(fig3_params, SatId(0, 0))
        geo = to_geodetic(fig3_params, st)
        assert geo.latitude == 0.0
        assert geo.longitude == 0.0

    def test_northernmost_point(self):
        p = make_params(1, 4, 0, inclination_deg=53.0)
        geo = to_geodetic(p, orbital_state(p, SatId(0, 1)))  # u = pi/2
        assert geo.latitude == pytest.approx(p.inclination_rad)
        assert geo.longitude == pytest.approx(math.pi / 2)

    def test_descending_node_is_antipodal(self):
        p = make_params(1, 4, 0, inclination_deg=53.0)
        geo = to_geodetic(p, orbital_state(p, SatId(0, 2)))  # u = pi -> -pi
        assert geo.latitude == pytest.approx(0.0, abs=1e-12)
        assert abs(geo.longitude) == pytest.approx(math.pi)

    def test_ecef_examples(self):
        x, y, z = to_ecef(GeodeticCoord(0.0, 0.0, 550.0))
        assert (x, y, z) == pytest.approx((6928.137, 0.0, 0.0), abs=1e-9)
        x, y, z = to_ecef(GeodeticCoord(math.pi / 2, 1.23, 0.0))
        assert (x, y, z) == pytest.approx((0.0, 0.0, EARTH_RADIUS_KM), abs=1e-9)
        x, y, z = to_ecef(GeodeticCoord(0.0, math.pi / 2, 0.0))
        assert (x, y, z) == pytest.approx((0.0, EARTH_RADIUS_KM, 0.0), abs=1e-9)

    def test_radius_invariant(self, starlink_params):
        r = starlink_params.orbit_radius_km
        for sat in (SatId(0, 0), SatId(35, 11), SatId(71, 21)):
            p = satellite_ecef(starlink_params, sat)
            assert math.sqrt(p.x**2 + p.y**2 + p.z**2) == pytest.approx(r, rel=1e-9)

    def test_latitude_bounded_by_inclination(self, starlink_params):
        alpha = starlink_params.inclination_rad
        model = compile_model(starlink_params)
        assert np.abs(model.lat).max() <= alpha + 1e-12

    def test_rotation_form_oracle(self):
        # independent formulation: rotate the in-plane position by RAAN
        p = make_params(7, 11, 3, inclination_deg=61.0)
        r = p.orbit_radius_km
        ca, sa = math.cos(p.inclination_rad), math.sin(p.inclination_rad)
        for sat in (SatId(0, 0), SatId(3, 7), SatId(6, 10), SatId(4, 2)):
            st = orbital_state(p, sat)
            cu, su = math.cos(st.arg_latitude), math.sin(st.arg_latitude)
            cl, sl = math.cos(st.raan_initial), math.sin(st.raan_initial)
            expected = (
                r * (cu * cl - su * ca * sl),
                r * (cu * sl + su * ca * cl),
                r * su * sa,
            )
            got = satellite_ecef(p, sat)
            assert got == pytest.approx(expected, rel=1e-12, abs=1e-9)


class TestNeighbors:
    def test_seam_examples(self, fig3_params):
        nb = neighbors(fig3_params, SatId(0, 0))
        assert nb.left == SatId(4, 8)
        assert nb.right == SatId(1, 0)
        assert nb.successor == SatId(0, 1)
        assert nb.predecessor == SatId(0, 9)
        assert neighbors(fig3_params, SatId(4, 0)).right == SatId(0, 2)
        assert neighbors(fig3_params, SatId(2, 9)).successor == SatId(2, 0)

    def test_symmetry_and_degree(self):
        rng = random.Random(1)
        for params in rng.sample(list(sweep_constellations(alphas=(53.0,))), 12):
            for _ in range(10):
                sat = SatId(
                    rng.randrange(params.planes), rng.randrange(params.sats_per_plane)
                )
                nbs = neighbors(params, sat)
                assert len(set(nbs)) == 4
                for other in nbs:
                    assert sat in neighbors(params, other)


class TestIslDistance:
    def test_zero_iff_same(self, starlink_params):
        assert isl_distance(starlink_params, SatId(3, 3), SatId(3, 3)) == 0.0
        assert isl_distance(starlink_params, SatId(3, 3), SatId(3, 4)) > 0.0

    def test_symmetry(self, starlink_params):
        a, b = SatId(10, 5), SatId(40, 17)
        assert isl_distance(starlink_params, a, b) == pytest.approx(
            isl_distance(starlink_params, b, a), rel=1e-15
        )

    def test_starlink_intra_plane_hop(self, starlink_params):
        # chord of the 22-satellite polygon: 2 r sin(pi/22)
        expected = 2 * starlink_params.orbit_radius_km * math.sin(math.pi / 22)
        assert isl_distance(starlink_params, SatId(0, 0), SatId(0, 1)) == pytest.approx(
            expected, rel=1e-12
        )
        assert expected == pytest.approx(1971.9533933803257, rel=1e-12)

    def test_72_per_plane_hop_is_604km(self):
        # 2 r sin(pi/72) at 550 km altitude
        p = make_params(10, 72, 0)
        assert isl_distance(p, SatId(0, 0), SatId(0, 1)) == pytest.approx(
            604.4021830462337, rel=1e-12
        )

    def test_time_invariance(self, starlink_params):
        a, b = SatId(0, 0), SatId(31, 7)
        d0 = isl_distance(starlink_params, a, b, t=0.0)
        for t in (1.0, 977.5, 86400.0):
            assert isl_distance(starlink_params, a, b, t=t) == pytest.approx(d0, rel=1e-12)

    def test_intra_plane_hops_all_equal(self):
        for params in (make_params(5, 10, 2, 60.0), make_params(8, 9, 3, 70.0)):
            q = params.sats_per_plane
            ref = isl_distance(params, SatId(0, 0), SatId(0, 1))
            for o in range(params.planes):
                for i in range(q):
                    d = isl_distance(params, SatId(o, i), SatId(o, (i + 1) % q))
                    assert d == pytest.approx(ref, rel=1e-9)


class TestModel:
    def test_matches_scalar_pipeline(self, fig3_params):
        model = compile_model(fig3_params)
        for sat in (SatId(0, 0), SatId(2, 6), SatId(4, 9)):
            idx = model.sat_index(sat)
            st = orbital_state(fig3_params, sat)
            assert model.l0[idx] == st.raan_initial
            assert model.u[idx] == st.arg_latitude
            assert bool(model.ascending[idx]) == st.ascending
            geo = to_geodetic(fig3_params, st)
            assert model.lat[idx] == pytest.approx(geo.latitude, rel=1e-15, abs=1e-15)
            assert tuple(model.coords[idx]) == pytest.approx(
                tuple(to_ecef(geo)), rel=1e-12
            )

    def test_neighbor_table_matches_scalar(self, fig3_params):
        model = compile_model(fig3_params)
        for idx in range(model.n):
            sat = model.sat_id(idx)
            expected = [model.sat_index(nb) for nb in neighbors(fig3_params, sat)]
            assert list(model.nbrs[idx]) == expected

    def test_index_roundtrip(self, starlink_params):
        model = compile_model(starlink_params)
        for idx in (0, 1, 100, model.n - 1):
            assert model.sat_index(model.sat_id(idx)) == idx

    def test_model_cached(self, starlink_params):
        assert compile_model(starlink_params) is compile_model(starlink_params)
