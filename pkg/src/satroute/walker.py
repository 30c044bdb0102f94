"""Walker Delta constellation model.

Satellites move on circular orbits grouped into evenly spaced planes; a
constellation is fully described by inclination, plane count P, satellites
per plane Q, phasing factor F and altitude.  This module provides the
per-satellite orbital state, the conversion chain to geodetic and ECEF
coordinates, the 4-neighbour inter-satellite link topology and Euclidean
link distances, plus a compiled array form of the whole constellation used
by the routing kernels.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import SpecParseError

EARTH_RADIUS_KM = 6378.137
# WGS84 mean angular velocity of the Earth, rad/s.
EARTH_ROTATION_RAD_S = 7.292115e-5

TWO_PI = 2.0 * math.pi


def normalize(x: float) -> float:
    """Wrap an angle into [-pi, pi[."""
    y = (x + math.pi) % TWO_PI
    # Float quirk: for tiny negative inputs the modulo can round up to 2*pi.
    if y == TWO_PI:
        y = 0.0
    return y - math.pi


def _normalize_array(x: np.ndarray) -> np.ndarray:
    y = np.mod(x + math.pi, TWO_PI)
    y[y == TWO_PI] = 0.0
    return y - math.pi


@dataclass(frozen=True)
class ConstellationParams:
    """Walker Delta descriptor (inclination:PQ/P/F at some altitude)."""

    inclination_rad: float
    planes: int
    sats_per_plane: int
    phasing_factor: int
    altitude_km: float
    earth_rotation_rad_s: float = EARTH_ROTATION_RAD_S

    def __post_init__(self):
        if self.planes < 1:
            raise ValueError(f"planes must be >= 1, got {self.planes}")
        if self.sats_per_plane < 1:
            raise ValueError(f"sats_per_plane must be >= 1, got {self.sats_per_plane}")
        if not 0 <= self.phasing_factor < self.planes:
            raise ValueError(
                f"phasing factor must be in [0, {self.planes - 1}], got {self.phasing_factor}"
            )
        if not math.isfinite(self.inclination_rad):
            raise ValueError("inclination must be finite")
        if self.orbit_radius_km <= 0:
            raise ValueError("orbit radius (earth radius + altitude) must be positive")

    @property
    def total_sats(self) -> int:
        return self.planes * self.sats_per_plane

    @property
    def delta_raan(self) -> float:
        """RAAN difference between adjacent planes (2*pi / P)."""
        return TWO_PI / self.planes

    @property
    def delta_phase(self) -> float:
        """Argument-of-latitude difference between in-plane neighbours (2*pi / Q)."""
        return TWO_PI / self.sats_per_plane

    @property
    def phase_offset(self) -> float:
        """Argument-of-latitude difference between horizontal neighbours (2*pi*F / PQ)."""
        return TWO_PI * self.phasing_factor / self.total_sats

    @property
    def orbit_radius_km(self) -> float:
        return EARTH_RADIUS_KM + self.altitude_km

    def to_spec(self) -> str:
        return (
            f"{math.degrees(self.inclination_rad):g}:{self.total_sats}/"
            f"{self.planes}/{self.phasing_factor}@{self.altitude_km:g}"
        )


_SPEC_RE = re.compile(
    r"(?P<inc>[^:]*):(?P<total>[^/]*)/(?P<planes>[^/]*)/(?P<factor>[^@]*)@(?P<alt>.*)"
)


def parse_spec(text: str) -> ConstellationParams:
    """Parse "<inclination_deg>:<PQ>/<P>/<F>@<altitude_km>", e.g. "53.0:1584/72/39@550"."""
    m = _SPEC_RE.fullmatch(text.strip())
    if m is None:
        colon = text.find(":")
        if colon < 0:
            raise SpecParseError("expected ':' after inclination", len(text))
        if text.count("/", colon) < 2:
            raise SpecParseError("expected 'PQ/P/F' section", colon + 1)
        raise SpecParseError("expected '@' before altitude", len(text))

    def number(group: str, kind, what: str) -> float:
        raw = m.group(group)
        try:
            return kind(raw)
        except ValueError:
            raise SpecParseError(f"invalid {what} {raw!r}", m.start(group)) from None

    inc_deg = number("inc", float, "inclination")
    total = number("total", int, "satellite count")
    planes = number("planes", int, "plane count")
    factor = number("factor", int, "phasing factor")
    alt = number("alt", float, "altitude")
    if planes < 1:
        raise SpecParseError("plane count must be >= 1", m.start("planes"))
    if total < 1 or total % planes != 0:
        raise SpecParseError(
            f"total satellite count {total} is not divisible by plane count {planes}",
            m.start("total"),
        )
    if not 0 <= factor < planes:
        raise SpecParseError(
            f"phasing factor must be in [0, {planes - 1}]", m.start("factor")
        )
    return ConstellationParams(
        inclination_rad=math.radians(inc_deg),
        planes=planes,
        sats_per_plane=total // planes,
        phasing_factor=factor,
        altitude_km=alt,
    )


class SatId(NamedTuple):
    """Satellite identifier: orbital plane index and in-plane index."""

    plane: int
    index: int


class OrbitalState(NamedTuple):
    raan_initial: float
    arg_latitude: float
    ascending: bool


class GeodeticCoord(NamedTuple):
    latitude: float
    longitude: float
    height_km: float


class EcefCoord(NamedTuple):
    x: float
    y: float
    z: float


class Neighbors(NamedTuple):
    successor: SatId
    predecessor: SatId
    left: SatId
    right: SatId


def check_sat(params: ConstellationParams, sat: SatId) -> None:
    if not (0 <= sat.plane < params.planes and 0 <= sat.index < params.sats_per_plane):
        raise ValueError(f"satellite {tuple(sat)} outside {params.to_spec()}")


def orbital_state(params: ConstellationParams, sat: SatId) -> OrbitalState:
    """Epoch RAAN and argument of latitude of a satellite.

    A satellite is ascending (flying north-east) iff its argument of latitude
    lies in the closed interval [-pi/2, pi/2].
    """
    check_sat(params, sat)
    l0 = normalize(sat.plane * params.delta_raan)
    u = normalize(sat.plane * params.phase_offset + sat.index * params.delta_phase)
    return OrbitalState(l0, u, -math.pi / 2 <= u <= math.pi / 2)


def to_geodetic(params: ConstellationParams, state: OrbitalState, t: float = 0.0) -> GeodeticCoord:
    """Sub-satellite latitude/longitude at time t (t=0 is the epoch).

    The longitude offset from the ascending node is computed with a
    two-argument arctangent, which stays finite at u = +-pi/2 and adds the
    half-turn on the descending segment automatically.
    """
    alpha = params.inclination_rad
    u = state.arg_latitude
    lat = math.asin(math.sin(alpha) * math.sin(u))
    zeta = math.atan2(math.cos(alpha) * math.sin(u), math.cos(u))
    lon = normalize(state.raan_initial - params.earth_rotation_rad_s * t + zeta)
    return GeodeticCoord(lat, lon, params.altitude_km)


def to_ecef(geo: GeodeticCoord) -> EcefCoord:
    """Geodetic to Earth-centered Earth-fixed Cartesian (spherical Earth)."""
    r = EARTH_RADIUS_KM + geo.height_km
    cos_lat = math.cos(geo.latitude)
    return EcefCoord(
        r * cos_lat * math.cos(geo.longitude),
        r * cos_lat * math.sin(geo.longitude),
        r * math.sin(geo.latitude),
    )


def satellite_ecef(params: ConstellationParams, sat: SatId, t: float = 0.0) -> EcefCoord:
    return to_ecef(to_geodetic(params, orbital_state(params, sat), t))


def neighbors(params: ConstellationParams, sat: SatId) -> Neighbors:
    """The four ISL neighbours of a satellite.

    Crossing the seam between plane P-1 and plane 0 shifts the in-plane index
    by the phasing factor so that the phase relation between horizontal
    neighbours is the same everywhere.
    """
    check_sat(params, sat)
    o, i = sat
    p, q, f = params.planes, params.sats_per_plane, params.phasing_factor
    left = SatId(o - 1, i) if o != 0 else SatId(p - 1, (i - f) % q)
    right = SatId(o + 1, i) if o != p - 1 else SatId(0, (i + f) % q)
    return Neighbors(
        successor=SatId(o, (i + 1) % q),
        predecessor=SatId(o, (i - 1) % q),
        left=left,
        right=right,
    )


def isl_distance(params: ConstellationParams, a: SatId, b: SatId, t: float = 0.0) -> float:
    """Euclidean distance in km between two satellites at time t.

    Not restricted to adjacent satellites; also used to sum route lengths.
    Independent of t because Earth rotation rotates all satellites rigidly.
    """
    pa = satellite_ecef(params, a, t)
    pb = satellite_ecef(params, b, t)
    return math.dist(pa, pb)


# Column order of the neighbour table; routing tie-breaks follow this order.
NEIGHBOR_ORDER = ("successor", "predecessor", "left", "right")
SUCC, PRED, LEFT, RIGHT = range(4)


@dataclass(frozen=True)
class ConstellationModel:
    """Array form of a constellation at the epoch, shared by all routing kernels.

    Satellite (o, i) maps to flat index o*Q + i; `nbrs` columns follow
    NEIGHBOR_ORDER.  Link lengths are computed from `coords` on demand (the
    per-edge Euclidean evaluation is part of what the benchmarks measure).
    All arrays are read-only.
    """

    params: ConstellationParams
    l0: np.ndarray
    u: np.ndarray
    lat: np.ndarray
    ascending: np.ndarray
    coords: np.ndarray
    nbrs: np.ndarray

    @property
    def n(self) -> int:
        return self.params.total_sats

    def sat_index(self, sat: SatId) -> int:
        check_sat(self.params, sat)
        return sat.plane * self.params.sats_per_plane + sat.index

    def sat_id(self, idx: int) -> SatId:
        q = self.params.sats_per_plane
        return SatId(idx // q, idx % q)

    def edge_length(self, a: int, b: int) -> float:
        """Euclidean distance between two satellites by flat index."""
        cx, cy, cz = self.coord_lists
        dx = cx[a] - cx[b]
        dy = cy[a] - cy[b]
        dz = cz[a] - cz[b]
        return math.sqrt(dx * dx + dy * dy + dz * dz)

    # List mirrors of the arrays for the pure-Python kernels, built on demand
    # (scalar indexing of numpy arrays is far slower than list indexing).
    @property
    def nbrs_rows(self) -> list:
        return self._lists()[0]

    @property
    def coord_lists(self) -> tuple[list, list, list]:
        return self._lists()[1]

    @property
    def lat_list(self) -> list:
        return self._lists()[2]

    @property
    def u_list(self) -> list:
        return self._lists()[3]

    @property
    def l0_list(self) -> list:
        return self._lists()[4]

    @property
    def ascending_list(self) -> list:
        return self._lists()[5]

    def _lists(self):
        cached = getattr(self, "_list_cache", None)
        if cached is None:
            cached = (
                self.nbrs.tolist(),
                (
                    self.coords[:, 0].tolist(),
                    self.coords[:, 1].tolist(),
                    self.coords[:, 2].tolist(),
                ),
                self.lat.tolist(),
                self.u.tolist(),
                self.l0.tolist(),
                self.ascending.tolist(),
            )
            object.__setattr__(self, "_list_cache", cached)
        return cached


def _build_model(params: ConstellationParams) -> ConstellationModel:
    p, q, f = params.planes, params.sats_per_plane, params.phasing_factor
    o = np.repeat(np.arange(p, dtype=np.int64), q)
    i = np.tile(np.arange(q, dtype=np.int64), p)

    l0 = _normalize_array(o * params.delta_raan)
    u = _normalize_array(o * params.phase_offset + i * params.delta_phase)
    ascending = (u >= -math.pi / 2) & (u <= math.pi / 2)

    alpha = params.inclination_rad
    lat = np.arcsin(np.sin(alpha) * np.sin(u))
    zeta = np.arctan2(np.cos(alpha) * np.sin(u), np.cos(u))
    lon = _normalize_array(l0 + zeta)
    r = params.orbit_radius_km
    coords = np.stack(
        [r * np.cos(lat) * np.cos(lon), r * np.cos(lat) * np.sin(lon), r * np.sin(lat)],
        axis=1,
    )

    nbrs = np.empty((p * q, 4), dtype=np.int32)
    nbrs[:, SUCC] = o * q + (i + 1) % q
    nbrs[:, PRED] = o * q + (i - 1) % q
    left_o = np.where(o != 0, o - 1, p - 1)
    left_i = np.where(o != 0, i, (i - f) % q)
    nbrs[:, LEFT] = left_o * q + left_i
    right_o = np.where(o != p - 1, o + 1, 0)
    right_i = np.where(o != p - 1, i, (i + f) % q)
    nbrs[:, RIGHT] = right_o * q + right_i

    for arr in (l0, u, lat, ascending, coords, nbrs):
        arr.setflags(write=False)
    return ConstellationModel(
        params=params, l0=l0, u=u, lat=lat, ascending=ascending,
        coords=coords, nbrs=nbrs,
    )


@lru_cache(maxsize=16)
def compile_model(params: ConstellationParams) -> ConstellationModel:
    """Build (and cache) the array model for a constellation."""
    return _build_model(params)
