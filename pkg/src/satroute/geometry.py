"""Closed-form hop lengths and numeric scans of inter-plane hop extrema.

Intra-plane links are chords of a regular polygon inscribed in the orbit
circle, so their length is constant.  For zero phase offset the same argument
applies per latitude circle to inter-plane links.  For non-zero offsets no
closed form is known; `scan_horizontal_extrema` locates the extrema
numerically and reports how far they are from the conjectured phase angles
(hop longest when the two phase angles straddle the Equator, shortest when
they straddle the point of maximal latitude).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .walker import TWO_PI, ConstellationParams, _normalize_array

_SCAN_CHUNK = 200_000


def intra_plane_hop_length(params: ConstellationParams) -> float:
    """Length of any intra-plane hop: 2 r sin(pi / Q), position-independent."""
    return 2.0 * params.orbit_radius_km * math.sin(math.pi / params.sats_per_plane)


def inter_plane_hop_length_zero_offset(params: ConstellationParams, latitude: float) -> float:
    """Length of an inter-plane hop at a given latitude, for F = 0 only.

    Horizontal neighbours then share their latitude circle of radius
    r cos(latitude), giving 2 r cos(latitude) sin(pi / P); the length shrinks
    towards the poles.  Refused for F != 0, where no closed form is proven.
    """
    if params.phasing_factor != 0:
        raise ValueError("closed-form inter-plane hop length requires phasing factor 0")
    if abs(latitude) > params.inclination_rad + 1e-12:
        raise ValueError("satellite latitude cannot exceed the inclination")
    return (
        2.0
        * params.orbit_radius_km
        * math.cos(latitude)
        * math.sin(math.pi / params.planes)
    )


@dataclass(frozen=True)
class HopExtremum:
    kind: str  # "max" | "min"
    u1: float
    u2: float
    distance_km: float


@dataclass(frozen=True)
class ExtremaScan:
    maximum: HopExtremum
    minimum: HopExtremum
    max_deviation_rad: float
    min_deviation_rad: float
    grid_step_rad: float
    resolution: int


def _pair_distances(params: ConstellationParams, u: np.ndarray) -> np.ndarray:
    """Chord lengths between horizontal neighbours at phase angles (u, u + df)."""
    alpha = params.inclination_rad
    r = params.orbit_radius_km

    def ecef(uu: np.ndarray, l0: float) -> np.ndarray:
        lat = np.arcsin(np.sin(alpha) * np.sin(uu))
        lon = _normalize_array(l0 + np.arctan2(np.cos(alpha) * np.sin(uu), np.cos(uu)))
        return np.stack(
            [r * np.cos(lat) * np.cos(lon), r * np.cos(lat) * np.sin(lon), r * np.sin(lat)],
            axis=1,
        )

    diff = ecef(u, 0.0) - ecef(u + params.phase_offset, params.delta_raan)
    return np.sqrt((diff * diff).sum(axis=1))


def _mod_pi_deviation(angle: float, target: float) -> float:
    """Absolute circular distance of angle from target, modulo pi."""
    return abs((angle - target + math.pi / 2) % math.pi - math.pi / 2)


def scan_horizontal_extrema(
    params: ConstellationParams, grid_resolution: int = 1_000_000
) -> ExtremaScan:
    """Sweep a continuous phase angle to locate the inter-plane hop extrema.

    The phase angle is treated as continuous rather than snapped to actual
    satellite slots, since the extrema are a property of the geometry.
    Deviations are measured modulo pi because each conjectured location has an
    antipodal twin.
    """
    if grid_resolution < 10_000:
        raise ValueError("grid_resolution must be at least 10000")
    step = TWO_PI / grid_resolution
    best_max = (-math.inf, 0.0)
    best_min = (math.inf, 0.0)
    for start in range(0, grid_resolution, _SCAN_CHUNK):
        count = min(_SCAN_CHUNK, grid_resolution - start)
        u = -math.pi + step * (start + np.arange(count))
        dist = _pair_distances(params, u)
        k = int(np.argmax(dist))
        if dist[k] > best_max[0]:
            best_max = (float(dist[k]), float(u[k]))
        k = int(np.argmin(dist))
        if dist[k] < best_min[0]:
            best_min = (float(dist[k]), float(u[k]))

    df = params.phase_offset
    maximum = HopExtremum("max", best_max[1], best_max[1] + df, best_max[0])
    minimum = HopExtremum("min", best_min[1], best_min[1] + df, best_min[0])
    return ExtremaScan(
        maximum=maximum,
        minimum=minimum,
        max_deviation_rad=_mod_pi_deviation(maximum.u1, -df / 2.0),
        min_deviation_rad=_mod_pi_deviation(minimum.u1, math.pi / 2.0 - df / 2.0),
        grid_step_rad=step,
        resolution=grid_resolution,
    )
