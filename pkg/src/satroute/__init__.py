"""Walker Delta constellation modelling and minimum-hop ISL routing."""

from .backend import backend_name
from .exact import Route, dag_longest, dag_shortest, dijkstra, dijkstra_hops, validate_route
from .errors import InvariantError, SpecParseError
from .geometry import (
    intra_plane_hop_length,
    inter_plane_hop_length_zero_offset,
    scan_horizontal_extrema,
)
from .grid import RectangleGrid, build_rectangle
from .heuristic import coin_flip_route, disco_route, routing_case
from .hopcount import (
    HopCountResult,
    bfs_hop_oracle,
    commercial_round,
    min_hop_count,
    min_hop_count_restricted,
)
from .walker import (
    EARTH_RADIUS_KM,
    ConstellationParams,
    EcefCoord,
    GeodeticCoord,
    OrbitalState,
    SatId,
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

__version__ = "0.1.0"

__all__ = [
    "EARTH_RADIUS_KM",
    "ConstellationParams",
    "EcefCoord",
    "GeodeticCoord",
    "HopCountResult",
    "InvariantError",
    "OrbitalState",
    "RectangleGrid",
    "Route",
    "SatId",
    "SpecParseError",
    "backend_name",
    "bfs_hop_oracle",
    "build_rectangle",
    "coin_flip_route",
    "commercial_round",
    "compile_model",
    "dag_longest",
    "dag_shortest",
    "dijkstra",
    "dijkstra_hops",
    "disco_route",
    "inter_plane_hop_length_zero_offset",
    "intra_plane_hop_length",
    "isl_distance",
    "min_hop_count",
    "min_hop_count_restricted",
    "neighbors",
    "normalize",
    "orbital_state",
    "parse_spec",
    "routing_case",
    "satellite_ecef",
    "scan_horizontal_extrema",
    "to_ecef",
    "to_geodetic",
    "validate_route",
]
