"""Validated enclosures of the Fréchet distance between PL grid surfaces."""

from .autocert import (
    NoViolationAtResolution,
    OrientationCert,
    RefinementRequired,
    SearchSchedule,
    Violation,
    certify_homeomorphism,
    enumerate_net,
    falsify_pseudoautomorphism,
    lemma4_constant,
    lipschitz_snap,
    recheck_violation,
    schedule_L,
)
from .curves import ClosedCurve, closed_curve_frechet
from .degree import (
    CellRegion,
    DegreeQuery,
    DegreeUndefined,
    PolygonRegion,
    degree,
    winding_number,
)
from .frechet import (
    BoundReport,
    ObjectivePair,
    boundary_lower_bound,
    frechet_distance,
    frechet_stream,
    hausdorff_images,
    lower_bound_enumerate,
    objective,
    upper_bound_search,
)
from .io import format_map, format_surface, parse_map, parse_surface
from .plmap import (
    GridMap,
    GridSurface,
    Modulus,
    eval_map,
    eval_surface,
    graph_distance,
    lipschitz_constant,
    modulus_of,
    radial_bound,
    radial_bound_proven,
    radial_extension,
    rotation_map,
)
from .scalar import Enclosure, Euclidean, MaxNorm, Table, UnsoundBounds, as_rat, distance

__version__ = "0.1.0"
