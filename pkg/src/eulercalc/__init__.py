"""Exact Euler calculus on finite simplicial and cubical complexes."""

from .bundles import (
    BundleSpec,
    RamificationData,
    bundle_chi_via_inclusion_exclusion,
    check_local_triviality_chi,
    mapping_torus,
    riemann_hurwitz,
)
from .complex import (
    CellComplexSummary,
    CellSet,
    SimplicialComplex,
    SimplicialMap,
    barycentric_subdivide,
    build_complex,
    chi_cellset,
    preimage_cellset,
    product_cellset,
)
from .constructible import (
    ConstructibleFunction,
    cf_add,
    cf_indicator,
    euler_integral,
    euler_integral_levelsets,
    integrate_over_cover,
    pushforward,
)
from .errors import EulerCalcError, FormatError, HypothesisError, LocalTrivialityError
from .homology import betti_numbers, chi_homology
from .raster import (
    Raster,
    ShapeSpec,
    chi_upper_set,
    enumerate_targets,
    euler_integral_raster,
    rasterize_shapes,
)

__version__ = "0.1.0"

__all__ = [
    "EulerCalcError",
    "FormatError",
    "HypothesisError",
    "LocalTrivialityError",
    "betti_numbers",
    "chi_homology",
    "BundleSpec",
    "CellComplexSummary",
    "CellSet",
    "ConstructibleFunction",
    "RamificationData",
    "Raster",
    "ShapeSpec",
    "SimplicialComplex",
    "SimplicialMap",
    "barycentric_subdivide",
    "build_complex",
    "bundle_chi_via_inclusion_exclusion",
    "cf_add",
    "cf_indicator",
    "check_local_triviality_chi",
    "chi_cellset",
    "chi_upper_set",
    "enumerate_targets",
    "euler_integral",
    "euler_integral_levelsets",
    "euler_integral_raster",
    "integrate_over_cover",
    "mapping_torus",
    "preimage_cellset",
    "product_cellset",
    "pushforward",
    "rasterize_shapes",
    "riemann_hurwitz",
]
