"""Exact combinatorics of building bordifications on finite windows."""

from .affine import AffineChart
from .boundary import (
    AffinePoint,
    InteriorPoint,
    Sector,
    SequencePoint,
    WindowLimit,
    affine_census,
    common_subsector,
    converges,
    horofunction,
    horofunction_sequence,
    residual_projection,
    sector,
    sector_limit,
    xi_value,
)
from .building_points import (
    BuildingInterior,
    BuildingSequence,
    ProductPoint,
    TreeEnd,
    building_common_subsector,
    building_converges,
    building_sector,
    building_sector_limit,
)
from .buildings import (
    ApartmentChart,
    BResidue,
    FanoBuilding,
    ProductBuilding,
    ThinBuilding,
    TreeBuilding,
    make_fano,
    make_product,
    make_thin,
    make_tree,
)
from .coxeter import INF, CoxeterMatrix, CoxeterSystem, Reflection, Root, named, reduce_word
from .cubes import (
    CubeGraph,
    Directional,
    Explicit,
    GridGraph,
    PointsGraph,
    Principal,
    TreeGraph,
    consistent_orientations,
    cube_filtering,
    cube_horofunction,
    cube_sector,
    cube_sector_limit,
    validate_ultrafilter,
)
from .errors import BordifyError, ConsistencyError, MalformedInput, ResourceLimit, Undecided, WindowEscape
from .residues import CoxeterComplex, Residue, Window

__version__ = "0.1.0"

__all__ = [
    "AffineChart",
    "AffinePoint",
    "ApartmentChart",
    "BResidue",
    "BordifyError",
    "BuildingInterior",
    "BuildingSequence",
    "ConsistencyError",
    "CoxeterComplex",
    "CoxeterMatrix",
    "CoxeterSystem",
    "CubeGraph",
    "Directional",
    "Explicit",
    "FanoBuilding",
    "GridGraph",
    "INF",
    "InteriorPoint",
    "MalformedInput",
    "PointsGraph",
    "Principal",
    "ProductBuilding",
    "ProductPoint",
    "Reflection",
    "Residue",
    "ResourceLimit",
    "Root",
    "Sector",
    "SequencePoint",
    "ThinBuilding",
    "TreeBuilding",
    "TreeEnd",
    "TreeGraph",
    "Undecided",
    "Window",
    "WindowEscape",
    "WindowLimit",
    "affine_census",
    "building_common_subsector",
    "building_converges",
    "building_sector",
    "building_sector_limit",
    "common_subsector",
    "consistent_orientations",
    "converges",
    "cube_filtering",
    "cube_horofunction",
    "cube_sector",
    "cube_sector_limit",
    "horofunction",
    "horofunction_sequence",
    "make_fano",
    "make_product",
    "make_thin",
    "make_tree",
    "named",
    "reduce_word",
    "residual_projection",
    "sector",
    "sector_limit",
    "validate_ultrafilter",
    "xi_value",
]
