"""Jones polynomials of open and closed curves, with periodic boundaries.

The package computes Kauffman-bracket state sums over crossing diagrams,
averages them over projection directions for open curves, and extends
both to systems under periodic boundary conditions: cell and periodic
polynomials, component normalization, periodic self-linking, and a
verification harness for the periodic cutoff factorization.
"""

from .errors import (
    AmbiguousMatchError,
    ChainConnectivityError,
    NonGenericDirectionError,
    PbcJonesError,
    StateSumTooLargeError,
)
from .laurent import (
    EXACT,
    FLOAT,
    DivisionResult,
    LaurentPoly,
    d_poly,
    d_power,
    divide_by_d_power,
)
from .diagram import Component, Diagram, terminal_graph
from .bracket import BracketResult, bracket, jones_of_diagram
from .geometry import Curve, is_generic, project, sample_directions
from .jones3d import JonesResult, SamplingConfig, jones, jones_single_direction
from .pbc import (
    Cell,
    GeneratingChain,
    MinimalPeriodicLink,
    PBCSystem,
    cell_curves,
    cell_jones,
    link_curves,
    minimal_collective_unfolding,
    minimal_periodic_link,
    minimal_unfolding,
    normalized,
    periodic_jones,
    rebuild_link,
    search_basepoint,
    slk_p,
    unfold_image,
    with_basepoint,
)
from .cutoff import CutoffReport, build_cutoff, verify_cutoff_factorization

__version__ = "0.1.0"

__all__ = [
    "AmbiguousMatchError",
    "BracketResult",
    "Cell",
    "ChainConnectivityError",
    "Component",
    "CutoffReport",
    "Curve",
    "Diagram",
    "DivisionResult",
    "EXACT",
    "FLOAT",
    "GeneratingChain",
    "JonesResult",
    "LaurentPoly",
    "MinimalPeriodicLink",
    "NonGenericDirectionError",
    "PBCSystem",
    "PbcJonesError",
    "SamplingConfig",
    "StateSumTooLargeError",
    "bracket",
    "build_cutoff",
    "cell_curves",
    "cell_jones",
    "d_poly",
    "d_power",
    "divide_by_d_power",
    "is_generic",
    "jones",
    "jones_of_diagram",
    "jones_single_direction",
    "link_curves",
    "minimal_collective_unfolding",
    "minimal_periodic_link",
    "minimal_unfolding",
    "normalized",
    "periodic_jones",
    "project",
    "rebuild_link",
    "sample_directions",
    "search_basepoint",
    "slk_p",
    "terminal_graph",
    "unfold_image",
    "verify_cutoff_factorization",
    "with_basepoint",
    "__version__",
]
