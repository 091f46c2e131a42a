"""famlab: intersecting uniform set families and their transversal numbers."""

from famlab.constructors import (
    TransversalSet,
    build_degree3_family,
    build_mk,
    build_one_factorization,
    example_family,
    fano_plane,
)
from famlab.errors import BudgetExceeded, FamilyParseError, InvalidFamilyError
from famlab.family import (
    SetFamily,
    degrees,
    is_intersecting,
    pairwise_intersections,
    parse_fam,
    parse_json,
    read_family,
    validate,
    write_family,
)
from famlab.isomorphism import CanonicalForm, canonical_form, find_isomorphism, is_isomorphic
from famlab.solver import (
    TransversalResult,
    enumerate_covers_of_size,
    enumerate_min_transversals,
    exact_tau,
    greedy_cover,
    transversal_family,
)

__version__ = "0.1.0"
