"""Multi-latin squares: each cell holds a multiset of ``k`` symbols from ``1..n``
and every symbol appears exactly ``k`` times in each row and column.

The submodules cover validation and basic constructions (:mod:`.core`),
rectangle completion and embedding (:mod:`.completion`), sub-square search and
the non-separable families (:mod:`.separability`), orthogonal-array and
semi-latin conversions (:mod:`.equivalence`), and canonical forms plus
main-class enumeration (:mod:`.classification`).
"""
from .classification import (
    CanonicalForm,
    CensusRow,
    ParatopyElement,
    apply_paratopy,
    are_paratopic,
    canonical_form,
    canonical_square,
    census,
    enumerate_main_classes,
)
from .completion import AvailabilityPool, Rectangle, complete_rectangle, embed_partial, select_sdr
from .core import (
    MultiLatinSquare,
    ValidationReport,
    Violation,
    ViolationKind,
    complement_simple,
    cyclic_latin,
    cyclic_simple,
    inflate,
    is_simple,
    join,
    remove,
    validate,
)
from .equivalence import (
    OrthogonalArray,
    SemiLatinSquare,
    SymbolCollapseMap,
    collapse_semi_latin,
    conjugate,
    conjugates,
    expand_to_semi_latin,
    from_orthogonal_array,
    to_orthogonal_array,
)
from .errors import *  # noqa: F401,F403
from .io import format_square, parse_mls
from .separability import (
    Quasigroup,
    SubSquareWitness,
    construct_Ln,
    construct_Uk,
    construct_Uks,
    find_sub_square,
    idempotent_quasigroup,
    is_erodable,
    is_fully_separable,
    is_separable,
)

__version__ = "0.1.0"
