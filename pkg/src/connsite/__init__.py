"""Grothendieck topology of a finite connectivity space: covering sieves, axiom checks, sheaves."""

from .core import (
    ConnectivityStructure,
    GeneratorFamily,
    GroundSet,
    closure,
    from_graph,
    generate_structure,
    hasse_edges,
    induced_structure,
    irreducible_by_definition,
    irreducibles,
    is_integral,
    validate_structure,
)
from .errors import (
    ConnsiteError,
    DomainError,
    EnumerationCapError,
    InvalidStructureError,
    MalformedInputError,
    NotConnectedError,
)
from .interval import ChainWitness, RationalInterval, build_witness, verify_witness
from .sheaf import (
    MatchingFamily,
    Presheaf,
    amalgamations,
    constant_presheaf,
    is_sheaf,
    maps_presheaf,
    matching_families,
    terminal_presheaf,
    validate_presheaf,
)
from .site import (
    DEFAULT_CAP,
    AxiomReport,
    CoveringTable,
    Sieve,
    covering_sieves,
    covering_table,
    enumerate_sieves,
    is_covering,
    is_irreducible_via_J,
    is_sieve,
    maximal_sieve,
    restrict_sieve,
    verify_axioms,
)

__version__ = "0.1.0"
