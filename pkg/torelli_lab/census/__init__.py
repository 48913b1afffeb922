"""Orbit census of fat graph cells, with the invariants read off it."""

from .enumerate import (
    SeedInvalid,
    SpClosureReport,
    codim_of,
    enumerate_levelN,
    enumerate_unmarked,
    fiber_sizes,
    fibers_divide_group_order,
    sp_closure_check,
)
from .euler import expected_euler, orbifold_euler
from .presentation import (
    IncompleteCensus,
    OpaqueGenerator,
    OpaqueKind,
    PresentationReport,
    Relation,
    RelationKind,
    extract_presentation,
    opaque_slots,
)
from .records import CODE_VERSION, CensusRecord, OrbitDatabase
from .search import TorelliWord, torelli_word_search

__all__ = [
    'CODE_VERSION', 'CensusRecord', 'OrbitDatabase',
    'SeedInvalid', 'SpClosureReport', 'codim_of', 'enumerate_levelN', 'enumerate_unmarked',
    'fiber_sizes', 'fibers_divide_group_order', 'sp_closure_check',
    'expected_euler', 'orbifold_euler',
    'IncompleteCensus', 'OpaqueGenerator', 'OpaqueKind', 'PresentationReport', 'Relation',
    'RelationKind', 'extract_presentation', 'opaque_slots',
    'TorelliWord', 'torelli_word_search',
]
