"""
Orbit enumeration of fat graph cells.

Codimension 0 is reached by Whitehead moves from a seed spine (the move graph
of trivalent spines is connected); codimension c+1 by collapsing every
non-loop edge of the codimension-c records.  Records are deduplicated by
canonical form, labelled by the level-N marking when there is one.  Each BFS
layer is expanded by a worker pool and merged in sorted key order, so reruns
give identical databases.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from ..config import get_config
from ..errors import InputError, VerificationError
from ..fatgraph import (
    FatGraph,
    canonical_form,
    collapse_edge_with_map,
    expand_vertex,
    seed_spine,
    vertex_splits,
    whitehead_move,
)
from ..lattice import IntMatrix, mat_vec
from ..log import debug_log_event
from ..marking import HomologyMarking, apply_move, reduce_mod, sp_generators, sp_order, tautological_marking
from .records import CensusRecord, OrbitDatabase

logger = logging.getLogger(__name__)

Node = Tuple[FatGraph, Optional[HomologyMarking]]
Checkpoint = Callable[[OrbitDatabase, str], None]


class SeedInvalid(InputError):
    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"invalid census seed: {detail}")


def _labels(m: Optional[HomologyMarking]):
    return None if m is None else tuple(m.values)


def _form_key(G: FatGraph, m: Optional[HomologyMarking]):
    return canonical_form(G, _labels(m))


def _kind(G: FatGraph) -> Optional[str]:
    high = sorted(v for v in G.valences if v > 3)
    if high == [5]:
        return "pentagon"
    if high == [4, 4]:
        return "square"
    return None


def codim_of(G: FatGraph) -> int:
    return sum(v - 3 for v in G.valences)


def _record(node: Node) -> CensusRecord:
    G, m = node
    form = _form_key(G, m)
    codim = codim_of(G)
    return CensusRecord(
        key=form.key,
        codim=codim,
        aut_count=form.automorphisms,
        representative=G,
        labels=_labels(m),
        kind=_kind(G) if codim == 2 else None,
    )


def _moves(node: Node) -> List[Node]:
    G, m = node
    out = []
    for e in range(G.edge_count):
        if G.is_loop(e):
            continue
        mr = whitehead_move(G, e)
        out.append((mr.graph, None if m is None else apply_move(m, mr)))
    return out


def _collapses(node: Node) -> List[Node]:
    G, m = node
    out = []
    for e in range(G.edge_count):
        if G.is_loop(e):
            continue
        H, dart_map = collapse_edge_with_map(G, e)
        out.append((H, None if m is None else m.restrict(dart_map, H)))
    return out


def _expansions(node: Node) -> List[Node]:
    G, m = node
    out = []
    for v, valence in enumerate(G.valences):
        if valence < 4:
            continue
        for start, length in vertex_splits(G, v):
            H = expand_vertex(G, v, start, length)
            out.append((H, None if m is None else m.extend(H)))
    return out


def _keys(nodes: Iterable[Node]) -> List[Tuple[str, Node]]:
    return [(_form_key(G, m).key, (G, m)) for G, m in nodes]


def _node_of(record: CensusRecord, db: OrbitDatabase) -> Node:
    G = record.representative
    if record.labels is None:
        return G, None
    return G, HomologyMarking(graph=G, values=record.labels, dim=2 * db.g, form=db.form, modulus=db.modulus)


@dataclass
class _Progress:
    db: OrbitDatabase
    every: int
    checkpoint: Optional[Checkpoint]
    inserted: int = 0

    def add(self, record: CensusRecord) -> bool:
        if not self.db.insert(record):
            return False
        self.inserted += 1
        if self.checkpoint and self.inserted % self.every == 0:
            self.checkpoint(self.db, f"checkpoint records={len(self.db)}")
        return True


def _map(fn, items: Sequence, jobs: int) -> List:
    if jobs <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(fn, items))


def _enumerate(db: OrbitDatabase, seed: Node, max_codim: int, jobs: int,
               checkpoint: Optional[Checkpoint]) -> OrbitDatabase:
    config = get_config()
    progress = _Progress(db, config.checkpoint_every, checkpoint)

    # codimension 0: closure under moves
    progress.add(_record(seed))
    frontier = [_node_of(r, db) for r in db.by_codim(0)]
    while frontier:
        proposals = _map(lambda node: _keys(_moves(node)), frontier, jobs)
        fresh: Dict[str, Node] = {}
        for batch in proposals:
            for key, node in batch:
                if key not in db and key not in fresh:
                    fresh[key] = node
        frontier = []
        for key in sorted(fresh):
            if progress.add(_record(fresh[key])):
                frontier.append(fresh[key])
        logger.debug(f"codim 0 layer: {len(frontier)} new, {len(db)} total")

    # higher codimension: collapses, with face multiplicities
    for codim in range(1, max_codim + 1):
        parents = db.by_codim(codim - 1)
        proposals = _map(lambda r: _keys(_collapses(_node_of(r, db))), parents, jobs)
        fresh = {}
        for parent, batch in zip(parents, proposals):
            parent.faces = {}
            for key, node in batch:
                parent.faces[key] = parent.faces.get(key, 0) + 1
                if key not in db and key not in fresh:
                    fresh[key] = node
        for key in sorted(fresh):
            progress.add(_record(fresh[key]))
        if not db.by_codim(codim):
            break
        logger.info(f"codim {codim}: {len(db.by_codim(codim))} records")

    # cofaces through vertex splits
    for record in db:
        if record.codim == 0:
            continue
        record.cofaces = {}
        for key, _ in _keys(_expansions(_node_of(record, db))):
            if key not in db:
                raise VerificationError(f"expansion of {record.key} left the census")
            record.cofaces[key] = record.cofaces.get(key, 0) + 1

    db.max_codim = max_codim
    db.complete = True
    debug_log_event({"event": "census", **db.summary()})
    logger.info(f"✅ census g={db.g} {db.marking_type}: {db.counts()}")
    return db


def _check_seed(G: FatGraph, g: int) -> None:
    if not G.is_trivalent:
        raise SeedInvalid("seed graph is not trivalent")
    if not G.is_spine or G.genus != g:
        raise SeedInvalid(f"seed is not a genus-{g} spine (genus {G.genus}, {G.boundary_count} boundary cycles)")


def enumerate_unmarked(g: int, max_codim: int = 2, seed: Optional[FatGraph] = None, jobs: int = 1,
                       checkpoint: Optional[Checkpoint] = None,
                       db: Optional[OrbitDatabase] = None) -> OrbitDatabase:
    """Cells of the ribbon graph complex of a once-punctured genus-g surface up to max_codim."""
    if g < 1:
        raise SeedInvalid(f"genus must be at least 1, got {g}")
    max_codim = min(max_codim, 4 * g - 3)
    G = seed if seed is not None else seed_spine(g)
    _check_seed(G, g)
    if db is None:
        db = OrbitDatabase(g, "unmarked", max_codim=max_codim)
    return _enumerate(db, (G, None), max_codim, jobs, checkpoint)


def enumerate_levelN(g: int, N: int, max_codim: Optional[int] = None, seed: Optional[FatGraph] = None,
                     jobs: int = 1, checkpoint: Optional[Checkpoint] = None,
                     db: Optional[OrbitDatabase] = None) -> OrbitDatabase:
    """Cells of the level-N Torelli space: fat graphs with mod-N homology markings."""
    if g < 1:
        raise SeedInvalid(f"genus must be at least 1, got {g}")
    G = seed if seed is not None else seed_spine(g)
    _check_seed(G, g)
    marking = reduce_mod(tautological_marking(G), N)
    full = 4 * g - 3
    max_codim = full if max_codim is None else min(max_codim, full)
    if db is None:
        db = OrbitDatabase(g, f"levelN:{N}", modulus=N, max_codim=max_codim, form=marking.form)
    return _enumerate(db, (G, marking), max_codim, jobs, checkpoint)


# =============================================================================
# DECK ACTION
# =============================================================================

@dataclass
class SpClosureReport:
    checked: int = 0
    missing: List[Tuple[str, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.missing


def _act(M: IntMatrix, labels, N: int):
    return tuple(tuple(x % N for x in mat_vec(M, v)) for v in labels)


def sp_closure_check(db: OrbitDatabase) -> SpClosureReport:
    """Every generator of Sp(2g, Z/N) maps every record's marking to a record."""
    if db.modulus is None or db.form is None:
        raise InputError("deck action needs a level-N census")
    report = SpClosureReport()
    generators = sp_generators(db.form)
    for record in db:
        for i, M in enumerate(generators):
            moved = _act(M, record.labels, db.modulus)
            report.checked += 1
            if canonical_form(record.representative, moved).key not in db:
                report.missing.append((record.key, i))
    if report.missing:
        logger.warning(f"⚠️ {len(report.missing)} deck translates missing from the census")
    return report


def fiber_sizes(db: OrbitDatabase) -> Dict[str, int]:
    """Unmarked key -> number of level-N records above it."""
    out: Dict[str, int] = {}
    for record in db:
        key = canonical_form(record.representative).key
        out[key] = out.get(key, 0) + 1
    return dict(sorted(out.items()))


def fibers_divide_group_order(db: OrbitDatabase) -> bool:
    order = sp_order(db.g, db.modulus)
    return all(order % size == 0 for size in fiber_sizes(db).values())
