"""
Generators and relations read off a census.

Codimension-1 records are Whitehead move generators; codimension-2 records
give the relations (pentagon: five moves around a 5-valent vertex; square:
two commuting moves on disjoint 4-valent vertices), and every generator is
an involution.  Generator types the census cannot produce (Johnson's
generators, symplectic generators, separating twists) are opaque slots to be
filled with user-supplied move scripts.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import InputError
from ..fatgraph import canonical_form, expand_vertex, vertex_splits
from ..marking import HomologyMarking, sp_generators, standard_form
from .records import OrbitDatabase

logger = logging.getLogger(__name__)


class IncompleteCensus(InputError):
    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"census is incomplete: {detail}")


class RelationKind(str, Enum):
    INVOLUTIVITY = "involutivity"
    COMMUTATIVITY = "commutativity"
    PENTAGON = "pentagon"


class OpaqueKind(str, Enum):
    JOHNSON = "johnson"
    SYMPLECTIC = "symplectic"
    SEPARATING_TWIST = "separating_twist"


@dataclass
class OpaqueGenerator:
    """Placeholder for a generator given as a move script by the user."""
    kind: OpaqueKind
    index: int
    label: str
    script: Optional[str] = None

    @property
    def filled(self) -> bool:
        return self.script is not None


@dataclass
class Relation:
    kind: RelationKind
    source: str
    generators: Tuple[str, ...]
    loci: Tuple[Tuple[str, ...], ...] = ()

    def as_dict(self) -> Dict[str, object]:
        return {"kind": self.kind.value, "source": self.source,
                "generators": list(self.generators), "loci": [list(x) for x in self.loci]}


@dataclass
class PresentationReport:
    generators: List[str] = field(default_factory=list)
    relations: List[Relation] = field(default_factory=list)
    opaque: List[OpaqueGenerator] = field(default_factory=list)

    def counts(self) -> Dict[str, int]:
        out = {"generators": len(self.generators), "opaque": len(self.opaque)}
        for kind in RelationKind:
            out[kind.value] = sum(r.kind == kind for r in self.relations)
        return out

    def as_dict(self) -> Dict[str, object]:
        return {
            "counts": self.counts(),
            "generators": self.generators,
            "relations": [r.as_dict() for r in self.relations],
            "opaque": [{"kind": o.kind.value, "index": o.index, "label": o.label, "filled": o.filled}
                       for o in self.opaque],
        }


def _loci(db: OrbitDatabase, record) -> Tuple[Tuple[str, ...], ...]:
    """Coface keys grouped by the 4-valent vertex that was split."""
    G = record.representative
    out = []
    for v, valence in enumerate(G.valences):
        if valence != 4:
            continue
        keys = []
        for start, length in vertex_splits(G, v):
            H = expand_vertex(G, v, start, length)
            labels = None
            if record.labels is not None:
                m = HomologyMarking(graph=G, values=record.labels, dim=2 * db.g,
                                    form=db.form, modulus=db.modulus)
                labels = m.extend(H).values
            keys.append(canonical_form(H, labels).key)
        out.append(tuple(sorted(keys)))
    return tuple(out)


def opaque_slots(g: int) -> List[OpaqueGenerator]:
    slots = [OpaqueGenerator(OpaqueKind.JOHNSON, 0, "Johnson generators")]
    for i, _ in enumerate(sp_generators(standard_form(g))):
        slots.append(OpaqueGenerator(OpaqueKind.SYMPLECTIC, i, f"Sp generator {i}"))
    for i in range(g // 2):
        slots.append(OpaqueGenerator(OpaqueKind.SEPARATING_TWIST, i,
                                     f"twist on a separating curve of genus {i + 1}"))
    return slots


def extract_presentation(db: OrbitDatabase,
                         extra: Sequence[Tuple[str, int, str]] = ()) -> PresentationReport:
    """
    Generators and relations of the census.  `extra` fills opaque slots with
    (kind, index, move script) triples.
    """
    if not len(db):
        raise IncompleteCensus("no records")
    if not db.complete or db.max_codim < min(2, db.full_codim):
        raise IncompleteCensus(f"needs codimension 2, census reaches {db.max_codim}")

    report = PresentationReport()
    report.generators = [r.key for r in db.by_codim(1)]
    for key in report.generators:
        report.relations.append(Relation(RelationKind.INVOLUTIVITY, key, (key,)))

    generators = set(report.generators)
    for record in db.by_codim(2):
        cofaces = tuple(record.neighbours[:sum(record.cofaces.values())])
        if any(k not in generators for k in cofaces):
            raise IncompleteCensus(f"record {record.key} references unknown generators")
        if record.kind == "pentagon":
            report.relations.append(Relation(RelationKind.PENTAGON, record.key, cofaces))
        elif record.kind == "square":
            report.relations.append(Relation(RelationKind.COMMUTATIVITY, record.key, cofaces,
                                             _loci(db, record)))

    report.opaque = opaque_slots(db.g)
    by_slot = {(o.kind.value, o.index): o for o in report.opaque}
    for kind, index, script in extra:
        slot = by_slot.get((kind, index))
        if slot is None:
            raise InputError(f"no opaque generator slot {kind}:{index}")
        slot.script = script
    logger.info(f"presentation: {report.counts()}")
    return report
