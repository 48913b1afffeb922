"""
Paths of Whitehead moves on a marked fat graph.

A MoveSequence is a start graph, a homology marking on it (optionally a pi_1
marking too) and a list of edge ids.  Moves never renumber darts, so edge ids
mean the same edge all along the path and the edge correspondence of the
whole path is the identity.
"""

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Any, List, Optional, Sequence, Tuple

from .errors import InputError
from .fatgraph import FatGraph, MoveResult, isomorphisms, whitehead_move
from .marking import HomologyMarking, InvalidRelabeling, apply_move

logger = logging.getLogger(__name__)


def transport_edges(G: FatGraph, H: FatGraph, psi: Sequence[int], steps: Sequence[int]) -> Tuple[int, ...]:
    """Edge ids of G read in H through the dart bijection psi."""
    return tuple(H.edge_of[psi[G.edges[e][0]]] for e in steps)


@dataclass(frozen=True)
class MoveSequence:
    start: FatGraph
    marking: HomologyMarking
    steps: Tuple[int, ...] = ()
    pi_marking: Optional[Any] = None

    def __post_init__(self):
        if self.marking.graph != self.start:
            raise InputError("marking does not live on the start graph")
        if self.pi_marking is not None and self.pi_marking.graph != self.start:
            raise InputError("pi_1 marking does not live on the start graph")

    def __len__(self) -> int:
        return len(self.steps)

    @cached_property
    def moves(self) -> Tuple[MoveResult, ...]:
        out = []
        graph = self.start
        for e in self.steps:
            mr = whitehead_move(graph, e)
            out.append(mr)
            graph = mr.graph
        return tuple(out)

    @cached_property
    def markings(self) -> Tuple[HomologyMarking, ...]:
        """Marking before each step, plus the final one."""
        out = [self.marking]
        for mr in self.moves:
            out.append(apply_move(out[-1], mr))
        return tuple(out)

    @cached_property
    def pi_markings(self) -> Tuple[Any, ...]:
        if self.pi_marking is None:
            raise InputError("sequence carries no pi_1 marking")
        from .nilpotent.markings import apply_move_pi
        out = [self.pi_marking]
        for mr in self.moves:
            out.append(apply_move_pi(out[-1], mr))
        return tuple(out)

    @property
    def graphs(self) -> List[FatGraph]:
        return [self.start] + [mr.graph for mr in self.moves]

    @property
    def final_graph(self) -> FatGraph:
        return self.moves[-1].graph if self.steps else self.start

    @property
    def final_marking(self) -> HomologyMarking:
        return self.markings[-1]

    @property
    def correspondence(self) -> Tuple[int, ...]:
        return tuple(range(self.start.edge_count))

    def then(self, other: "MoveSequence", psi: Optional[Sequence[int]] = None) -> "MoveSequence":
        """
        Concatenate; `other` is moved onto this path's endpoint through psi
        (found among marking-preserving isomorphisms when not given).
        """
        end, end_marking = self.final_graph, self.final_marking
        if psi is None:
            if other.start == end and other.marking.values == end_marking.values:
                psi = tuple(range(end.dart_count))
            else:
                psi = next(isomorphisms(other.start, end, other.marking.values, end_marking.values), None)
                if psi is None:
                    raise InvalidRelabeling("the second path does not start where the first one ends")
        steps = transport_edges(other.start, end, psi, other.steps)
        return replace(self, steps=self.steps + steps)

    def reversed(self) -> "MoveSequence":
        """Walk back from the endpoint (flipping an edge twice only reverses it)."""
        pi_end = self.pi_markings[-1] if self.pi_marking is not None else None
        return MoveSequence(self.final_graph, self.final_marking, tuple(reversed(self.steps)), pi_end)

    def closing_isomorphism(self) -> Optional[Tuple[int, ...]]:
        """Dart bijection final -> start carrying the final marking onto the start marking."""
        return next(isomorphisms(self.final_graph, self.start,
                                 self.final_marking.values, self.marking.values), None)

    @property
    def is_torelli(self) -> bool:
        return self.closing_isomorphism() is not None

    def conjugated_by(self, path: "MoveSequence") -> "MoveSequence":
        """path^-1 . self . path, a loop at the endpoint of `path` (which must start here)."""
        back = path.reversed()
        return back.then(self).then(path)

    def transported(self, psi: Sequence[int], graph: FatGraph, marking: HomologyMarking) -> "MoveSequence":
        return MoveSequence(graph, marking, transport_edges(self.start, graph, psi, self.steps))
