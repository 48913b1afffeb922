"""
Search for closed Whitehead move sequences that fix a homology marking.

BFS over homology-marked trivalent graphs from the tautologically marked
seed, nodes identified by marked canonical form.  Every non-tree edge of the
BFS closes a loop: down the tree to u, across the edge, back up from v.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..errors import InputError
from ..fatgraph import FatGraph, canonical_form, seed_spine, whitehead_move
from ..marking import HomologyMarking, apply_move, tautological_marking
from ..sequence import MoveSequence
from .records import OrbitDatabase

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TorelliWord:
    sequence: MoveSequence
    closing: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.sequence)


@dataclass
class _Node:
    graph: FatGraph
    marking: HomologyMarking
    path: MoveSequence
    depth: int


def torelli_word_search(db: Optional[OrbitDatabase], length_bound: int,
                        start: Optional[Tuple[FatGraph, HomologyMarking]] = None,
                        with_pi: bool = False) -> List[TorelliWord]:
    """
    Closed marking-preserving sequences of length <= length_bound, shortest
    first.  The empty sequence is always the first entry.
    """
    if length_bound < 0:
        raise InputError(f"length bound must be nonnegative, got {length_bound}")
    if start is None:
        if db is None:
            raise InputError("need a census or a start graph")
        G = seed_spine(db.g)
        m = tautological_marking(G)
    else:
        G, m = start
    pi = None
    if with_pi:
        from ..nilpotent.markings import tautological_pi_marking
        pi = tautological_pi_marking(G)

    root = MoveSequence(G, m, (), pi)
    ids: Dict[str, int] = {canonical_form(G, m.values).key: 0}
    nodes: List[_Node] = [_Node(G, m, root, 0)]
    found: List[TorelliWord] = [TorelliWord(root, tuple(range(G.dart_count)))]
    seen_steps = {()}

    i = 0
    while i < len(nodes):
        node = nodes[i]
        i += 1
        if node.depth + 1 > length_bound:
            continue
        for e in range(node.graph.edge_count):
            if node.graph.is_loop(e):
                continue
            mr = whitehead_move(node.graph, e)
            marking = apply_move(node.marking, mr)
            key = canonical_form(mr.graph, marking.values).key
            step = MoveSequence(node.graph, node.marking, (e,))
            if key not in ids:
                ids[key] = len(nodes)
                nodes.append(_Node(mr.graph, marking, node.path.then(step), node.depth + 1))
                continue
            j = ids[key]
            if j < i - 1:
                continue
            other = nodes[j]
            if node.depth + 1 + other.depth > length_bound:
                continue
            loop = node.path.then(step).then(other.path.reversed())
            if loop.steps in seen_steps:
                continue
            closing = loop.closing_isomorphism()
            if closing is None:
                continue
            seen_steps.add(loop.steps)
            found.append(TorelliWord(loop, closing))

    found.sort(key=lambda w: (len(w), w.sequence.steps))
    logger.info(f"torelli word search: {len(found)} closed sequences up to length {length_bound}")
    return found
