"""
================================================================================
torelli-lab - The move cocycle j and its cup powers
================================================================================
j assigns a^b^c in Lambda^3 H to the Whitehead move on a marked trivalent
graph, where (x,a,b) and (y,c,d) are the rotations at the two ends of the
flipped edge.  Around every codimension-2 cell the values sum to zero.

2-cells are polygons of marked trivalent graphs.  Edge i of a cell runs from
corner i to corner i+1 and carries j of that move.  Cup squares are
evaluated on the fan triangulation from a chosen apex p:

    j^2 = sum_{i=1}^{n-2} u_{p+i} ^ (u_p + ... + u_{p+i-1})

which is the Alexander-Whitney rule j(later edge) ^ j(earlier edge) on every
triangle (p, p+i, p+i+1).

USAGE:
    w = j_move(G, m, e)
    cell = degenerate(G, m, e, f)
    verify_cocycle(cell).ok
    cup_square_on_cell(cell, apex=0)
================================================================================
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InputError, VerificationError
from .exterior import (
    MultiWedge,
    PairingGraph,
    Wedge3,
    contract_graph,
    wedge3,
)
from .fatgraph import (
    CellKind,
    CodimTwoLink,
    FatGraph,
    automorphisms,
    build,
    canonical_form,
    codim2_degenerations,
    collapse_pair,
    link_of_codim2,
    whitehead_move,
)
from .lattice import IntMatrix
from .log import debug_log_event
from .marking import (
    HomologyMarking,
    InvalidRelabeling,
    apply_move,
    complete_marking,
    induced_basis_change,
)
from .sequence import MoveSequence, transport_edges

logger = logging.getLogger(__name__)


# =============================================================================
# ERRORS
# =============================================================================

class OpenBoundary(VerificationError):
    """Raised when the markings around a 2-cell do not close up."""
    def __init__(self, kind: str):
        super().__init__(f"{kind} cell boundary does not return to its starting marking")


class UnlabeledEdge(InputError):
    def __init__(self, u: int, v: int):
        self.edge = (u, v)
        super().__init__(f"chain edge ({u},{v}) carries no value")


# =============================================================================
# j ON MOVES AND PATHS
# =============================================================================

def j_move(G: FatGraph, m: HomologyMarking, e: int) -> Wedge3:
    """m(a)^m(b)^m(c) for the move on e."""
    t = whitehead_move(G, e).darts
    return wedge3(m.values[t.a], m.values[t.b], m.values[t.c])


def j_path(s: MoveSequence) -> Wedge3:
    """Sum of j over the steps, each on the marking current at that step."""
    total = Wedge3.zero(s.marking.dim)
    for mr, m in zip(s.moves, s.markings):
        t = mr.darts
        total = total + wedge3(m.values[t.a], m.values[t.b], m.values[t.c])
    return total


def equivariance_check(s: MoveSequence, psi: Sequence[int], M: IntMatrix,
                       target_graph: Optional[FatGraph] = None,
                       target_marking: Optional[HomologyMarking] = None) -> bool:
    """
    psi: start graph -> target graph (itself by default) with
    target_marking(psi d) = M start_marking(d).  True iff the relabelled path
    has j equal to M applied to j of the original.
    """
    H = target_graph or s.start
    mH = target_marking or (s.marking if target_graph is None else None)
    if mH is None:
        raise InputError("target graph given without a target marking")
    if len(psi) != s.start.dart_count or sorted(psi) != list(range(H.dart_count)):
        raise InvalidRelabeling("psi is not a dart bijection")
    G = s.start
    for d in range(G.dart_count):
        if H.sigma[psi[d]] != psi[G.sigma[d]] or H.iota[psi[d]] != psi[G.iota[d]]:
            raise InvalidRelabeling(f"psi does not commute with the graph structure at dart {d}")
    if any(tuple(mH.values[psi[d]]) != tuple(_apply(M, s.marking.values[d])) for d in range(G.dart_count)):
        raise InvalidRelabeling("basis change is not induced by psi")
    relabelled = s.transported(psi, H, mH)
    return j_path(relabelled) == j_path(s).transform(M)


def _apply(M: IntMatrix, v: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sum(M[i][j] * v[j] for j in range(len(v))) for i in range(len(M)))


# =============================================================================
# 2-CELLS
# =============================================================================

@dataclass(frozen=True)
class TwoCell:
    """Closed polygon of moves; edge_values[i] is j of the move from corner i to corner i+1."""
    kind: CellKind
    edge_values: Tuple[Wedge3, ...]
    link: Optional[CodimTwoLink] = None
    markings: Tuple[HomologyMarking, ...] = ()
    form: Optional[IntMatrix] = None

    def __len__(self) -> int:
        return len(self.edge_values)

    @property
    def dim(self) -> int:
        return self.edge_values[0].dim

    def reversed(self) -> "TwoCell":
        return TwoCell(
            kind=self.kind,
            edge_values=tuple(-w for w in reversed(self.edge_values)),
            link=None,
            markings=(),
            form=self.form,
        )

    def path_value(self, start: int, length: int) -> Wedge3:
        """j along the boundary from corner `start`, `length` edges forward."""
        n = len(self)
        total = Wedge3.zero(self.dim)
        for i in range(length):
            total = total + self.edge_values[(start + i) % n]
        return total


def two_cell(G4: FatGraph, m4: HomologyMarking, require_full_rank: bool = True) -> TwoCell:
    """The 2-cell dual to a marked codimension-2 graph."""
    m4.validate(require_full_rank=require_full_rank)
    link = link_of_codim2(G4)
    first = link.steps[0][0]
    current = m4.extend(first)
    markings = []
    values = []
    for graph, edge in link.steps:
        mr = whitehead_move(graph, edge)
        t = mr.darts
        markings.append(current)
        values.append(wedge3(current.values[t.a], current.values[t.b], current.values[t.c]))
        current = apply_move(current, mr)
    closed = current.relabel(link.closing, first)
    if closed.values != markings[0].values:
        raise OpenBoundary(link.kind.value)
    return TwoCell(kind=link.kind, edge_values=tuple(values), link=link,
                   markings=tuple(markings), form=m4.form)


def degenerate(G: FatGraph, m: HomologyMarking, e: int, f: int) -> TwoCell:
    """Collapse e then f of a marked trivalent graph and take the resulting cell."""
    G4, dart_map = collapse_pair(G, e, f)
    return two_cell(G4, m.restrict(dart_map, G4))


def pentagon_star(a: Sequence[int], b: Sequence[int], c: Sequence[int], d: Sequence[int],
                  e: Optional[Sequence[int]] = None, form: Optional[IntMatrix] = None) -> TwoCell:
    """
    Pentagon over free vectors: a 5-valent vertex with darts 0..4 valued
    a..e (e = -(a+b+c+d) by default) and five leaf arms.
    """
    if e is None:
        e = [-(p + q + r + s) for p, q, r, s in zip(a, b, c, d)]
    sigma = [1, 2, 3, 4, 0] + [5, 6, 7, 8, 9]
    iota = [5, 6, 7, 8, 9, 0, 1, 2, 3, 4]
    G4 = build(sigma, iota)
    known = dict(enumerate([tuple(a), tuple(b), tuple(c), tuple(d), tuple(e)]))
    m4 = complete_marking(G4, known, len(a), form=form)
    return two_cell(G4, m4, require_full_rank=False)


def square_star(a: Sequence[int], b: Sequence[int], c: Sequence[int], d: Sequence[int],
                e: Sequence[int], form: Optional[IntMatrix] = None) -> TwoCell:
    """
    Square over free vectors: two 4-valent vertices joined by one edge.  The
    first carries a, b, c and the joining dart, the second d, e, the joining
    dart and the remainder.
    """
    sigma = [1, 2, 3, 0, 5, 6, 7, 4] + list(range(8, 14))
    iota = [8, 9, 10, 7, 11, 12, 13, 3, 0, 1, 2, 4, 5, 6]
    G4 = build(sigma, iota)
    known = {0: tuple(a), 1: tuple(b), 2: tuple(c), 4: tuple(d), 5: tuple(e)}
    m4 = complete_marking(G4, known, len(a), form=form)
    return two_cell(G4, m4, require_full_rank=False)


@dataclass(frozen=True)
class CocycleCheck:
    ok: bool
    residual: Wedge3


def verify_cocycle(c: TwoCell) -> CocycleCheck:
    residual = sum(c.edge_values, Wedge3.zero(c.dim))
    return CocycleCheck(ok=residual.is_zero(), residual=residual)


# =============================================================================
# CUP PRODUCTS
# =============================================================================

def cup_square_on_cell(c: TwoCell, apex: int = 0) -> MultiWedge:
    n = len(c)
    if not 0 <= apex < n:
        raise InputError(f"apex {apex} outside a {n}-gon")
    total = MultiWedge.zero(c.dim, 2)
    for i in range(1, n - 1):
        later = MultiWedge.from_wedge3(c.edge_values[(apex + i) % n])
        earlier = MultiWedge.from_wedge3(c.path_value(apex, i))
        total = total + (later ^ earlier)
    return total


Simplex = Tuple[int, ...]


@dataclass(frozen=True)
class SimplicialChain:
    """Signed ordered simplices plus j values on their oriented edges."""
    simplices: Tuple[Tuple[int, Simplex], ...]
    edge_values: Dict[Tuple[int, int], Wedge3] = field(hash=False, compare=False, default_factory=dict)

    def value(self, u: int, v: int) -> Wedge3:
        if (u, v) in self.edge_values:
            return self.edge_values[(u, v)]
        if (v, u) in self.edge_values:
            return -self.edge_values[(v, u)]
        raise UnlabeledEdge(u, v)


def cup_power_on_chain(chain: SimplicialChain, dim: int) -> MultiWedge:
    """
    Alexander-Whitney value of the m-fold cup power of j on a chain of
    m-simplices: j(v_{m-1},v_m) ^ ... ^ j(v_0,v_1) on each simplex.
    """
    if not chain.simplices:
        return MultiWedge.zero(dim, 0)
    grade = len(chain.simplices[0][1]) - 1
    total = MultiWedge.zero(dim, grade)
    for sign, simplex in chain.simplices:
        if len(simplex) - 1 != grade:
            raise InputError("chain mixes simplices of different dimensions")
        acc = MultiWedge.one(dim)
        for i in range(grade - 1, -1, -1):
            acc = acc ^ MultiWedge.from_wedge3(chain.value(simplex[i], simplex[i + 1]))
        total = total + sign * acc
    return total


def fan_chain(c: TwoCell, apex: int = 0) -> SimplicialChain:
    """Fan triangulation of a cell from `apex` as a simplicial chain."""
    n = len(c)
    values: Dict[Tuple[int, int], Wedge3] = {}
    simplices = []
    for i in range(1, n - 1):
        p, q, r = apex, (apex + i) % n, (apex + i + 1) % n
        values[(p, q)] = c.path_value(apex, i)
        values[(q, r)] = c.edge_values[q]
        values[(p, r)] = c.path_value(apex, i + 1)
        simplices.append((1, (p, q, r)))
    return SimplicialChain(tuple(simplices), values)


def contraction_cocycle(c: TwoCell, graph: PairingGraph, omega: Optional[IntMatrix] = None,
                        apex: int = 0) -> int:
    form = omega or c.form
    if form is None:
        raise InputError("no intersection form for the contraction")
    return contract_graph(graph, cup_square_on_cell(c, apex), form)


# =============================================================================
# LOCAL SWEEP
# =============================================================================

@dataclass
class CellReport:
    visited: int = 0
    cells: int = 0
    pentagons: int = 0
    squares: int = 0
    automorphisms_checked: int = 0
    residuals: List[Tuple[str, Tuple[int, int], str]] = field(default_factory=list)
    apex_failures: List[Tuple[str, Tuple[int, int]]] = field(default_factory=list)
    equivariance_failures: List[Tuple[str, int]] = field(default_factory=list)
    cell_ids: List[Tuple[str, Tuple[int, int]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.residuals or self.apex_failures or self.equivariance_failures)

    def as_dict(self) -> dict:
        return {
            "visited": self.visited,
            "cells": self.cells,
            "pentagons": self.pentagons,
            "squares": self.squares,
            "automorphisms_checked": self.automorphisms_checked,
            "residuals": [[k, list(ef), r] for k, ef, r in self.residuals],
            "apex_failures": [[k, list(ef)] for k, ef in self.apex_failures],
            "equivariance_failures": [[k, e] for k, e in self.equivariance_failures],
            "ok": self.ok,
        }


def _check_automorphisms(G: FatGraph, m: HomologyMarking, key: str, report: CellReport) -> None:
    for psi in automorphisms(G):
        try:
            M = induced_basis_change(m, m, psi)
        except InvalidRelabeling:
            continue
        report.automorphisms_checked += 1
        for e in range(G.edge_count):
            if G.is_loop(e):
                continue
            image = transport_edges(G, G, psi, (e,))[0]
            if j_move(G, m, image) != j_move(G, m, e).transform(M):
                report.equivariance_failures.append((key, e))


def verify_cells(G: FatGraph, m: HomologyMarking, radius: int = 6, dedupe: str = "graph",
                 list_cells: bool = False) -> CellReport:
    """
    Breadth-first sweep over marked trivalent graphs within `radius` moves.
    Every codimension-2 degeneration of every visited graph is checked for a
    vanishing j-sum, apex independence of the cup square and equivariance
    under the graph's automorphisms.  dedupe="graph" visits one marking per
    unmarked graph; "marked" keeps every marked class.
    """
    if dedupe not in ("graph", "marked"):
        raise InputError(f"dedupe must be 'graph' or 'marked', got {dedupe!r}")

    def key_of(graph: FatGraph, marking: HomologyMarking) -> str:
        labels = marking.values if dedupe == "marked" else None
        return canonical_form(graph, labels).key

    report = CellReport()
    seen = {key_of(G, m)}
    queue = deque([(G, m, 0)])
    while queue:
        graph, marking, depth = queue.popleft()
        key = canonical_form(graph).key
        report.visited += 1
        _check_automorphisms(graph, marking, key, report)

        for e, f in codim2_degenerations(graph):
            if f < e:
                continue
            cell = degenerate(graph, marking, e, f)
            report.cells += 1
            if cell.kind is CellKind.PENTAGON:
                report.pentagons += 1
            else:
                report.squares += 1
            if list_cells:
                report.cell_ids.append((key, (e, f)))
            check = verify_cocycle(cell)
            if not check.ok:
                report.residuals.append((key, (e, f), str(check.residual)))
            cups = {cup_square_on_cell(cell, apex) for apex in range(len(cell))}
            if len(cups) != 1:
                report.apex_failures.append((key, (e, f)))

        if depth == radius:
            continue
        for e in range(graph.edge_count):
            if graph.is_loop(e):
                continue
            mr = whitehead_move(graph, e)
            nm = apply_move(marking, mr)
            k = key_of(mr.graph, nm)
            if k not in seen:
                seen.add(k)
                queue.append((mr.graph, nm, depth + 1))

    logger.info(f"Checked {report.cells} cells over {report.visited} marked graphs (ok={report.ok})")
    debug_log_event({"event": "verify_cells", **report.as_dict()})
    return report
