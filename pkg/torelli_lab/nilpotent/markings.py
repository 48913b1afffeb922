"""
pi_1- and N_k-markings of fat graphs, and the maps lambda_k.

A PiMarking assigns to every dart a word in the free group on the arcs dual
to the non-tree edges.  The reverse dart carries the inverse word and the
darts around a vertex multiply to 1 in rotation order, exactly in the free
group, except at one vertex whose product is a conjugate of the surface
relator (or its inverse).  Passing to the surface quotient makes every vertex
relation hold.

An NkMarking keeps canonical N_k coordinates per dart; two markings agree in
N_k exactly when their coordinates agree.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from ..config import get_config
from ..errors import InputError, VerificationError
from ..fatgraph import FatGraph, MoveResult, isomorphisms
from ..lattice import IntMatrix, inverse_integral, mat_mul, spans_everything, transpose
from ..marking import HomologyMarking, InvalidMarking, cycle_basis, intersection_form, spanning_tree
from .lie import LieElement
from .surface import Coordinates, DegreeTooHigh, SurfaceQuotient
from .words import FreeWord, product

logger = logging.getLogger(__name__)


class NotNkTrivial(VerificationError):
    """Raised when no relabelling of the endpoint preserves the N_k-marking."""
    def __init__(self, k: int, detail: str = ""):
        self.k = k
        message = f"sequence does not preserve the N_{k}-marking"
        super().__init__(f"{message}: {detail}" if detail else message)


@dataclass(frozen=True)
class PiMarking:
    graph: FatGraph
    values: Tuple[FreeWord, ...]
    rank: int
    relator: FreeWord

    def value(self, d: int) -> FreeWord:
        return self.values[d]

    def vertex_product(self, v: int, start: Optional[int] = None) -> FreeWord:
        cycle = self.graph.vertices[v]
        if start is not None:
            i = cycle.index(start)
            cycle = cycle[i:] + cycle[:i]
        return product([self.values[d] for d in cycle], self.rank)

    def vertex_products(self) -> List[FreeWord]:
        return [self.vertex_product(v) for v in range(self.graph.vertex_count)]

    def defect_vertices(self) -> List[int]:
        return [v for v, w in enumerate(self.vertex_products()) if not w.is_identity()]

    def violations(self, require_full_rank: bool = True) -> List[str]:
        G = self.graph
        if len(self.values) != G.dart_count:
            return ["shape"]
        out = []
        for d in range(G.dart_count):
            if self.values[G.iota[d]] != self.values[d].inverse():
                out.append(f"antisymmetry at dart {d}")
        defects = self.defect_vertices()
        if len(defects) > 1:
            out.append(f"vertex condition at vertices {defects}")
        for v in defects[:1]:
            w = self.vertex_product(v)
            if not (w.is_conjugate(self.relator) or w.is_conjugate(self.relator.inverse())):
                out.append(f"vertex condition at vertex {v}")
        if require_full_rank and not spans_everything([w.exponent_sums() for w in self.values], self.rank):
            out.append("full rank")
        return out

    def is_valid(self, require_full_rank: bool = True) -> bool:
        return not self.violations(require_full_rank)

    def validate(self, require_full_rank: bool = True) -> "PiMarking":
        problems = self.violations(require_full_rank)
        if problems:
            raise InvalidMarking(problems[0])
        return self

    def abelianize(self) -> HomologyMarking:
        """Exponent sums, in the basis of the non-tree arcs."""
        values = tuple(w.exponent_sums() for w in self.values)
        return HomologyMarking(graph=self.graph, values=values, dim=self.rank)

    def relabel(self, psi: Sequence[int], graph: FatGraph) -> "PiMarking":
        values: List[FreeWord] = [FreeWord.identity(self.rank)] * graph.dart_count
        for d, image in enumerate(psi):
            values[image] = self.values[d]
        return replace(self, graph=graph, values=tuple(values))

    def conjugated(self, by: FreeWord) -> "PiMarking":
        """Every value replaced by by * value * by^-1 (a point push of the base point)."""
        return replace(self, values=tuple(w.conjugate(by) for w in self.values))


def _tree_order(G: FatGraph, tree_edges: Sequence[int], root: int) -> List[Tuple[int, int]]:
    """(vertex, dart towards the parent) for every non-root vertex, leaves first."""
    tree = nx.Graph()
    tree.add_nodes_from(range(G.vertex_count))
    for e in tree_edges:
        x, y = G.edges[e]
        tree.add_edge(G.vertex_of[x], G.vertex_of[y], edge=e)
    depth = nx.single_source_shortest_path_length(tree, root)
    parents = dict(nx.bfs_predecessors(tree, root))
    out = []
    for v in sorted(parents, key=lambda v: (-depth[v], v)):
        x, y = G.edges[tree.edges[v, parents[v]]["edge"]]
        out.append((v, x if G.vertex_of[x] == v else y))
    return out


def tautological_pi_marking(G: FatGraph) -> PiMarking:
    """
    Non-tree edges give the generators x1..x2g (smaller dart -> x_i); tree darts
    are solved from the vertex relations, leaves towards the root (the vertex
    of dart 0).  The root relation is left over as the surface relator.
    """
    G.require_spine()
    tree_edges = spanning_tree(G)
    in_tree = set(tree_edges)
    cotree = [e for e in range(G.edge_count) if e not in in_tree]
    rank = len(cotree)
    values: List[Optional[FreeWord]] = [None] * G.dart_count
    for i, e in enumerate(cotree, start=1):
        x, y = G.edges[e]
        values[x] = FreeWord.generator(i, rank)
        values[y] = FreeWord.generator(-i, rank)

    root = G.vertex_of[0]
    for v, p in _tree_order(G, tree_edges, root):
        rest = []
        d = G.sigma[p]
        while d != p:
            rest.append(values[d])
            d = G.sigma[d]
        if any(w is None for w in rest):
            raise VerificationError(f"vertex {v} reached before its subtree")
        values[p] = product(rest, rank).inverse()
        values[G.iota[p]] = values[p].inverse()

    relator = product([values[d] for d in G.vertices[root]], rank)
    marking = PiMarking(graph=G, values=tuple(values), rank=rank, relator=relator)
    logger.debug(f"tautological pi_1 marking: relator {relator}")
    return marking


def apply_move_pi(pm: PiMarking, mr: MoveResult) -> PiMarking:
    """New edge: alpha(x) = (alpha(d) alpha(a))^-1, reverse gets the inverse."""
    if pm.graph != mr.source:
        raise InputError("marking does not live on the move's source graph")
    t = mr.darts
    new_y = pm.values[t.d] * pm.values[t.a]
    values = list(pm.values)
    values[t.x] = new_y.inverse()
    values[t.y] = new_y
    return replace(pm, graph=mr.graph, values=tuple(values))


def boundary_word(G: FatGraph, pm: PiMarking) -> FreeWord:
    """
    Vertex relations multiplied in the order the boundary cycle first reaches
    each vertex, each read from the dart it enters by.
    """
    if G.boundary_count != 1:
        raise InputError(f"boundary word needs one boundary cycle, graph has {G.boundary_count}")
    seen = set()
    factors = []
    for d in G.boundary_cycles[0]:
        v = G.vertex_of[d]
        if v in seen:
            continue
        seen.add(v)
        factors.append(pm.vertex_product(v, start=d))
    return product(factors, pm.rank)


def arc_to_cycle_matrix(G: FatGraph) -> IntMatrix:
    """(Omega^T)^-1: carries abelianized pi_1-markings onto tautological homology markings."""
    omega = intersection_form(G, cycle_basis(G))
    return inverse_integral(transpose(omega))


def arc_form(G: FatGraph) -> IntMatrix:
    """Intersection form written in the non-tree arc basis."""
    M = arc_to_cycle_matrix(G)
    omega = intersection_form(G, cycle_basis(G))
    return mat_mul(transpose(M), mat_mul(omega, M))


@dataclass(frozen=True)
class NkMarking:
    graph: FatGraph
    k: int
    values: Tuple[Coordinates, ...]
    words: Tuple[FreeWord, ...] = field(repr=False)
    quotient: SurfaceQuotient = field(repr=False, compare=False)

    def labels(self) -> Tuple[Coordinates, ...]:
        return self.values

    def homology(self) -> HomologyMarking:
        """Degree-1 part, which is the abelianized marking."""
        return HomologyMarking(graph=self.graph, values=tuple(v[0] for v in self.values),
                               dim=self.quotient.rank)

    def violations(self, require_full_rank: bool = True) -> List[str]:
        G, q = self.graph, self.quotient
        out = []
        for d in range(G.dart_count):
            if any(any(c) for c in q.coordinates(self.words[d] * self.words[G.iota[d]], self.k)):
                out.append(f"antisymmetry at dart {d}")
        for v, cycle in enumerate(G.vertices):
            if len(cycle) < 3:
                continue
            w = product([self.words[d] for d in cycle], q.rank)
            if any(any(c) for c in q.coordinates(w, self.k)):
                out.append(f"vertex condition at vertex {v}")
        if require_full_rank and not spans_everything([v[0] for v in self.values], q.rank):
            out.append("full rank")
        return out

    def is_valid(self, require_full_rank: bool = True) -> bool:
        return not self.violations(require_full_rank)


def quotient_for(pm: PiMarking, K: Optional[int] = None) -> SurfaceQuotient:
    K = K or get_config().degree_bound
    return SurfaceQuotient(pm.rank // 2, K, relator=pm.relator)


def residual_nk(pm: PiMarking, k: int, quotient: Optional[SurfaceQuotient] = None) -> NkMarking:
    """The N_k-marking a pi_1-marking determines."""
    if k < 1:
        raise InputError(f"nilpotency level must be at least 1, got {k}")
    q = quotient or quotient_for(pm)
    if k > q.K:
        raise DegreeTooHigh(k, q.K)
    values = tuple(q.coordinates(w, k) for w in pm.values)
    return NkMarking(graph=pm.graph, k=k, values=values, words=pm.values, quotient=q)


@dataclass(frozen=True)
class LambdaMap:
    """Per-dart classes in Gamma_k / Gamma_{k+1}, reduced modulo the symplectic ideal."""
    graph: FatGraph
    k: int
    values: Tuple[LieElement, ...]
    closing: Tuple[int, ...]

    def edge(self, e: int) -> LieElement:
        return self.values[self.graph.edges[e][0]]

    def edge_values(self) -> Dict[int, LieElement]:
        return {e: self.edge(e) for e in range(self.graph.edge_count)}

    def vertex_sums(self) -> List[LieElement]:
        out = []
        for cycle in self.graph.vertices:
            total = self.values[cycle[0]]
            for d in cycle[1:]:
                total = total + self.values[d]
            out.append(total)
        return out

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def as_dict(self) -> Dict[str, object]:
        return {
            "k": self.k,
            "degree": self.k + 1,
            "closing": list(self.closing),
            "edges": {str(e): value.as_dict() for e, value in self.edge_values().items()},
        }


def lambda_between(mu: PiMarking, mu_prime: PiMarking, psi: Sequence[int], k: int,
                   quotient: Optional[SurfaceQuotient] = None) -> LambdaMap:
    """
    lambda_k(e) = mu(e) mu'(psi^-1 e)^-1 for every dart e of mu's graph, where
    psi carries the darts of mu'.graph onto those of mu.graph.
    """
    q = quotient or quotient_for(mu)
    if k + 1 > q.K:
        raise DegreeTooHigh(k + 1, q.K)
    G = mu.graph
    psi_inverse = [0] * len(psi)
    for d, image in enumerate(psi):
        psi_inverse[image] = d
    values = []
    for e in range(G.dart_count):
        w = mu.values[e] * mu_prime.values[psi_inverse[e]].inverse()
        coords = q.coordinates(w, k + 1)
        if any(any(c) for c in coords[:k]):
            raise NotNkTrivial(k, f"dart {e} differs below degree {k + 1}")
        values.append(LieElement(q.rank, k + 1, coords[k]))
    return LambdaMap(graph=G, k=k, values=tuple(values), closing=tuple(psi))


def _nk_closings(mu: PiMarking, mu_prime: PiMarking, k: int, q: SurfaceQuotient) -> Iterator[Tuple[int, ...]]:
    start = residual_nk(mu, k, q)
    final = residual_nk(mu_prime, k, q)
    if mu_prime.graph == mu.graph and final.values == start.values:
        yield tuple(range(mu.graph.dart_count))
    yield from isomorphisms(mu_prime.graph, mu.graph, final.values, start.values)


def lambda_k_markings(mu: PiMarking, mu_prime: PiMarking, k: int,
                      quotient: Optional[SurfaceQuotient] = None) -> LambdaMap:
    """lambda_k between two pi_1-markings whose N_k images agree after relabelling."""
    q = quotient or quotient_for(mu)
    if k + 1 > q.K:
        raise DegreeTooHigh(k + 1, q.K)
    psi = next(_nk_closings(mu, mu_prime, k, q), None)
    if psi is None:
        raise NotNkTrivial(k)
    return lambda_between(mu, mu_prime, psi, k, q)


def lambda_k(s, k: int, quotient: Optional[SurfaceQuotient] = None) -> LambdaMap:
    """lambda_k of a move sequence carrying a pi_1-marking."""
    if s.pi_marking is None:
        raise InputError("sequence carries no pi_1 marking")
    result = lambda_k_markings(s.pi_marking, s.pi_markings[-1], k, quotient)
    logger.debug(f"lambda_{k} over {len(s)} moves: zero={result.is_zero()}")
    return result
