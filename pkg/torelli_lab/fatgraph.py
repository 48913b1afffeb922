"""
================================================================================
torelli-lab - Fat graphs (ribbon graphs)
================================================================================
A fat graph is a set of darts 0..2E-1 with two permutations:

    sigma   counterclockwise rotation of the darts around each vertex
    iota    fixed-point-free involution pairing the two darts of an edge

Vertices are the cycles of sigma, edges the orbits of iota, and boundary
cycles the cycles of phi(d) = sigma[iota[d]].  Traversing dart d means walking
along its edge from vertex(iota[d]) into vertex(d).

Edge ids are positions in the list of edges sorted by their smaller dart, so
Whitehead moves (which never renumber darts) keep every edge id.  Collapses
renumber darts and return the dart map.

USAGE:
    theta = build([1, 2, 0, 4, 5, 3], [3, 4, 5, 0, 1, 2])
    flipped = whitehead_move(theta, 0).graph
    key, aut = canonical_form(theta)
================================================================================
"""

import hashlib
import logging
import threading
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
from cachetools import LRUCache, cached
from cachetools.keys import hashkey

from .errors import InputError, VerificationError

logger = logging.getLogger(__name__)

Perm = Tuple[int, ...]


# =============================================================================
# ERRORS
# =============================================================================

class NotPermutation(InputError):
    """Raised when sigma or iota is not a bijection of the dart set."""
    def __init__(self, name: str, detail: str):
        self.name = name
        super().__init__(f"{name} is not a permutation: {detail}")


class NotInvolution(InputError):
    """Raised when iota(iota(d)) != d."""
    def __init__(self, dart: int, image: int):
        self.dart = dart
        self.image = image
        super().__init__(f"iota is not an involution: iota({dart})={image} but iota({image})!={dart}")


class FixedPointInInvolution(InputError):
    """Raised when iota fixes a dart."""
    def __init__(self, dart: int):
        self.dart = dart
        super().__init__(f"iota fixes dart {dart}")


class Disconnected(InputError):
    """Raised when sigma and iota do not act transitively on the darts."""
    def __init__(self, components: int):
        self.components = components
        super().__init__(f"fat graph has {components} connected components")


class LoopEdge(InputError):
    """Raised when a move or collapse targets an edge whose endpoints coincide."""
    def __init__(self, edge: int):
        self.edge = edge
        super().__init__(f"edge {edge} is a loop")


class NotTrivalent(InputError):
    """Raised when a move needs a trivalent endpoint."""
    def __init__(self, vertex: int, valence: int):
        self.vertex = vertex
        self.valence = valence
        super().__init__(f"vertex {vertex} has valence {valence}, expected 3")


class WrongDegeneracyType(InputError):
    """Raised when a graph is neither a pentagon nor a square degeneration."""
    def __init__(self, valences: Sequence[int]):
        self.valences = tuple(valences)
        super().__init__(f"not a codimension-2 degeneration (high valences {sorted(self.valences)})")


class NotSpine(InputError):
    """Raised when a graph does not have exactly one boundary cycle and genus >= 1."""
    def __init__(self, boundaries: int, genus: int):
        self.boundaries = boundaries
        self.genus = genus
        super().__init__(f"not a spine: {boundaries} boundary cycles, genus {genus}")


class UnknownEdge(InputError):
    """Raised for edge ids outside the graph."""
    def __init__(self, edge: int, edge_count: int):
        self.edge = edge
        super().__init__(f"edge {edge} out of range (graph has {edge_count} edges)")


# =============================================================================
# DATA MODEL
# =============================================================================

def _cycles(perm: Sequence[int]) -> Tuple[Tuple[int, ...], ...]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycle = []
        d = start
        while not seen[d]:
            seen[d] = True
            cycle.append(d)
            d = perm[d]
        out.append(tuple(cycle))
    return tuple(out)


@dataclass(frozen=True)
class FatGraph:
    """Immutable ribbon graph; build() validates, the constructor does not."""
    sigma: Perm
    iota: Perm

    @property
    def dart_count(self) -> int:
        return len(self.sigma)

    @property
    def edge_count(self) -> int:
        return len(self.sigma) // 2

    @cached_property
    def vertices(self) -> Tuple[Tuple[int, ...], ...]:
        """Cycles of sigma, each starting at its smallest dart, ordered by that dart."""
        return _cycles(self.sigma)

    @cached_property
    def vertex_of(self) -> Tuple[int, ...]:
        out = [0] * self.dart_count
        for v, cycle in enumerate(self.vertices):
            for d in cycle:
                out[d] = v
        return tuple(out)

    @cached_property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((d, self.iota[d]) for d in range(self.dart_count) if d < self.iota[d])

    @cached_property
    def edge_of(self) -> Tuple[int, ...]:
        out = [0] * self.dart_count
        for e, (x, y) in enumerate(self.edges):
            out[x] = e
            out[y] = e
        return tuple(out)

    @cached_property
    def boundary_cycles(self) -> Tuple[Tuple[int, ...], ...]:
        phi = [self.sigma[self.iota[d]] for d in range(self.dart_count)]
        return _cycles(phi)

    @cached_property
    def valences(self) -> Tuple[int, ...]:
        return tuple(len(c) for c in self.vertices)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def boundary_count(self) -> int:
        return len(self.boundary_cycles)

    @cached_property
    def genus(self) -> int:
        euler = self.vertex_count - self.edge_count + self.boundary_count
        return (2 - euler) // 2

    @cached_property
    def sigma_inverse(self) -> Perm:
        out = [0] * self.dart_count
        for d, s in enumerate(self.sigma):
            out[s] = d
        return tuple(out)

    def reverse(self, d: int) -> int:
        return self.iota[d]

    def edge_darts(self, e: int) -> Tuple[int, int]:
        if not 0 <= e < self.edge_count:
            raise UnknownEdge(e, self.edge_count)
        return self.edges[e]

    def is_loop(self, e: int) -> bool:
        x, y = self.edge_darts(e)
        return self.vertex_of[x] == self.vertex_of[y]

    @property
    def is_trivalent(self) -> bool:
        return all(v == 3 for v in self.valences)

    @property
    def is_spine(self) -> bool:
        return self.boundary_count == 1 and self.genus >= 1

    def require_spine(self) -> None:
        if not self.is_spine:
            raise NotSpine(self.boundary_count, self.genus)

    def summary(self) -> Dict[str, int]:
        return {
            "darts": self.dart_count,
            "vertices": self.vertex_count,
            "edges": self.edge_count,
            "boundaries": self.boundary_count,
            "genus": self.genus,
        }


@dataclass(frozen=True)
class MoveDarts:
    """The darts named by a Whitehead move: (x,a,b) at one end, (y,c,d) at the other."""
    x: int
    y: int
    a: int
    b: int
    c: int
    d: int


@dataclass(frozen=True)
class MoveResult:
    source: FatGraph
    graph: FatGraph
    edge: int
    darts: MoveDarts
    correspondence: Tuple[int, ...]


class CellKind(str, Enum):
    """Codimension-2 degeneration types."""
    PENTAGON = "pentagon"
    SQUARE = "square"


@dataclass(frozen=True)
class CodimTwoLink:
    """Closed cycle of trivalent resolutions of a codimension-2 graph."""
    kind: CellKind
    base: FatGraph
    steps: Tuple[Tuple[FatGraph, int], ...]
    closing: Perm
    new_darts: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def moves(self) -> List[MoveResult]:
        return [whitehead_move(graph, edge) for graph, edge in self.steps]


@dataclass(frozen=True)
class CanonicalForm:
    key: str
    automorphisms: int
    code: Tuple


# =============================================================================
# CONSTRUCTION
# =============================================================================

def _check_permutation(name: str, perm: Sequence[int], n: int) -> None:
    if len(perm) != n:
        raise NotPermutation(name, f"length {len(perm)}, expected {n}")
    if sorted(perm) != list(range(n)):
        raise NotPermutation(name, "images are not exactly the darts 0..n-1")


def build(sigma: Sequence[int], iota: Sequence[int]) -> FatGraph:
    """Validate two permutations and return the fat graph they define."""
    n = len(iota)
    if n == 0:
        raise NotPermutation("iota", "empty dart set")
    _check_permutation("sigma", sigma, n)
    _check_permutation("iota", iota, n)
    for d in range(n):
        if iota[d] == d:
            raise FixedPointInInvolution(d)
        if iota[iota[d]] != d:
            raise NotInvolution(d, iota[d])

    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((d, sigma[d]) for d in range(n))
    g.add_edges_from((d, iota[d]) for d in range(n))
    components = nx.number_connected_components(g)
    if components != 1:
        raise Disconnected(components)

    return FatGraph(tuple(int(s) for s in sigma), tuple(int(i) for i in iota))


def from_cycles(vertex_cycles: Sequence[Sequence[int]], edge_pairs: Sequence[Tuple[int, int]]) -> FatGraph:
    """Build from vertex rotations and dart pairs, e.g. from_cycles([(0,1,2),(3,4,5)], [(0,3),(1,4),(2,5)])."""
    n = sum(len(c) for c in vertex_cycles)
    sigma = [-1] * n
    iota = [-1] * n
    for cycle in vertex_cycles:
        for i, d in enumerate(cycle):
            sigma[d] = cycle[(i + 1) % len(cycle)]
    for x, y in edge_pairs:
        iota[x] = y
        iota[y] = x
    return build(sigma, iota)


def relabel(G: FatGraph, perm: Sequence[int]) -> FatGraph:
    """The same graph with dart d renamed perm[d]."""
    n = G.dart_count
    sigma = [0] * n
    iota = [0] * n
    for d in range(n):
        sigma[perm[d]] = perm[G.sigma[d]]
        iota[perm[d]] = perm[G.iota[d]]
    return FatGraph(tuple(sigma), tuple(iota))


def _from_vertex_cycles(cycles: Sequence[Sequence[int]], iota: Sequence[int]) -> FatGraph:
    sigma = [0] * len(iota)
    for cycle in cycles:
        for i, d in enumerate(cycle):
            sigma[d] = cycle[(i + 1) % len(cycle)]
    return FatGraph(tuple(sigma), tuple(iota))


# =============================================================================
# MOVES, COLLAPSES, EXPANSIONS
# =============================================================================

def whitehead_move(G: FatGraph, e: int) -> MoveResult:
    """
    Flip edge e.  With x its smaller dart, y = iota(x), the rotations (x,a,b)
    and (y,c,d) become (x,d,a) and (y,b,c).  Only the endpoints must be
    trivalent; darts are never renumbered.
    """
    x, y = G.edge_darts(e)
    vx, vy = G.vertex_of[x], G.vertex_of[y]
    if vx == vy:
        raise LoopEdge(e)
    for v in (vx, vy):
        if G.valences[v] != 3:
            raise NotTrivalent(v, G.valences[v])

    a = G.sigma[x]
    b = G.sigma[a]
    c = G.sigma[y]
    d = G.sigma[c]
    sigma = list(G.sigma)
    sigma[x], sigma[d], sigma[a] = d, a, x
    sigma[y], sigma[b], sigma[c] = b, c, y
    graph = FatGraph(tuple(sigma), G.iota)
    return MoveResult(
        source=G,
        graph=graph,
        edge=e,
        darts=MoveDarts(x=x, y=y, a=a, b=b, c=c, d=d),
        correspondence=tuple(range(G.edge_count)),
    )


def collapse_edge_with_map(G: FatGraph, e: int) -> Tuple[FatGraph, Tuple[int, ...]]:
    """Collapse e; returns the new graph and the old->new dart map (-1 for the removed darts)."""
    x, y = G.edge_darts(e)
    vx, vy = G.vertex_of[x], G.vertex_of[y]
    if vx == vy:
        raise LoopEdge(e)

    def after(dart: int) -> List[int]:
        out = []
        d = G.sigma[dart]
        while d != dart:
            out.append(d)
            d = G.sigma[d]
        return out

    merged = after(x) + after(y)
    dart_map = [-1] * G.dart_count
    nxt = 0
    for d in range(G.dart_count):
        if d not in (x, y):
            dart_map[d] = nxt
            nxt += 1

    cycles = []
    for v, cycle in enumerate(G.vertices):
        if v == vx:
            cycles.append([dart_map[d] for d in merged])
        elif v != vy:
            cycles.append([dart_map[d] for d in cycle])
    iota = [0] * nxt
    for d in range(G.dart_count):
        if dart_map[d] >= 0:
            iota[dart_map[d]] = dart_map[G.iota[d]]
    return _from_vertex_cycles([c for c in cycles if c], iota), tuple(dart_map)


def collapse_edge(G: FatGraph, e: int) -> FatGraph:
    return collapse_edge_with_map(G, e)[0]


def expand_vertex(G: FatGraph, v: int, start: int, length: int) -> FatGraph:
    """
    Split vertex v: the `length` darts starting at position `start` of its
    rotation stay with the new dart 2E, the rest go to the new dart 2E+1.
    Collapsing the new edge gives G back.
    """
    cycle = G.vertices[v]
    n = len(cycle)
    if not 2 <= length <= n - 2:
        raise InputError(f"cannot split a {n}-valent vertex into arcs of {length} and {n - length} darts")
    rotated = cycle[start % n:] + cycle[:start % n]
    side_a, side_b = rotated[:length], rotated[length:]
    n1, n2 = G.dart_count, G.dart_count + 1
    cycles = [c for i, c in enumerate(G.vertices) if i != v]
    cycles.append((n1,) + tuple(side_a))
    cycles.append((n2,) + tuple(side_b))
    iota = list(G.iota) + [n2, n1]
    return _from_vertex_cycles(cycles, iota)


def vertex_splits(G: FatGraph, v: int) -> List[Tuple[int, int]]:
    """Unordered splits (start, length) of a vertex of valence >= 4 into two vertices of valence >= 3."""
    n = G.valences[v]
    out = []
    for length in range(2, n - 1):
        for start in range(n):
            # (start, length) and (start+length, n-length) give the same split
            if length * 2 > n or (length * 2 == n and start >= n // 2):
                continue
            out.append((start, length))
    return out


def seed_spine(g: int) -> FatGraph:
    """Deterministic trivalent spine of genus g (caterpillar expansion of the one-face rose)."""
    if g < 1:
        raise InputError(f"genus must be >= 1, got {g}")
    n = 4 * g
    sigma = [(d + 1) % n for d in range(n)]
    iota = [0] * n
    for i in range(g):
        for first in (4 * i, 4 * i + 1):
            iota[first], iota[first + 2] = first + 2, first
    graph = FatGraph(tuple(sigma), tuple(iota))
    while not graph.is_trivalent:
        v = next(i for i, val in enumerate(graph.valences) if val > 3)
        graph = expand_vertex(graph, v, 0, 2)
    return graph


# =============================================================================
# ISOMORPHISM AND CANONICAL FORM
# =============================================================================

def _extend(G: FatGraph, H: FatGraph, start: int, target: int,
            labels_g: Optional[Sequence] = None,
            labels_h: Optional[Sequence] = None) -> Optional[Tuple[int, ...]]:
    n = G.dart_count
    psi = [-1] * n
    used = [False] * n
    psi[start] = target
    used[target] = True
    queue = [start]
    i = 0
    while i < len(queue):
        d = queue[i]
        i += 1
        if labels_g is not None and labels_g[d] != labels_h[psi[d]]:
            return None
        for fg, fh in ((G.sigma, H.sigma), (G.iota, H.iota)):
            nd, nt = fg[d], fh[psi[d]]
            if psi[nd] == -1:
                if used[nt]:
                    return None
                psi[nd] = nt
                used[nt] = True
                queue.append(nd)
            elif psi[nd] != nt:
                return None
    return tuple(psi)


def isomorphisms(G: FatGraph, H: FatGraph,
                 labels_g: Optional[Sequence] = None,
                 labels_h: Optional[Sequence] = None) -> Iterator[Tuple[int, ...]]:
    """Dart bijections psi with psi.sigma = sigma.psi, psi.iota = iota.psi and labels preserved."""
    if G.dart_count != H.dart_count or sorted(G.valences) != sorted(H.valences):
        return
    if (labels_g is None) != (labels_h is None):
        raise InputError("labels must be given for both graphs or neither")
    for target in range(H.dart_count):
        psi = _extend(G, H, 0, target, labels_g, labels_h)
        if psi is not None:
            yield psi


def automorphisms(G: FatGraph, labels: Optional[Sequence] = None) -> List[Tuple[int, ...]]:
    return list(isomorphisms(G, G, labels, labels))


def _code_from(G: FatGraph, start: int, labels: Optional[Sequence]) -> Tuple:
    n = G.dart_count
    index = [-1] * n
    order = [start]
    index[start] = 0
    i = 0
    while i < len(order):
        d = order[i]
        i += 1
        for nxt in (G.sigma[d], G.iota[d]):
            if index[nxt] == -1:
                index[nxt] = len(order)
                order.append(nxt)
    sigma = tuple(index[G.sigma[d]] for d in order)
    iota = tuple(index[G.iota[d]] for d in order)
    lab = tuple(labels[d] for d in order) if labels is not None else ()
    return (sigma, iota, lab)


@cached(LRUCache(maxsize=16384), key=lambda G, labels=None: hashkey(G, labels), lock=threading.RLock())
def canonical_form(G: FatGraph, labels: Optional[Tuple] = None) -> CanonicalForm:
    """
    Minimal relabelling code over a class of starting darts singled out by an
    isomorphism invariant.  Two graphs get the same key iff they are
    isomorphic (respecting labels); the number of starts reaching the minimum
    is the automorphism count.
    """
    if labels is not None:
        labels = tuple(labels)

    def invariant(d: int):
        head = (G.valences[G.vertex_of[d]], G.valences[G.vertex_of[G.iota[d]]])
        return head + ((labels[d],) if labels is not None else ())

    invariants = [invariant(d) for d in range(G.dart_count)]
    best_invariant = min(invariants)
    best = None
    count = 0
    for d in range(G.dart_count):
        if invariants[d] != best_invariant:
            continue
        code = _code_from(G, d, labels)
        if best is None or code < best:
            best = code
            count = 1
        elif code == best:
            count += 1
    key = hashlib.md5(repr(best).encode()).hexdigest()
    return CanonicalForm(key=key, automorphisms=count, code=best)


def canonical_graph(G: FatGraph) -> FatGraph:
    """The representative spelled by the canonical code."""
    sigma, iota, _ = canonical_form(G).code
    return FatGraph(sigma, iota)


# =============================================================================
# CODIMENSION-2 LINKS
# =============================================================================

def _closing_iso(final: FatGraph, first: FatGraph, externals: int) -> Tuple[int, ...]:
    for anchor in range(externals):
        psi = _extend(final, first, anchor, anchor)
        if psi is not None and all(psi[d] == d for d in range(externals)):
            return psi
    raise VerificationError("codimension-2 link does not close up")


def link_of_codim2(G4: FatGraph) -> CodimTwoLink:
    """
    Trivalent resolutions around a pentagon (one 5-valent vertex) or square
    (two 4-valent vertices) degeneration, as a closed cycle of moves.  The
    new internal edges get darts appended after the existing ones.
    """
    high = [v for v, val in enumerate(G4.valences) if val > 3]
    high_valences = [G4.valences[v] for v in high]
    externals = G4.dart_count

    if high_valences == [5]:
        v = high[0]
        t0 = expand_vertex(G4, v, 0, 2)
        n2 = externals + 1
        w = t0.vertex_of[n2]
        t0 = expand_vertex(t0, w, t0.vertices[w].index(n2), 2)
        n_edge, m_edge = t0.edge_of[externals], t0.edge_of[externals + 2]
        order = (n_edge, m_edge, n_edge, m_edge, n_edge)
        kind = CellKind.PENTAGON
    elif high_valences == [4, 4]:
        second = G4.vertices[high[1]][0]
        t0 = expand_vertex(G4, high[0], 0, 2)
        t0 = expand_vertex(t0, t0.vertex_of[second], 0, 2)
        n_edge, m_edge = t0.edge_of[externals], t0.edge_of[externals + 2]
        order = (n_edge, m_edge, n_edge, m_edge)
        kind = CellKind.SQUARE
    else:
        raise WrongDegeneracyType(high_valences)

    steps = []
    current = t0
    for edge in order:
        steps.append((current, edge))
        current = whitehead_move(current, edge).graph
    closing = _closing_iso(current, t0, externals) if externals else tuple(range(current.dart_count))
    return CodimTwoLink(
        kind=kind,
        base=G4,
        steps=tuple(steps),
        closing=closing,
        new_darts=tuple(range(externals, t0.dart_count)),
    )


def codim2_degenerations(G: FatGraph) -> Iterator[Tuple[int, int]]:
    """Edge pairs (e, f) of a trivalent graph whose successive collapse is a codim-2 graph."""
    for e in range(G.edge_count):
        if G.is_loop(e):
            continue
        collapsed, dart_map = collapse_edge_with_map(G, e)
        for f in range(G.edge_count):
            if f == e:
                continue
            fx = dart_map[G.edges[f][0]]
            if collapsed.vertex_of[fx] != collapsed.vertex_of[collapsed.iota[fx]]:
                yield e, f


def collapse_pair(G: FatGraph, e: int, f: int) -> Tuple[FatGraph, Tuple[int, ...]]:
    """Collapse e then f (ids in G); returns the graph and the composite dart map."""
    once, first_map = collapse_edge_with_map(G, e)
    fx = first_map[G.edge_darts(f)[0]]
    if fx < 0:
        raise InputError(f"edges {e} and {f} coincide")
    twice, second_map = collapse_edge_with_map(once, once.edge_of[fx])
    composite = tuple(-1 if m < 0 else second_map[m] for m in first_map)
    return twice, composite
