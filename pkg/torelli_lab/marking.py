"""
================================================================================
torelli-lab - Homology markings
================================================================================
Integer homology H = Z^{2g} of a spine in its own cycle basis, the
intersection form, homology markings and how they ride along Whitehead moves,
level-N reduction and a few symplectic utilities.

A marking assigns a vector to every dart.  Dart d is the edge oriented into
vertex(d), so the defining conditions read

    values[iota[d]] == -values[d]
    sum of values over the darts of a vertex == 0     (valence >= 3)
    the values span Z^dim                             ((Z/N)^dim for level N)

USAGE:
    basis = cycle_basis(G)
    omega = intersection_form(G, basis)
    m = tautological_marking(G)
    m2 = apply_move(m, whitehead_move(G, 0))
================================================================================
"""

import logging
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.utils import UnionFind
from sympy import primefactors

from .errors import InputError, VerificationError
from .fatgraph import FatGraph, MoveResult, collapse_edge_with_map
from .lattice import (
    IntMatrix,
    IntVector,
    bilinear,
    determinant,
    identity,
    inverse_integral,
    mat_mul,
    mat_vec,
    solve_exact,
    spans_everything,
    transpose,
)

logger = logging.getLogger(__name__)


# =============================================================================
# ERRORS
# =============================================================================

class NonUnimodular(VerificationError):
    def __init__(self, det: int):
        self.det = det
        super().__init__(f"intersection form has determinant {det}")


class InvalidModulus(InputError):
    def __init__(self, modulus: int):
        self.modulus = modulus
        super().__init__(f"modulus must be >= 2, got {modulus}")


class RankDropModN(VerificationError):
    def __init__(self, modulus: int):
        self.modulus = modulus
        super().__init__(f"marking does not span (Z/{modulus})^2g")


class InvalidMarking(InputError):
    """Raised when a marking violates antisymmetry, a vertex condition or full rank."""
    def __init__(self, condition: str, where: Optional[int] = None):
        self.condition = condition
        self.where = where
        suffix = f" at {where}" if where is not None else ""
        super().__init__(f"marking fails {condition}{suffix}")


class InvalidRelabeling(InputError):
    def __init__(self, detail: str):
        super().__init__(f"invalid relabeling: {detail}")


# =============================================================================
# CYCLE BASIS AND INTERSECTION FORM
# =============================================================================

@dataclass(frozen=True)
class CycleBasis:
    """Fundamental cycles of the lowest-index maximal tree, one per non-tree edge."""
    graph: FatGraph
    tree_edges: Tuple[int, ...]
    cotree_edges: Tuple[int, ...]
    cycles: Tuple[Tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.cycles)

    @cached_property
    def coefficients(self) -> IntMatrix:
        """coefficients[d][j]: signed number of times cycle j runs along dart d."""
        n = self.graph.dart_count
        out = [[0] * len(self.cycles) for _ in range(n)]
        for j, walk in enumerate(self.cycles):
            for d in walk:
                out[d][j] += 1
                out[self.graph.iota[d]][j] -= 1
        return tuple(tuple(row) for row in out)


def spanning_tree(G: FatGraph) -> Tuple[int, ...]:
    """Greedy maximal tree on the lowest edge ids."""
    forest = UnionFind(range(G.vertex_count))
    tree = []
    for e, (x, y) in enumerate(G.edges):
        u, v = G.vertex_of[x], G.vertex_of[y]
        if forest[u] != forest[v]:
            forest.union(u, v)
            tree.append(e)
    return tuple(tree)


def _tree_path(G: FatGraph, tree: nx.Graph, source: int, target: int) -> List[int]:
    """Darts walked along the tree from vertex `source` to vertex `target`."""
    nodes = nx.shortest_path(tree, source, target)
    darts = []
    for u, w in zip(nodes, nodes[1:]):
        p, q = G.edges[tree.edges[u, w]["edge"]]
        darts.append(p if G.vertex_of[p] == w else q)
    return darts


def cycle_basis(G: FatGraph) -> CycleBasis:
    G.require_spine()
    tree_edges = spanning_tree(G)
    tree = nx.Graph()
    tree.add_nodes_from(range(G.vertex_count))
    for e in tree_edges:
        x, y = G.edges[e]
        tree.add_edge(G.vertex_of[x], G.vertex_of[y], edge=e)

    in_tree = set(tree_edges)
    cotree = tuple(e for e in range(G.edge_count) if e not in in_tree)
    cycles = []
    for e in cotree:
        x, y = G.edges[e]
        walk = [x] + _tree_path(G, tree, G.vertex_of[x], G.vertex_of[y])
        cycles.append(tuple(walk))
    if len(cycles) != 2 * G.genus:
        raise VerificationError(f"{len(cycles)} fundamental cycles for genus {G.genus}")
    return CycleBasis(graph=G, tree_edges=tree_edges, cotree_edges=cotree, cycles=tuple(cycles))


def contract_tree(G: FatGraph, tree_edges: Sequence[int]) -> Tuple[FatGraph, Tuple[int, ...]]:
    """Collapse the given tree edges; returns the quotient and the old->new dart map."""
    current = G
    dart_map = tuple(range(G.dart_count))
    for e in tree_edges:
        p = dart_map[G.edges[e][0]]
        current, step = collapse_edge_with_map(current, current.edge_of[p])
        dart_map = tuple(-1 if m < 0 else step[m] for m in dart_map)
    return current, dart_map


def intersection_form(G: FatGraph, basis: Optional[CycleBasis] = None) -> IntMatrix:
    """
    Intersection numbers of the basis cycles.  Contracting the tree leaves a
    rose; loop i leaves through out_i and comes back through in_i, and
    omega[i][j] = +1 when out_j is the only dart of loop j strictly inside
    the counterclockwise arc from out_i to in_i (-1 when it is in_j).
    """
    basis = basis or cycle_basis(G)
    rose, dart_map = contract_tree(G, basis.tree_edges)
    rotation = rose.vertices[0]
    pos = {d: i for i, d in enumerate(rotation)}
    n = len(rotation)
    loops = []
    for e in basis.cotree_edges:
        x, y = G.edges[e]
        loops.append((dart_map[y], dart_map[x]))

    size = len(loops)
    omega = [[0] * size for _ in range(size)]
    for i, (out_i, in_i) in enumerate(loops):
        start, stop = pos[out_i], pos[in_i]
        inside = set()
        k = (start + 1) % n
        while k != stop:
            inside.add(rotation[k])
            k = (k + 1) % n
        for j, (out_j, in_j) in enumerate(loops):
            if i == j:
                continue
            hits = [d for d in (out_j, in_j) if d in inside]
            if len(hits) == 1:
                omega[i][j] = 1 if hits[0] == out_j else -1
    form = tuple(tuple(row) for row in omega)
    det = determinant(form)
    if abs(det) != 1:
        raise NonUnimodular(det)
    return form


def standard_form(g: int) -> IntMatrix:
    """J on the ordered basis (a1, b1, a2, b2, ...) with a_i . b_i = 1."""
    rows = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        rows[2 * i][2 * i + 1] = 1
        rows[2 * i + 1][2 * i] = -1
    return tuple(tuple(r) for r in rows)


# =============================================================================
# MARKINGS
# =============================================================================

def _mod(v: Sequence[int], modulus: Optional[int]) -> IntVector:
    if modulus is None:
        return tuple(int(x) for x in v)
    return tuple(int(x) % modulus for x in v)


@dataclass(frozen=True)
class HomologyMarking:
    graph: FatGraph
    values: Tuple[IntVector, ...]
    dim: int
    form: Optional[IntMatrix] = None
    modulus: Optional[int] = None

    def value(self, d: int) -> IntVector:
        return self.values[d]

    def labels(self) -> Tuple[IntVector, ...]:
        return self.values

    def pairing(self, d1: int, d2: int) -> int:
        if self.form is None:
            raise InputError("marking carries no intersection form")
        return bilinear(self.form, self.values[d1], self.values[d2])

    def _zero(self, v: Sequence[int]) -> bool:
        return not any(_mod(v, self.modulus))

    def violations(self, require_full_rank: bool = True) -> List[str]:
        G = self.graph
        out = []
        if len(self.values) != G.dart_count or any(len(v) != self.dim for v in self.values):
            return ["shape"]
        for d in range(G.dart_count):
            total = [a + b for a, b in zip(self.values[d], self.values[G.iota[d]])]
            if not self._zero(total):
                out.append(f"antisymmetry at dart {d}")
        for v, cycle in enumerate(G.vertices):
            if len(cycle) < 3:
                continue
            total = [sum(self.values[d][i] for d in cycle) for i in range(self.dim)]
            if not self._zero(total):
                out.append(f"vertex condition at vertex {v}")
        if require_full_rank and not spans_everything(self.values, self.dim, self.modulus):
            out.append("full rank")
        return out

    def is_valid(self, require_full_rank: bool = True) -> bool:
        return not self.violations(require_full_rank)

    def validate(self, require_full_rank: bool = True) -> "HomologyMarking":
        problems = self.violations(require_full_rank)
        if problems:
            raise InvalidMarking(problems[0])
        return self

    def transform(self, M: IntMatrix) -> "HomologyMarking":
        """Apply a basis change slotwise."""
        values = tuple(_mod(mat_vec(M, v), self.modulus) for v in self.values)
        return replace(self, values=values)

    def restrict(self, dart_map: Sequence[int], graph: FatGraph) -> "HomologyMarking":
        """Carry values to a collapsed graph through its dart map."""
        values: List[Optional[IntVector]] = [None] * graph.dart_count
        for old, new in enumerate(dart_map):
            if new >= 0:
                values[new] = self.values[old]
        return replace(self, graph=graph, values=tuple(values))

    def extend(self, graph: FatGraph) -> "HomologyMarking":
        """Fill in the darts an expansion appended, one vertex at a time."""
        known: Dict[int, IntVector] = dict(enumerate(self.values))
        return complete_marking(graph, known, self.dim, form=self.form, modulus=self.modulus)

    def relabel(self, psi: Sequence[int], graph: FatGraph) -> "HomologyMarking":
        """The marking seen on the graph psi maps this one onto."""
        values: List[IntVector] = [()] * graph.dart_count
        for d, image in enumerate(psi):
            values[image] = self.values[d]
        return replace(self, graph=graph, values=tuple(values))

    def on(self, graph: FatGraph) -> "HomologyMarking":
        return replace(self, graph=graph)


@dataclass(frozen=True)
class LevelNMarking(HomologyMarking):
    """Homology marking with entries in Z/N."""


def complete_marking(graph: FatGraph, known: Dict[int, Sequence[int]], dim: int,
                     form: Optional[IntMatrix] = None,
                     modulus: Optional[int] = None) -> HomologyMarking:
    """Solve the remaining darts from antisymmetry and vertices with a single unknown."""
    values: Dict[int, IntVector] = {d: _mod(v, modulus) for d, v in known.items()}
    changed = True
    while changed and len(values) < graph.dart_count:
        changed = False
        for d in list(values):
            r = graph.iota[d]
            if r not in values:
                values[r] = _mod([-x for x in values[d]], modulus)
                changed = True
        for cycle in graph.vertices:
            if len(cycle) < 3:
                continue
            missing = [d for d in cycle if d not in values]
            if len(missing) == 1:
                total = [sum(values[d][i] for d in cycle if d in values) for i in range(dim)]
                values[missing[0]] = _mod([-x for x in total], modulus)
                changed = True
    if len(values) < graph.dart_count:
        raise InvalidMarking("completion", min(d for d in range(graph.dart_count) if d not in values))
    cls = LevelNMarking if modulus is not None else HomologyMarking
    return cls(graph=graph, values=tuple(values[d] for d in range(graph.dart_count)),
               dim=dim, form=form, modulus=modulus)


def tautological_marking(G: FatGraph, basis: Optional[CycleBasis] = None) -> HomologyMarking:
    """
    Class of the arc dual to each dart: the x with <x, z_j> = (coefficient of
    the dart in cycle z_j) for every basis cycle, i.e. x = (omega^T)^-1 c.
    """
    basis = basis or cycle_basis(G)
    omega = intersection_form(G, basis)
    dual = inverse_integral(transpose(omega))
    values = tuple(mat_vec(dual, basis.coefficients[d]) for d in range(G.dart_count))
    return HomologyMarking(graph=G, values=values, dim=len(omega), form=omega)


def apply_move(m: HomologyMarking, mr: MoveResult) -> HomologyMarking:
    """New edge: value(x) = -(value(d) + value(a)), everything else carried over."""
    if m.graph != mr.source:
        raise InputError("marking does not live on the move's source graph")
    t = mr.darts
    new_x = _mod([-(p + q) for p, q in zip(m.values[t.d], m.values[t.a])], m.modulus)
    values = list(m.values)
    values[t.x] = new_x
    values[t.y] = _mod([-v for v in new_x], m.modulus)
    return replace(m, graph=mr.graph, values=tuple(values))


def reduce_mod(m: HomologyMarking, N: int) -> LevelNMarking:
    if N < 2:
        raise InvalidModulus(N)
    values = tuple(_mod(v, N) for v in m.values)
    out = LevelNMarking(graph=m.graph, values=values, dim=m.dim, form=m.form, modulus=N)
    if not spans_everything(values, m.dim, N):
        raise RankDropModN(N)
    return out


def induced_basis_change(m: HomologyMarking, m2: HomologyMarking, psi: Sequence[int]) -> IntMatrix:
    """The integral M with m2(psi d) = M m(d) for every dart d."""
    A = tuple(m.values)
    B = tuple(m2.values[psi[d]] for d in range(len(psi)))
    solution = solve_exact(A, B)
    if solution is None:
        raise InvalidRelabeling("no integral basis change carries one marking onto the other")
    M = transpose(solution)
    if any(mat_vec(M, a) != tuple(b) for a, b in zip(A, B)):
        raise InvalidRelabeling("basis change is not consistent on every dart")
    return M


# =============================================================================
# SYMPLECTIC UTILITIES
# =============================================================================

def is_symplectic(M: IntMatrix, omega: IntMatrix) -> bool:
    return mat_mul(mat_mul(transpose(M), omega), M) == omega


def symplectic_basis(omega: IntMatrix) -> IntMatrix:
    """
    Integral P (columns a1, b1, a2, b2, ...) with P^T omega P = J, by
    symplectic Gram-Schmidt over Z.
    """
    n = len(omega)

    def w(u, v):
        return bilinear(omega, u, v)

    pool: List[List[int]] = [list(r) for r in identity(n)]
    columns: List[List[int]] = []
    while pool:
        e = pool.pop(0)
        while True:
            live = [i for i, v in enumerate(pool) if w(e, v) != 0]
            if len(live) <= 1:
                break
            pivot = min(live, key=lambda i: abs(w(e, pool[i])))
            wp = w(e, pool[pivot])
            for i in live:
                if i != pivot:
                    q = w(e, pool[i]) // wp
                    pool[i] = [a - q * b for a, b in zip(pool[i], pool[pivot])]
        if not live or abs(w(e, pool[live[0]])) != 1:
            raise NonUnimodular(determinant(omega))
        f = pool.pop(live[0])
        if w(e, f) == -1:
            f = [-x for x in f]
        rest = []
        for v in pool:
            vf, ve = w(v, f), w(v, e)
            rest.append([x - vf * a + ve * b for x, a, b in zip(v, e, f)])
        pool = rest
        columns.extend([e, f])
    return transpose(tuple(tuple(c) for c in columns))


def _transvection(v: Sequence[int], form: IntMatrix) -> IntMatrix:
    Jv = mat_vec(form, v)
    n = len(v)
    return tuple(tuple((1 if i == j else 0) + v[i] * Jv[j] for j in range(n)) for i in range(n))


def sp_generators(omega: IntMatrix) -> List[IntMatrix]:
    """Transvections along a_i, b_i and a_i - a_{i+1}, written in the omega basis."""
    n = len(omega)
    g = n // 2
    J = standard_form(g)
    vectors = []
    for i in range(g):
        a = [0] * n
        a[2 * i] = 1
        b = [0] * n
        b[2 * i + 1] = 1
        vectors.extend([a, b])
        if i + 1 < g:
            c = [0] * n
            c[2 * i], c[2 * i + 2] = 1, -1
            vectors.append(c)
    P = symplectic_basis(omega)
    P_inv = inverse_integral(P)
    return [mat_mul(mat_mul(P, _transvection(v, J)), P_inv) for v in vectors]


def sp_order(g: int, N: int) -> int:
    """|Sp(2g, Z/N)|."""
    if N < 2:
        raise InvalidModulus(N)
    order = Fraction(N) ** (2 * g * g + g)
    for p in primefactors(N):
        for i in range(1, g + 1):
            order *= 1 - Fraction(1, p ** (2 * i))
    return int(order)


def random_symplectic(g: int, seed: Optional[int] = None, omega: Optional[IntMatrix] = None,
                      steps: Optional[int] = None) -> IntMatrix:
    """Product of random generator transvections (and inverses); steps=0 gives the identity."""
    if g < 1:
        raise InputError(f"genus must be >= 1, got {g}")
    omega = omega or standard_form(g)
    rng = random.Random(seed)
    gens = sp_generators(omega)
    inverses = [inverse_integral(M) for M in gens]
    M = identity(2 * g)
    for _ in range(4 * g if steps is None else steps):
        k = rng.randrange(len(gens))
        M = mat_mul(M, gens[k] if rng.random() < 0.5 else inverses[k])
    return M
