"""
================================================================================
torelli-lab - Exterior algebra over Z
================================================================================
Wedge3 is an element of Lambda^3 H; MultiWedge an element of
Lambda^m(Lambda^3 H), written over the lexicographically ordered basis
triples of Lambda^3 H.  Coefficients are Python ints, so nothing overflows.

Contractions pair tensor slots with an intersection form omega along the
edges of a trivalent pairing graph.  The theta graph and the two-loop graph
give the closed forms

    C2((a1^a2^a3)^(b1^b2^b3)) = 6 det(a_p . b_q)
    C1((a1^a2^a3)^(b1^b2^b3)) = 4 alpha(a) . alpha(b)
        alpha(v) = (v1.v2) v3 - (v1.v3) v2 + (v2.v3) v1

USAGE:
    w = wedge3(a, b, c)
    x = MultiWedge.from_wedge3(w) ^ MultiWedge.from_wedge3(w2)
    contract_C2(x, omega)
================================================================================
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import InputError, ParseError, VerificationError
from .lattice import IntMatrix, bilinear, mat_vec

logger = logging.getLogger(__name__)

Triple = Tuple[int, int, int]


class DimensionMismatch(InputError):
    def __init__(self, left: int, right: int):
        super().__init__(f"dimension mismatch: {left} vs {right}")


class WrongGrade(InputError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"expected grade {expected}, got {got}")


class GradeMismatch(InputError):
    def __init__(self, vertices: int, grade: int):
        super().__init__(f"pairing graph has {vertices} vertices but the element has grade {grade}")


class NonIntegralContraction(VerificationError):
    def __init__(self, graph: str, total: int, orders: int):
        self.total = total
        self.orders = orders
        super().__init__(f"contraction along {graph}: {total} is not divisible by {orders}")


def permutation_sign(seq: Sequence) -> int:
    """Sign of the permutation sorting seq (0 if seq has repeats)."""
    items = list(seq)
    if len(set(items)) != len(items):
        return 0
    sign = 1
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def basis_triples(dim: int) -> Tuple[Triple, ...]:
    return tuple(combinations(range(dim), 3))


@lru_cache(maxsize=None)
def _triple_positions(dim: int) -> Dict[Triple, int]:
    return {t: i for i, t in enumerate(basis_triples(dim))}


def triple_index(t: Triple, dim: int) -> int:
    return _triple_positions(dim)[t]


# =============================================================================
# LAMBDA^3 H
# =============================================================================

@dataclass(frozen=True)
class Wedge3:
    dim: int
    terms: Tuple[Tuple[Triple, int], ...] = ()

    @classmethod
    def zero(cls, dim: int) -> "Wedge3":
        return cls(dim, ())

    @classmethod
    def from_dict(cls, dim: int, coeffs: Mapping[Triple, int]) -> "Wedge3":
        acc: Dict[Triple, int] = {}
        for t, c in coeffs.items():
            sign = permutation_sign(t)
            if sign == 0 or c == 0:
                continue
            key = tuple(sorted(t))
            if key[-1] >= dim or key[0] < 0:
                raise InputError(f"index triple {t} outside dimension {dim}")
            acc[key] = acc.get(key, 0) + sign * c
        return cls(dim, tuple(sorted((t, c) for t, c in acc.items() if c)))

    @classmethod
    def basis(cls, i: int, j: int, k: int, dim: int) -> "Wedge3":
        return cls.from_dict(dim, {(i, j, k): 1})

    def as_dict(self) -> Dict[Triple, int]:
        return dict(self.terms)

    def coefficient(self, i: int, j: int, k: int) -> int:
        sign = permutation_sign((i, j, k))
        if sign == 0:
            return 0
        return sign * self.as_dict().get(tuple(sorted((i, j, k))), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _check(self, other: "Wedge3") -> None:
        if self.dim != other.dim:
            raise DimensionMismatch(self.dim, other.dim)

    def __add__(self, other: "Wedge3") -> "Wedge3":
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        acc = self.as_dict()
        for t, c in other.terms:
            acc[t] = acc.get(t, 0) + c
        return Wedge3.from_dict(self.dim, acc)

    __radd__ = __add__

    def __neg__(self) -> "Wedge3":
        return Wedge3(self.dim, tuple((t, -c) for t, c in self.terms))

    def __sub__(self, other: "Wedge3") -> "Wedge3":
        return self + (-other)

    def __mul__(self, scalar: int) -> "Wedge3":
        if scalar == 0:
            return Wedge3.zero(self.dim)
        return Wedge3(self.dim, tuple((t, c * scalar) for t, c in self.terms))

    __rmul__ = __mul__

    def content(self) -> int:
        """gcd of the coefficients (0 for the zero element)."""
        out = 0
        for _, c in self.terms:
            out = gcd(out, c)
        return out

    def transform(self, M: IntMatrix) -> "Wedge3":
        """Apply M slotwise: e_i^e_j^e_k -> Me_i^Me_j^Me_k."""
        if len(M) != self.dim:
            raise DimensionMismatch(self.dim, len(M))
        columns = [tuple(M[r][c] for r in range(self.dim)) for c in range(self.dim)]
        out = Wedge3.zero(self.dim)
        for (i, j, k), c in self.terms:
            out = out + c * wedge3(columns[i], columns[j], columns[k])
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = [f"{c}*e{i + 1}^e{j + 1}^e{k + 1}" for (i, j, k), c in self.terms]
        return " + ".join(parts).replace("+ -", "- ")


def wedge3(a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> Wedge3:
    """a^b^c in the sorted-triple basis: coefficient = 3x3 minor on rows (i,j,k)."""
    n = len(a)
    if len(b) != n or len(c) != n:
        raise DimensionMismatch(n, len(b) if len(b) != n else len(c))
    terms = []
    for i, j, k in basis_triples(n):
        minor = (
            a[i] * (b[j] * c[k] - b[k] * c[j])
            - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
        )
        if minor:
            terms.append(((i, j, k), minor))
    return Wedge3(n, tuple(terms))


# =============================================================================
# LAMBDA^m (LAMBDA^3 H)
# =============================================================================

@dataclass(frozen=True)
class MultiWedge:
    dim: int
    grade: int
    terms: Tuple[Tuple[Tuple[int, ...], int], ...] = ()

    @classmethod
    def zero(cls, dim: int, grade: int) -> "MultiWedge":
        return cls(dim, grade, ())

    @classmethod
    def one(cls, dim: int) -> "MultiWedge":
        return cls(dim, 0, (((), 1),))

    @classmethod
    def from_dict(cls, dim: int, grade: int, coeffs: Mapping[Tuple[int, ...], int]) -> "MultiWedge":
        acc: Dict[Tuple[int, ...], int] = {}
        for key, c in coeffs.items():
            if len(key) != grade:
                raise WrongGrade(grade, len(key))
            sign = permutation_sign(key)
            if sign == 0 or c == 0:
                continue
            k = tuple(sorted(key))
            acc[k] = acc.get(k, 0) + sign * c
        return cls(dim, grade, tuple(sorted((k, c) for k, c in acc.items() if c)))

    @classmethod
    def from_wedge3(cls, w: Wedge3) -> "MultiWedge":
        return cls(w.dim, 1, tuple(((triple_index(t, w.dim),), c) for t, c in w.terms))

    def as_dict(self) -> Dict[Tuple[int, ...], int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "MultiWedge") -> "MultiWedge":
        if isinstance(other, int) and other == 0:
            return self
        if self.dim != other.dim:
            raise DimensionMismatch(self.dim, other.dim)
        if self.grade != other.grade:
            raise WrongGrade(self.grade, other.grade)
        acc = self.as_dict()
        for k, c in other.terms:
            acc[k] = acc.get(k, 0) + c
        return MultiWedge.from_dict(self.dim, self.grade, acc)

    __radd__ = __add__

    def __neg__(self) -> "MultiWedge":
        return MultiWedge(self.dim, self.grade, tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "MultiWedge") -> "MultiWedge":
        return self + (-other)

    def __mul__(self, scalar: int) -> "MultiWedge":
        if scalar == 0:
            return MultiWedge.zero(self.dim, self.grade)
        return MultiWedge(self.dim, self.grade, tuple((k, c * scalar) for k, c in self.terms))

    __rmul__ = __mul__

    def __xor__(self, other: "MultiWedge") -> "MultiWedge":
        return wedge_product(self, other)

    def factors(self, key: Tuple[int, ...]) -> List[Triple]:
        triples = basis_triples(self.dim)
        return [triples[i] for i in key]

    def transform(self, M: IntMatrix) -> "MultiWedge":
        if len(M) != self.dim:
            raise DimensionMismatch(self.dim, len(M))
        triples = basis_triples(self.dim)
        out = MultiWedge.zero(self.dim, self.grade)
        cache: Dict[int, MultiWedge] = {}
        for key, c in self.terms:
            acc = MultiWedge.one(self.dim)
            for idx in key:
                if idx not in cache:
                    cache[idx] = MultiWedge.from_wedge3(Wedge3.basis(*triples[idx], self.dim).transform(M))
                acc = acc ^ cache[idx]
            out = out + c * acc
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        triples = basis_triples(self.dim)
        parts = []
        for key, c in self.terms:
            names = " ^ ".join("e" + "".join(str(i + 1) for i in triples[t]) for t in key)
            parts.append(f"{c}*({names})")
        return " + ".join(parts).replace("+ -", "- ")


def wedge_product(u: MultiWedge, v: MultiWedge) -> MultiWedge:
    """Exterior product in Lambda(Lambda^3 H); swapping two slots flips the sign."""
    if u.dim != v.dim:
        raise DimensionMismatch(u.dim, v.dim)
    acc: Dict[Tuple[int, ...], int] = {}
    for ku, cu in u.terms:
        for kv, cv in v.terms:
            key = ku + kv
            sign = permutation_sign(key)
            if sign == 0:
                continue
            k = tuple(sorted(key))
            acc[k] = acc.get(k, 0) + sign * cu * cv
    return MultiWedge(u.dim, u.grade + v.grade, tuple(sorted((k, c) for k, c in acc.items() if c)))


def wedge_all(parts: Iterable[Wedge3], dim: int) -> MultiWedge:
    out = MultiWedge.one(dim)
    for w in parts:
        out = out ^ MultiWedge.from_wedge3(w)
    return out


# =============================================================================
# CONTRACTIONS
# =============================================================================

Slot = Tuple[int, int]


@dataclass(frozen=True)
class PairingGraph:
    """Trivalent graph on `vertices` vertices; each edge joins two (vertex, slot) positions."""
    vertices: int
    edges: Tuple[Tuple[Slot, Slot], ...]
    name: str = ""

    def __post_init__(self):
        seen = sorted(s for edge in self.edges for s in edge)
        expected = [(v, s) for v in range(self.vertices) for s in range(3)]
        if seen != expected:
            raise InputError(f"pairing graph {self.name or '?'} is not trivalent on {self.vertices} vertices")

    @classmethod
    def parse(cls, text: str, source: str = "<pgraph>") -> "PairingGraph":
        lines = [(n, ln.split()) for n, ln in enumerate(text.splitlines(), 1) if ln.strip() and not ln.startswith("#")]
        if not lines or lines[0][1][0] != "pgraph" or len(lines[0][1]) != 2:
            raise ParseError(source, 1, "expected header 'pgraph <2k>'")
        try:
            vertices = int(lines[0][1][1])
            edges = []
            for line_no, parts in lines[1:]:
                if parts[0] != "edge" or len(parts) != 5:
                    raise ParseError(source, line_no, "expected 'edge <v> <slot> <v> <slot>'")
                v1, s1, v2, s2 = (int(p) for p in parts[1:])
                edges.append(((v1, s1), (v2, s2)))
        except ValueError as exc:
            raise ParseError(source, None, str(exc)) from None
        try:
            return cls(vertices, tuple(edges), name=source)
        except InputError as exc:
            raise ParseError(source, None, str(exc)) from None

    def to_text(self) -> str:
        lines = [f"pgraph {self.vertices}"]
        lines += [f"edge {a} {b} {c} {d}" for (a, b), (c, d) in self.edges]
        return "\n".join(lines) + "\n"


def theta_graph() -> PairingGraph:
    return PairingGraph(2, (((0, 0), (1, 0)), ((0, 1), (1, 1)), ((0, 2), (1, 2))), name="theta")


def two_loop_graph() -> PairingGraph:
    return PairingGraph(2, (((0, 0), (0, 1)), ((1, 0), (1, 1)), ((0, 2), (1, 2))), name="twoloop")


def _unit(i: int, dim: int) -> Tuple[int, ...]:
    return tuple(1 if k == i else 0 for k in range(dim))


def _require_grade(x: MultiWedge, grade: int) -> None:
    if x.grade != grade:
        raise WrongGrade(grade, x.grade)


def contract_C2(x: MultiWedge, omega: IntMatrix) -> int:
    _require_grade(x, 2)
    triples = basis_triples(x.dim)
    total = 0
    for (t, u), c in x.terms:
        A, B = triples[t], triples[u]
        m = [[omega[p][q] for q in B] for p in A]
        det = (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
        total += 6 * c * det
    return total


def _alpha(omega: IntMatrix, v: Sequence[Sequence[int]]) -> List[int]:
    w12 = bilinear(omega, v[0], v[1])
    w13 = bilinear(omega, v[0], v[2])
    w23 = bilinear(omega, v[1], v[2])
    return [w12 * z - w13 * y + w23 * x for x, y, z in zip(v[0], v[1], v[2])]


def contract_C1(x: MultiWedge, omega: IntMatrix) -> int:
    _require_grade(x, 2)
    triples = basis_triples(x.dim)
    total = 0
    for (t, u), c in x.terms:
        A = [_unit(i, x.dim) for i in triples[t]]
        B = [_unit(i, x.dim) for i in triples[u]]
        total += 4 * c * bilinear(omega, _alpha(omega, A), _alpha(omega, B))
    return total


def _graph_value(graph: PairingGraph, factors: Sequence[Sequence[Sequence[int]]], omega: IntMatrix) -> int:
    """Factor i sits at vertex i; antisymmetrise over the slots at every vertex."""
    perms = list(permutations(range(3)))
    signs = [permutation_sign(p) for p in perms]
    total = 0
    for choice in product(range(6), repeat=graph.vertices):
        sign = 1
        for v, idx in enumerate(choice):
            sign *= signs[idx]
        term = sign
        for (v1, s1), (v2, s2) in graph.edges:
            a = factors[v1][perms[choice[v1]][s1]]
            b = factors[v2][perms[choice[v2]][s2]]
            term *= bilinear(omega, a, b)
            if term == 0:
                break
        total += term
    return total


def contract_graph(graph: PairingGraph, x: MultiWedge, omega: IntMatrix) -> int:
    """
    C_graph(x): every factor order is tried with its sign and the total is
    divided by (2k)!, so the value only depends on x as an element of the
    exterior power.  A remainder raises NonIntegralContraction.  Theta gives contract_C2 and the two-loop graph gives
    contract_C1.
    """
    if graph.vertices != x.grade:
        raise GradeMismatch(graph.vertices, x.grade)
    triples = basis_triples(x.dim)
    orders = list(permutations(range(x.grade)))
    total = 0
    for key, c in x.terms:
        factors = [[_unit(i, x.dim) for i in triples[t]] for t in key]
        acc = 0
        for order in orders:
            acc += permutation_sign(order) * _graph_value(graph, [factors[i] for i in order], omega)
        total += c * acc
    value, remainder = divmod(total, len(orders))
    if remainder:
        raise NonIntegralContraction(graph.name or "pairing graph", total, len(orders))
    return value


# =============================================================================
# LITERAL ORACLES
# =============================================================================

def c2_oracle(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], omega: IntMatrix) -> int:
    """36-term sum of sgn s sgn t (a_s1.b_t1)(a_s2.b_t2)(a_s3.b_t3)."""
    total = 0
    for s in permutations(range(3)):
        for t in permutations(range(3)):
            term = permutation_sign(s) * permutation_sign(t)
            for i in range(3):
                term *= bilinear(omega, a[s[i]], b[t[i]])
            total += term
    return total


def c1_oracle(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], omega: IntMatrix) -> int:
    """36-term sum of sgn s sgn t (a_s1.a_s2)(b_t1.b_t2)(a_s3.b_t3)."""
    total = 0
    for s in permutations(range(3)):
        for t in permutations(range(3)):
            total += (
                permutation_sign(s) * permutation_sign(t)
                * bilinear(omega, a[s[0]], a[s[1]])
                * bilinear(omega, b[t[0]], b[t[1]])
                * bilinear(omega, a[s[2]], b[t[2]])
            )
    return total


def decomposable(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> MultiWedge:
    """(a1^a2^a3) ^ (b1^b2^b3) as a grade-2 element."""
    return MultiWedge.from_wedge3(wedge3(*a)) ^ MultiWedge.from_wedge3(wedge3(*b))


def transform_vectors(M: IntMatrix, vectors: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    return [mat_vec(M, v) for v in vectors]


def pairing_graph_by_name(name: str, text: Optional[str] = None) -> PairingGraph:
    if name == "theta":
        return theta_graph()
    if name == "twoloop":
        return two_loop_graph()
    if text is None:
        raise InputError(f"unknown pairing graph {name!r}")
    return PairingGraph.parse(text, source=name)
