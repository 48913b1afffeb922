"""
Nilpotent quotients of the surface group.

The surface group is the free group on x1..x2g modulo one relator R whose
Magnus expansion starts in degree 2 with a unimodular class omega.  Its
graded Lie algebra is the free Lie algebra modulo the ideal generated by
omega; in each degree n the ideal is spanned by the left-normed brackets
[[omega, x_i1], ..., x_i(n-2)] and kept as an IntegerLattice in Lyndon
coordinates.

Usage:
    quotient = SurfaceQuotient(2, 4)
    quotient.coordinates(word, 3)        # canonical N_3 coordinates
    quotient.reduce(lie_element)         # canonical coset representative
"""

import itertools
import logging
from functools import cached_property
from threading import RLock
from typing import Dict, List, Optional, Sequence, Tuple

from cachetools import LRUCache

from ..cache import TableCache, get_table_cache, table_key
from ..errors import InputError, VerificationError
from ..lattice import IntegerLattice, IntMatrix, determinant
from ..marking import NonUnimodular, standard_form
from .lie import (
    LieElement,
    NotInGammaK,
    free_lie_rank,
    leading_lie_term,
    lyndon_basis,
    standard_factorization,
    surface_rank,
)
from .magnus import magnus
from .words import FreeWord, commutator, product

logger = logging.getLogger(__name__)

Coordinates = Tuple[Tuple[int, ...], ...]


class DegreeTooHigh(InputError):
    def __init__(self, degree: int, bound: int):
        self.degree = degree
        self.bound = bound
        super().__init__(f"degree {degree} exceeds the configured bound {bound}")


class QuotientRankMismatch(VerificationError):
    def __init__(self, degree: int, found: int, expected: int):
        self.degree = degree
        self.found = found
        self.expected = expected
        super().__init__(f"degree {degree}: quotient rank {found}, expected {expected}")


def relator_from_form(omega: IntMatrix) -> FreeWord:
    """prod_{i<j} [x_i, x_j]^omega[i][j], whose leading Lie term is the class of omega."""
    r = len(omega)
    factors = []
    for i in range(r):
        for j in range(i + 1, r):
            if omega[i][j]:
                c = commutator(FreeWord.generator(i + 1, r), FreeWord.generator(j + 1, r))
                factors.append(c ** omega[i][j])
    return product(factors, r)


def form_of(omega_lie: LieElement) -> IntMatrix:
    """Alternating matrix of a degree-2 Lie element; Lyndon word (i, j) is [x_i, x_j]."""
    r = omega_lie.rank
    rows = [[0] * r for _ in range(r)]
    for (i, j), c in zip(lyndon_basis(r, 2), omega_lie.coords):
        rows[i - 1][j - 1] = c
        rows[j - 1][i - 1] = -c
    return tuple(tuple(row) for row in rows)


def basic_commutator(word: Sequence[int], rank: int) -> FreeWord:
    """Group commutator following the standard bracketing of a Lyndon word."""
    word = tuple(word)
    if len(word) == 1:
        return FreeWord.generator(word[0], rank)
    u, v = standard_factorization(word)
    return commutator(basic_commutator(u, rank), basic_commutator(v, rank))


_lattice_memo: LRUCache = LRUCache(maxsize=64)
_lattice_lock = RLock()


class SurfaceQuotient:
    """Graded quotients of pi_1 of a genus-g surface up to Lie degree K."""

    def __init__(self, g: int, K: int, relator: Optional[FreeWord] = None,
                 omega: Optional[IntMatrix] = None, cache: Optional[TableCache] = None):
        if g < 1:
            raise InputError(f"genus must be at least 1, got {g}")
        if K < 1:
            raise InputError(f"degree bound must be at least 1, got {K}")
        self.g = g
        self.K = K
        self.rank = 2 * g
        if relator is not None:
            relator = relator.with_rank(self.rank)
            self.omega_lie = leading_lie_term(relator, 1)
            self.omega = form_of(self.omega_lie)
        else:
            self.omega = tuple(tuple(row) for row in (omega or standard_form(g)))
            relator = relator_from_form(self.omega)
            self.omega_lie = leading_lie_term(relator, 1)
        det = determinant(self.omega)
        if abs(det) != 1:
            raise NonUnimodular(det)
        self.relator = relator
        self._cache = cache

    def __repr__(self) -> str:
        return f"SurfaceQuotient(g={self.g}, K={self.K})"

    @property
    def key(self) -> str:
        return table_key("surface", self.g, self.K, [list(row) for row in self.omega])

    def ideal_sequences(self, n: int) -> List[Tuple[int, ...]]:
        if n < 2:
            return []
        return list(itertools.product(range(1, self.rank + 1), repeat=n - 2))

    def _ideal_generators(self, n: int) -> List[Tuple[int, ...]]:
        out = []
        for seq in self.ideal_sequences(n):
            element = self.omega_lie
            for i in seq:
                element = element.bracket(LieElement.generator(i, self.rank))
            out.append(element.coords)
        return out

    def _build_lattices(self) -> Dict[int, IntegerLattice]:
        lattices = {1: IntegerLattice([], self.rank)}
        for n in range(2, self.K + 1):
            dim = free_lie_rank(self.rank, n)
            lattice = IntegerLattice(self._ideal_generators(n), dim)
            found, expected = dim - lattice.rank, surface_rank(self.g, n)
            if found != expected:
                raise QuotientRankMismatch(n, found, expected)
            torsion = lattice.quotient_torsion()
            if torsion:
                logger.warning(f"⚠️ degree {n} quotient has torsion {torsion}")
            lattices[n] = lattice
            logger.debug(f"degree {n}: L_n rank {dim}, ideal rank {lattice.rank}")
        return lattices

    @cached_property
    def lattices(self) -> Dict[int, IntegerLattice]:
        key = self.key
        with _lattice_lock:
            if key in _lattice_memo:
                return _lattice_memo[key]
        cache = self._cache or get_table_cache()
        stored = cache.get_json(key)
        if stored:
            lattices = {int(n): IntegerLattice.from_tables(t["dim"], t["generators"], t["basis"], t["snf"])
                        for n, t in stored.items()}
            logger.debug(f"loaded surface tables g={self.g} K={self.K} from cache")
        else:
            lattices = self._build_lattices()
            cache.set_json(key, {str(n): lat.tables() for n, lat in lattices.items()})
            logger.info(f"built surface tables g={self.g} K={self.K}")
        with _lattice_lock:
            _lattice_memo[key] = lattices
        return lattices

    def _lattice(self, n: int) -> IntegerLattice:
        if n > self.K:
            raise DegreeTooHigh(n, self.K)
        return self.lattices[n]

    def rank_report(self) -> List[Dict[str, object]]:
        rows = []
        for n in range(1, self.K + 1):
            lattice = self._lattice(n)
            rows.append({
                "degree": n,
                "free_rank": lattice.dim,
                "ideal_rank": lattice.rank,
                "quotient_rank": lattice.dim - lattice.rank,
                "expected": surface_rank(self.g, n),
                "torsion": list(lattice.quotient_torsion()),
            })
        return rows

    def reduce(self, x: LieElement) -> LieElement:
        """Canonical representative of x modulo the ideal; idempotent."""
        if x.rank != self.rank:
            raise InputError(f"Lie element over {x.rank} letters in a genus-{self.g} quotient")
        lattice = self._lattice(x.degree)
        return LieElement(x.rank, x.degree, lattice.reduce(x.coords))

    def in_ideal(self, x: LieElement) -> bool:
        return self.reduce(x).is_zero()

    def relator_commutator(self, seq: Sequence[int]) -> FreeWord:
        """[[R, x_i1], ..., x_im]; its leading term is the matching ideal generator."""
        out = self.relator
        for i in seq:
            out = commutator(out, FreeWord.generator(i, self.rank))
        return out

    def coordinates(self, word: FreeWord, k: int) -> Coordinates:
        """
        Canonical coordinates of the image of `word` in N_k = pi / Gamma_k.

        Degree by degree: the Lie class is reduced to its coset representative,
        the ideal part is solved over Z, and both are divided off with group
        words of the same leading term.
        """
        if k > self.K:
            raise DegreeTooHigh(k, self.K)
        u = word.with_rank(self.rank)
        out = []
        for n in range(1, k + 1):
            series = magnus(u, n)
            lie = LieElement.from_polynomial(series.component(n), self.rank, n)
            lattice = self._lattice(n)
            rep = lattice.reduce(lie.coords)
            ideal_part = tuple(a - b for a, b in zip(lie.coords, rep))
            coeffs = lattice.solve(ideal_part)
            if coeffs is None:
                raise VerificationError(f"degree {n}: reduction left the ideal lattice")
            factors = [basic_commutator(w, self.rank) ** c
                       for w, c in zip(lyndon_basis(self.rank, n), rep) if c]
            factors += [self.relator_commutator(seq) ** c
                        for seq, c in zip(self.ideal_sequences(n), coeffs) if c]
            u = product(factors, self.rank).inverse() * u
            out.append(rep)
        return tuple(out)

    def equal(self, w1: FreeWord, w2: FreeWord, k: int) -> bool:
        """Equality in N_k of the surface group."""
        return not any(any(c) for c in self.coordinates(w1 * w2.inverse(), k))

    def graded_class(self, word: FreeWord, k: int) -> LieElement:
        """Reduced class of a word of Gamma_k in Gamma_k / Gamma_{k+1} (Lie degree k+1)."""
        coords = self.coordinates(word, k + 1)
        if any(any(c) for c in coords[:k]):
            raise NotInGammaK(str(word), k)
        return LieElement(self.rank, k + 1, coords[k])


def surface_reduce(x: LieElement, q: SurfaceQuotient) -> LieElement:
    return q.reduce(x)
