"""
Free Lie algebra on x1..xr in the Lyndon basis.

Each Lyndon word w carries the polynomial P_w of its standard bracketing
(w = uv with v the longest proper Lyndon suffix, P_w = [P_u, P_v]).  P_w is w
plus lexicographically larger words, so a Lie polynomial is converted to
coordinates by repeatedly cancelling its smallest monomial.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from sympy import divisors, factorint

from ..errors import InputError, VerificationError
from .magnus import Monomial, Polynomial, in_gamma, magnus, poly_add, poly_bracket
from .words import FreeWord

logger = logging.getLogger(__name__)


class NotLieElement(VerificationError):
    """Raised when a homogeneous polynomial is not a Lie polynomial."""
    def __init__(self, monomial: Monomial):
        self.monomial = monomial
        super().__init__(f"not a Lie polynomial: leading word {monomial} is not Lyndon")


class NotInGammaK(VerificationError):
    def __init__(self, word: str, k: int):
        self.word = word
        self.k = k
        super().__init__(f"word {word} is not in Gamma_{k}")


def mobius(n: int) -> int:
    factors = factorint(n)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def free_lie_rank(r: int, n: int) -> int:
    """Witt's formula for the rank of the degree-n part of the free Lie algebra on r letters."""
    total = sum(mobius(d) * r ** (n // d) for d in divisors(n))
    return total // n


def surface_rank(g: int, n: int) -> int:
    """Rank of the degree-n part of the free Lie algebra on 2g letters modulo the symplectic ideal."""
    s = [2, 2 * g]
    while len(s) <= n:
        s.append(2 * g * s[-1] - s[-2])
    total = sum(mobius(n // d) * s[d] for d in divisors(n))
    return total // n


def is_lyndon(w: Sequence[int]) -> bool:
    w = tuple(w)
    return bool(w) and all(w < w[i:] for i in range(1, len(w)))


@lru_cache(maxsize=64)
def lyndon_basis(r: int, n: int) -> Tuple[Monomial, ...]:
    """Lyndon words of length n over 1..r, in lexicographic order (Duval's generator)."""
    if r < 1 or n < 1:
        return ()
    out: List[Monomial] = []
    w = [0]
    while w:
        w[-1] += 1
        if len(w) == n:
            out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == r:
            w.pop()
    return tuple(out)


@lru_cache(maxsize=64)
def _basis_index(r: int, n: int) -> Dict[Monomial, int]:
    return {w: i for i, w in enumerate(lyndon_basis(r, n))}


def standard_factorization(w: Monomial) -> Tuple[Monomial, Monomial]:
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise InputError(f"{w} has no standard factorization")


@lru_cache(maxsize=8192)
def lyndon_bracket(w: Monomial) -> str:
    if len(w) == 1:
        return f"x{w[0]}"
    u, v = standard_factorization(w)
    return f"[{lyndon_bracket(u)},{lyndon_bracket(v)}]"


@lru_cache(maxsize=8192)
def _lyndon_poly_items(w: Monomial) -> Tuple[Tuple[Monomial, int], ...]:
    if len(w) == 1:
        return ((w, 1),)
    u, v = standard_factorization(w)
    return tuple(sorted(poly_bracket(lyndon_polynomial(u), lyndon_polynomial(v)).items()))


def lyndon_polynomial(w: Monomial) -> Polynomial:
    return dict(_lyndon_poly_items(tuple(w)))


def lie_coordinates(poly: Polynomial, r: int, n: int) -> Tuple[int, ...]:
    """Coordinates of a homogeneous degree-n Lie polynomial in the Lyndon basis."""
    index = _basis_index(r, n)
    coords = [0] * len(index)
    rest = {m: c for m, c in poly.items() if c}
    if any(len(m) != n for m in rest):
        raise InputError(f"polynomial is not homogeneous of degree {n}")
    while rest:
        lead = min(rest)
        if lead not in index:
            raise NotLieElement(lead)
        c = rest[lead]
        coords[index[lead]] += c
        rest = poly_add(rest, lyndon_polynomial(lead), scale=-c)
    return tuple(coords)


@dataclass(frozen=True)
class LieElement:
    rank: int
    degree: int
    coords: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != len(lyndon_basis(self.rank, self.degree)):
            raise InputError(f"expected {len(lyndon_basis(self.rank, self.degree))} coordinates "
                             f"in degree {self.degree}, got {len(self.coords)}")

    @classmethod
    def zero(cls, rank: int, degree: int) -> "LieElement":
        return cls(rank, degree, (0,) * len(lyndon_basis(rank, degree)))

    @classmethod
    def generator(cls, i: int, rank: int) -> "LieElement":
        return cls.basis_element((i,), rank)

    @classmethod
    def basis_element(cls, word: Sequence[int], rank: int) -> "LieElement":
        word = tuple(word)
        index = _basis_index(rank, len(word))
        if word not in index:
            raise InputError(f"{word} is not a Lyndon word over {rank} letters")
        coords = [0] * len(index)
        coords[index[word]] = 1
        return cls(rank, len(word), tuple(coords))

    @classmethod
    def from_polynomial(cls, poly: Polynomial, rank: int, degree: int) -> "LieElement":
        return cls(rank, degree, lie_coordinates(poly, rank, degree))

    def polynomial(self) -> Polynomial:
        out: Polynomial = {}
        for w, c in zip(lyndon_basis(self.rank, self.degree), self.coords):
            if c:
                out = poly_add(out, lyndon_polynomial(w), scale=c)
        return out

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "LieElement") -> None:
        if (self.rank, self.degree) != (other.rank, other.degree):
            raise InputError("Lie elements of different rank or degree")

    def __add__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        return LieElement(self.rank, self.degree, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        return LieElement(self.rank, self.degree, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LieElement":
        return LieElement(self.rank, self.degree, tuple(-a for a in self.coords))

    def __mul__(self, n: int) -> "LieElement":
        return LieElement(self.rank, self.degree, tuple(n * a for a in self.coords))

    __rmul__ = __mul__

    def bracket(self, other: "LieElement") -> "LieElement":
        degree = self.degree + other.degree
        poly = poly_bracket(self.polynomial(), other.polynomial())
        return LieElement.from_polynomial(poly, max(self.rank, other.rank), degree)

    def as_dict(self) -> Dict[str, int]:
        return {lyndon_bracket(w): c for w, c in zip(lyndon_basis(self.rank, self.degree), self.coords) if c}

    def __str__(self) -> str:
        terms = self.as_dict()
        if not terms:
            return "0"
        return " ".join(f"{c:+d}*{name}" for name, c in terms.items())


def leading_lie_term(w: FreeWord, k: int) -> LieElement:
    """
    Class of w in Gamma_k / Gamma_{k+1}, a Lie element of degree k+1.

    Raises NotInGammaK unless w is in Gamma_k.  A word deeper than Gamma_k gives
    the zero element.
    """
    if k < 0:
        raise InputError(f"filtration level must be nonnegative, got {k}")
    if not in_gamma(w, k):
        raise NotInGammaK(str(w), k)
    series = magnus(w, k + 1)
    return LieElement.from_polynomial(series.component(k + 1), w.rank, k + 1)
