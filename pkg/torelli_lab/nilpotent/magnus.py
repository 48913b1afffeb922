"""
Truncated Magnus expansion of free group words.

x_i -> 1 + X_i and x_i^-1 -> 1 - X_i + X_i^2 - ..., in noncommuting X_1..X_r,
dropping everything above degree K.  Monomials are tuples of 1-based letters.

Grading: Gamma_0 is the whole group and w lies in Gamma_k exactly when its
expansion has no terms in degrees 1..k, so Gamma_k/Gamma_{k+1} shows up in
degree k+1.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from ..errors import InputError
from .words import FreeWord

Monomial = Tuple[int, ...]
Polynomial = Dict[Monomial, int]


def poly_add(p: Polynomial, q: Polynomial, scale: int = 1) -> Polynomial:
    out = dict(p)
    for mono, c in q.items():
        value = out.get(mono, 0) + scale * c
        if value:
            out[mono] = value
        else:
            out.pop(mono, None)
    return out


def poly_mul(p: Polynomial, q: Polynomial, K: Optional[int] = None) -> Polynomial:
    out: Polynomial = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            if K is not None and len(m1) + len(m2) > K:
                continue
            mono = m1 + m2
            out[mono] = out.get(mono, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def poly_bracket(p: Polynomial, q: Polynomial) -> Polynomial:
    """pq - qp."""
    return poly_add(poly_mul(p, q), poly_mul(q, p), scale=-1)


@dataclass(frozen=True)
class MagnusSeries:
    rank: int
    K: int
    terms: Dict[Monomial, int] = field(default_factory=lambda: {(): 1}, hash=False)

    def coefficient(self, mono: Monomial) -> int:
        return self.terms.get(tuple(mono), 0)

    def component(self, n: int) -> Polynomial:
        """Homogeneous part of degree n."""
        return {m: c for m, c in self.terms.items() if len(m) == n}

    def lowest_degree(self) -> Optional[int]:
        """Lowest degree >= 1 with a nonzero term; None when the series is 1 up to K."""
        degrees = [len(m) for m, c in self.terms.items() if m and c]
        return min(degrees) if degrees else None

    def is_one(self) -> bool:
        return self.lowest_degree() is None and self.terms.get((), 0) == 1

    def __mul__(self, other: "MagnusSeries") -> "MagnusSeries":
        K = min(self.K, other.K)
        return MagnusSeries(max(self.rank, other.rank), K, poly_mul(self.terms, other.terms, K))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MagnusSeries):
            return NotImplemented
        return self.K == other.K and self.terms == other.terms

    def __str__(self) -> str:
        parts = []
        for mono in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[mono]
            name = "".join(f"X{i}" for i in mono) or "1"
            parts.append(f"{c:+d}*{name}" if mono else f"{c:+d}")
        return " ".join(parts)


def _letter_series(a: int, K: int) -> Polynomial:
    i = abs(a)
    if a > 0:
        return {(): 1, (i,): 1}
    return {(i,) * n: (-1) ** n for n in range(K + 1)}


def magnus(w: FreeWord, K: int) -> MagnusSeries:
    if K < 1:
        raise InputError(f"truncation degree must be at least 1, got {K}")
    terms: Polynomial = {(): 1}
    for a in w.letters:
        terms = poly_mul(terms, _letter_series(a, K), K)
    return MagnusSeries(w.rank, K, terms)


def in_gamma(w: FreeWord, k: int) -> bool:
    """w in Gamma_k of the free group (degrees 1..k of the expansion vanish)."""
    if k <= 0:
        return True
    return magnus(w, k).lowest_degree() is None


def free_nilpotent_equal(w1: FreeWord, w2: FreeWord, k: int) -> bool:
    """Equality in N_k = F / Gamma_k."""
    if k < 1:
        raise InputError(f"nilpotency level must be at least 1, got {k}")
    return in_gamma(w1 * w2.inverse(), k)
