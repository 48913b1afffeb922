"""Orbifold Euler characteristic of a complete census."""

from fractions import Fraction
from typing import Optional

from sympy import bernoulli

from ..marking import sp_order
from .presentation import IncompleteCensus
from .records import OrbitDatabase


def orbifold_euler(db: OrbitDatabase) -> Fraction:
    """Sum over records of (-1)^codim / |Aut|; the top cells have even dimension 6g-4."""
    if not len(db):
        raise IncompleteCensus("no records")
    if not db.complete or db.max_codim < db.full_codim:
        raise IncompleteCensus(f"needs codimension {db.full_codim}, census reaches {db.max_codim}")
    return sum((Fraction((-1) ** r.codim, r.aut_count) for r in db), Fraction(0))


def expected_euler(g: int, N: Optional[int] = None) -> Fraction:
    """zeta(1-2g) = -B_2g / 2g, times |Sp(2g, Z/N)| for the level-N cover."""
    b = bernoulli(2 * g)
    chi = -Fraction(int(b.p), int(b.q)) / (2 * g)
    return chi * sp_order(g, N) if N else chi
