"""
Exact integer linear algebra on top of sympy's normal forms.

Matrices travel through the package as tuples of integer rows (IntMatrix);
sympy is only touched here, for determinants, inverses, Hermite and Smith
normal forms.

Usage:
    lattice = IntegerLattice([(2, 0), (1, 1)], dim=2)
    lattice.reduce((3, 1))     # canonical coset representative
    lattice.solve((3, 1))      # integer coefficients over the generators
"""

import logging
from math import gcd
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import (
    hermite_normal_form,
    invariant_factors,
    smith_normal_decomp,
)

from .errors import InputError, VerificationError

logger = logging.getLogger(__name__)

IntVector = Tuple[int, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]


def to_sympy(rows: Sequence[Sequence[int]]) -> Matrix:
    return Matrix([list(r) for r in rows])


def from_sympy(m: Matrix) -> IntMatrix:
    return tuple(tuple(int(m[i, j]) for j in range(m.cols)) for i in range(m.rows))


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(rows: IntMatrix) -> IntMatrix:
    return tuple(zip(*rows)) if rows else ()


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: IntMatrix, v: Sequence[int]) -> IntVector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def bilinear(form: IntMatrix, u: Sequence[int], v: Sequence[int]) -> int:
    """u^T form v."""
    return sum(u[i] * sum(form[i][j] * v[j] for j in range(len(v))) for i in range(len(u)))


def determinant(rows: IntMatrix) -> int:
    if not rows:
        return 1
    return int(to_sympy(rows).det())


def inverse_integral(rows: IntMatrix) -> Optional[IntMatrix]:
    """Inverse over Z, or None when the matrix is not unimodular."""
    det = determinant(rows)
    if abs(det) != 1:
        return None
    inv = to_sympy(rows).inv()
    return from_sympy(inv)


def columns_matrix(columns: Sequence[Sequence[int]], dim: int) -> Matrix:
    if not columns:
        return Matrix.zeros(dim, 0)
    return Matrix([[int(col[i]) for col in columns] for i in range(dim)])


def span_invariants(vectors: Sequence[Sequence[int]], dim: int) -> List[int]:
    """Invariant factors of the lattice spanned by ``vectors`` inside Z^dim."""
    if not vectors or dim == 0:
        return []
    factors = invariant_factors(columns_matrix(vectors, dim), domain=ZZ)
    return [abs(int(f)) for f in factors if int(f) != 0]


def spans_everything(vectors: Sequence[Sequence[int]], dim: int, modulus: Optional[int] = None) -> bool:
    """True iff the vectors generate Z^dim (or (Z/N)^dim when a modulus is given)."""
    factors = span_invariants(vectors, dim)
    if len(factors) != dim:
        return False
    if modulus is None:
        return all(f == 1 for f in factors)
    return all(gcd(f, modulus) == 1 for f in factors)


def solve_exact(a: IntMatrix, b: IntMatrix) -> Optional[IntMatrix]:
    """The unique X with a X = b when a has full column rank and X is integral."""
    A = to_sympy(a)
    B = to_sympy(b)
    try:
        sol, params = A.gauss_jordan_solve(B)
    except ValueError:
        return None
    if params.shape[0] != 0:
        return None
    for entry in sol:
        if not entry.is_integer:
            return None
    return from_sympy(sol)


class IntegerLattice:
    """
    Sublattice of Z^dim spanned by a list of generators.

    Coset representatives come from the column-style Hermite normal form; integer
    coefficients over the original generators come from the Smith decomposition
    a = s * G * t.
    """

    def __init__(self, generators: Sequence[Sequence[int]], dim: int):
        self.dim = dim
        self.generators: Tuple[IntVector, ...] = tuple(tuple(int(x) for x in g) for g in generators)
        self._basis: List[Tuple[int, IntVector]] = []
        self._snf = None
        nonzero = [g for g in self.generators if any(g)]
        if nonzero:
            hnf = hermite_normal_form(columns_matrix(nonzero, dim))
            basis = []
            for j in range(hnf.cols):
                col = tuple(int(hnf[i, j]) for i in range(dim))
                pivots = [i for i in range(dim) if col[i] != 0]
                if not pivots:
                    continue
                p = pivots[-1]
                if col[p] < 0:
                    col = tuple(-x for x in col)
                basis.append((p, col))
            basis.sort(key=lambda item: -item[0])
            if len({p for p, _ in basis}) != len(basis):
                raise VerificationError("Hermite basis has repeated pivot rows")
            self._basis = basis

    @classmethod
    def from_tables(cls, dim: int, generators, basis, snf) -> "IntegerLattice":
        """Rebuild a lattice from cached tables without recomputing normal forms."""
        lattice = cls.__new__(cls)
        lattice.dim = dim
        lattice.generators = tuple(tuple(g) for g in generators)
        lattice._basis = [(int(p), tuple(col)) for p, col in basis]
        lattice._snf = None if snf is None else (
            tuple(snf["diagonal"]),
            tuple(tuple(r) for r in snf["left"]),
            tuple(tuple(r) for r in snf["right"]),
        )
        return lattice

    def tables(self) -> dict:
        self._ensure_snf()
        diagonal, left, right = self._snf if self._snf else ((), (), ())
        return {
            "dim": self.dim,
            "generators": [list(g) for g in self.generators],
            "basis": [[p, list(col)] for p, col in self._basis],
            "snf": {"diagonal": list(diagonal), "left": [list(r) for r in left],
                    "right": [list(r) for r in right]},
        }

    @property
    def rank(self) -> int:
        return len(self._basis)

    @property
    def pivot_rows(self) -> Tuple[int, ...]:
        return tuple(sorted(p for p, _ in self._basis))

    def reduce(self, v: Sequence[int]) -> IntVector:
        if len(v) != self.dim:
            raise InputError(f"vector of length {len(v)} in a lattice of dimension {self.dim}")
        out = list(v)
        for p, col in self._basis:
            q = out[p] // col[p]
            if q:
                for i in range(p + 1):
                    out[i] -= q * col[i]
        return tuple(out)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def _ensure_snf(self) -> None:
        if self._snf is not None or not self.generators:
            return
        a, s, t = smith_normal_decomp(columns_matrix(self.generators, self.dim), domain=ZZ)
        k = min(a.rows, a.cols)
        diagonal = tuple(int(a[i, i]) for i in range(k))
        self._snf = (diagonal, from_sympy(s), from_sympy(t))

    def quotient_torsion(self) -> Tuple[int, ...]:
        """Nontrivial finite invariant factors of Z^dim / lattice."""
        self._ensure_snf()
        if not self._snf:
            return ()
        return tuple(abs(d) for d in self._snf[0] if abs(d) > 1)

    def solve(self, v: Sequence[int]) -> Optional[IntVector]:
        """Integer c with sum_i c_i generators[i] == v, or None if v is outside the lattice."""
        if not any(v):
            return tuple(0 for _ in self.generators)
        if not self.generators:
            return None
        self._ensure_snf()
        diagonal, s, t = self._snf
        sv = mat_vec(s, v)
        reduced = [0] * len(self.generators)
        for i, value in enumerate(sv):
            d = diagonal[i] if i < len(diagonal) else 0
            if d == 0:
                if value != 0:
                    return None
                continue
            if value % d:
                return None
            reduced[i] = value // d
        return mat_vec(t, reduced)
