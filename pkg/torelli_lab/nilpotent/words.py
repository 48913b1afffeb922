"""
Reduced words in the free group on x1..xr.

Letters are signed ints: i stands for x_i and -i for its inverse.  The text
form writes x_i as ``x<i>`` and its inverse as ``X<i>``, separated by spaces;
the identity is ``1``.
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from ..errors import InputError


def _reduce(letters: Iterable[int]) -> Tuple[int, ...]:
    out: List[int] = []
    for a in letters:
        if a == 0:
            raise InputError("0 is not a free group letter")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class FreeWord:
    letters: Tuple[int, ...]
    rank: int

    def __post_init__(self):
        reduced = _reduce(self.letters)
        if reduced != self.letters:
            object.__setattr__(self, "letters", reduced)
        if any(abs(a) > self.rank for a in self.letters):
            raise InputError(f"letter outside the free group of rank {self.rank}")

    @classmethod
    def identity(cls, rank: int) -> "FreeWord":
        return cls((), rank)

    @classmethod
    def generator(cls, i: int, rank: int) -> "FreeWord":
        """x_i (1-based); a negative i gives the inverse."""
        return cls((i,), rank)

    @classmethod
    def parse(cls, text: str, rank: int) -> "FreeWord":
        letters = []
        for token in text.split():
            if token == "1":
                continue
            if len(token) < 2 or token[0] not in "xX" or not token[1:].isdigit():
                raise InputError(f"bad free group letter {token!r}")
            i = int(token[1:])
            letters.append(i if token[0] == "x" else -i)
        return cls(tuple(letters), rank)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"x{a}" if a > 0 else f"X{-a}" for a in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters, max(self.rank, other.rank))

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple(-a for a in reversed(self.letters)), self.rank)

    __invert__ = inverse

    def __pow__(self, n: int) -> "FreeWord":
        if n == 0:
            return FreeWord.identity(self.rank)
        if n < 0:
            return self.inverse() ** -n
        half = self ** (n // 2)
        out = half * half
        return out * self if n % 2 else out

    def conjugate(self, by: "FreeWord") -> "FreeWord":
        """by * self * by^-1."""
        return by * self * by.inverse()

    def exponent_sums(self) -> Tuple[int, ...]:
        out = [0] * self.rank
        for a in self.letters:
            out[abs(a) - 1] += 1 if a > 0 else -1
        return tuple(out)

    def with_rank(self, rank: int) -> "FreeWord":
        return FreeWord(self.letters, rank)

    def cyclically_reduced(self) -> "FreeWord":
        letters = list(self.letters)
        while len(letters) > 1 and letters[0] == -letters[-1]:
            letters = letters[1:-1]
        return FreeWord(tuple(letters), self.rank)

    def is_conjugate(self, other: "FreeWord") -> bool:
        """Conjugacy in a free group: cyclic reductions are rotations of each other."""
        a = self.cyclically_reduced().letters
        b = other.cyclically_reduced().letters
        if len(a) != len(b):
            return False
        if not a:
            return True
        doubled = a + a
        return any(doubled[i:i + len(b)] == b for i in range(len(a)))


def commutator(a: FreeWord, b: FreeWord) -> FreeWord:
    """[a, b] = a b a^-1 b^-1."""
    return a * b * a.inverse() * b.inverse()


def product(words: Sequence[FreeWord], rank: int) -> FreeWord:
    out = FreeWord.identity(rank)
    for w in words:
        out = out * w
    return out
