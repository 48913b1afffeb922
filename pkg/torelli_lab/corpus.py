"""
Symbolic identities among 3-forms, checked by evaluation.

Formulas are ASCII: letters are vectors, `^` wedges, a run of letters such as
`abc` is the wedge a^b^c, parentheses hold integer linear combinations of
letters and braces group a sum, e.g.

    -(a+b+d)^a^(a+d) + 2{dca^abc + dab^cdb}

Three vectors make an element of Lambda^3 H, six make an element of
Lambda^2(Lambda^3 H) (first three wedged against the last three).
"""

import logging
import random
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .cocycle import cup_square_on_cell, pentagon_star, verify_cocycle
from .errors import InputError, VerificationError
from .exterior import MultiWedge, Wedge3, wedge3

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]
Value = Union[Wedge3, MultiWedge]
Environment = Dict[str, Vector]

_TOKEN = re.compile(r"\s*(?:(\d+)|([a-z]+)|(.))")


class IdentityFailure(VerificationError):
    def __init__(self, name: str, point: str, detail: str = ""):
        self.name = name
        self.point = point
        message = f"identity {name!r} fails at {point}"
        super().__init__(f"{message}: {detail}" if detail else message)


class FormulaError(InputError):
    def __init__(self, text: str, detail: str):
        self.text = text
        super().__init__(f"cannot read formula {text!r}: {detail}")


def _tokens(text: str) -> List[Tuple[str, str]]:
    out = []
    for number, word, other in _TOKEN.findall(text):
        if number:
            out.append(("int", number))
        elif word:
            out.append(("word", word))
        elif other.strip():
            out.append(("op", other))
    return out


class _Parser:
    """Recursive descent over the token list; evaluates as it goes."""

    def __init__(self, text: str, env: Environment, dim: int):
        self.text = text
        self.tokens = _tokens(text)
        self.pos = 0
        self.env = env
        self.dim = dim

    def peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, op: Optional[str] = None) -> Tuple[str, str]:
        token = self.peek()
        if token is None or (op is not None and token != ("op", op)):
            raise FormulaError(self.text, f"expected {op or 'more input'} at token {self.pos}")
        self.pos += 1
        return token

    def vector(self, letter: str) -> Vector:
        if letter not in self.env:
            raise FormulaError(self.text, f"unknown vector {letter!r}")
        return self.env[letter]

    def parse(self) -> Value:
        value = self.sum()
        if self.peek() is not None:
            raise FormulaError(self.text, f"trailing input at token {self.pos}")
        return value

    def sum(self) -> Value:
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        total = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
            total = total + self.term() * sign
        return total

    def term(self) -> Value:
        scale = 1
        token = self.peek()
        if token and token[0] == "int":
            scale = int(self.take()[1])
            if self.peek() == ("op", "*"):
                self.take("*")
        if self.peek() == ("op", "{"):
            self.take("{")
            value = self.sum()
            self.take("}")
            return value * scale
        return self.product() * scale

    def product(self) -> Value:
        vectors = self.factor()
        while self.peek() == ("op", "^"):
            self.take("^")
            vectors += self.factor()
        if len(vectors) == 3:
            return wedge3(*vectors)
        if len(vectors) == 6:
            return MultiWedge.from_wedge3(wedge3(*vectors[:3])) ^ MultiWedge.from_wedge3(wedge3(*vectors[3:]))
        raise FormulaError(self.text, f"a product of {len(vectors)} vectors is neither grade 3 nor grade 6")

    def factor(self) -> List[Vector]:
        token = self.take()
        if token[0] == "word":
            return [self.vector(letter) for letter in token[1]]
        if token == ("op", "("):
            v = self.linear()
            self.take(")")
            return [v]
        raise FormulaError(self.text, f"unexpected {token[1]!r}")

    def linear(self) -> Vector:
        total = [0] * self.dim
        first = True
        while True:
            sign = 1
            token = self.peek()
            if token in (("op", "+"), ("op", "-")):
                sign = -1 if self.take()[1] == "-" else 1
            elif not first:
                return tuple(total)
            coeff = 1
            if self.peek() and self.peek()[0] == "int":
                coeff = int(self.take()[1])
            word = self.take()
            if word[0] != "word" or len(word[1]) != 1:
                raise FormulaError(self.text, "linear combinations take single letters")
            for i, x in enumerate(self.vector(word[1])):
                total[i] += sign * coeff * x
            first = False


def evaluate(formula: str, env: Environment) -> Value:
    dims = {len(v) for v in env.values()}
    if len(dims) != 1:
        raise InputError("all vectors must have the same dimension")
    return _Parser(formula, env, dims.pop()).parse()


def linear_vector(text: str, env: Environment) -> Vector:
    """Evaluate an integer combination like `-(a+b+c+d)`."""
    dim = len(next(iter(env.values())))
    parser = _Parser(text.strip(), env, dim)
    negate = False
    if parser.peek() == ("op", "-") and parser.tokens[1:2] == [("op", "(")]:
        parser.take("-")
        negate = True
    if parser.peek() == ("op", "("):
        parser.take("(")
        v = parser.linear()
        parser.take(")")
    else:
        v = parser.linear()
    if parser.peek() is not None:
        raise FormulaError(text, "trailing input")
    return tuple(-x for x in v) if negate else v


# =============================================================================
# THE CORPUS
# =============================================================================

TORUS_FIRST_TWIST = (
    "-d^c^(a+d-c) - (b+d)^b^(a+d) - (a+b+d)^a^(a+b+d)"
    " + (a+b+d-c)^c^(2a+b+d) + (a+d-c)^b^(2a+b+d-c)"
)
TORUS_SECOND_TWIST = (
    "-(a+b+d)^a^(a+d) - (2a+d-c)^(a-c)^d + (a+d-c)^a^(a+d-c)"
    " - (2a+b+d-c)^(a+b)^(d-c) - (a+b+d)^(c-a)^(a+b+d-c)"
)
TORUS_MOVE_PAIRS = (
    "-(2a+b+d)^(2a+b+d-c)^(a+d-c) - (a+d)^(a+b+d)^(2a+b+d-c)"
    " + (a+b+d-c)^(d-c)^d + (a+d-c)^d^(b+d)"
)
PENTAGON_RELATION = "bcd + eab + cde + abc + dea"
PENTAGON_CUP_SQUARE = "cde^abc + eab^abc + eab^cde + dea^bcd"
PENTAGON_CUP_SQUARE_ELIMINATED = "adb^abc + dab^cda + bcd^dca + 2{dca^abc + cba^abc + dab^cdb}"
PENTAGON_CUP_SQUARE_ELIMINATED_READING = "adb^abc + dab^cda + bcd^dca + 2{dca^abc + dcb^abc + dab^cdb}"

PENTAGON_DERIVED = {"e": "-(a+b+c+d)"}


def _cup_square_of_star(env: Environment) -> Value:
    cell = pentagon_star(env["a"], env["b"], env["c"], env["d"], env["e"]).reversed()
    return cup_square_on_cell(cell, apex=0)


def _cocycle_residual_of_star(env: Environment) -> Value:
    return verify_cocycle(pentagon_star(env["a"], env["b"], env["c"], env["d"], env["e"])).residual


@dataclass(frozen=True)
class Identity:
    name: str
    lhs: Union[str, Callable[[Environment], Value]]
    rhs: str
    claim: str
    derived: Dict[str, str] = field(default_factory=dict)

    def sides(self, env: Environment) -> Tuple[Value, Value]:
        full = dict(env)
        for letter, text in self.derived.items():
            full[letter] = linear_vector(text, env)
        lhs = self.lhs(full) if callable(self.lhs) else evaluate(self.lhs, full)
        if self.rhs == "0":
            zero = lhs * 0
            return lhs, zero
        return lhs, evaluate(self.rhs, full)


CORPUS: Tuple[Identity, ...] = (
    Identity("torus first Dehn twist", TORUS_FIRST_TWIST, "2abc", "2*a^b^c"),
    Identity("torus second Dehn twist", TORUS_SECOND_TWIST, "2abc", "2*a^b^c"),
    Identity("torus Whitehead move pairs", TORUS_MOVE_PAIRS, "2abc", "2*a^b^c"),
    Identity("torus total", f"{{{TORUS_FIRST_TWIST}}} + {{{TORUS_SECOND_TWIST}}} + {{{TORUS_MOVE_PAIRS}}}",
             "6abc", "6*a^b^c"),
    Identity("pentagon relation", PENTAGON_RELATION, "0", "0", PENTAGON_DERIVED),
    Identity("pentagon star cocycle", _cocycle_residual_of_star, "0", "0", PENTAGON_DERIVED),
    Identity("pentagon cup square", _cup_square_of_star, PENTAGON_CUP_SQUARE, "printed j^2", PENTAGON_DERIVED),
    Identity("pentagon cup square, e eliminated as printed", PENTAGON_CUP_SQUARE,
             f"{PENTAGON_CUP_SQUARE_ELIMINATED} + 2abc^bcd", "printed form + 2*abc^bcd", PENTAGON_DERIVED),
    Identity("pentagon cup square, e eliminated with dcb", PENTAGON_CUP_SQUARE,
             PENTAGON_CUP_SQUARE_ELIMINATED_READING, "printed j^2", PENTAGON_DERIVED),
)


@dataclass
class IdentityRow:
    name: str
    claim: str
    status: str = "ok"
    points: int = 0
    failure: Optional[str] = None

    def as_dict(self) -> Dict[str, object]:
        return {"name": self.name, "claim": self.claim, "status": self.status,
                "points": self.points, "failure": self.failure}


@dataclass
class IdentityReport:
    rows: List[IdentityRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(row.status == "ok" for row in self.rows)

    def as_dict(self) -> Dict[str, object]:
        return {"ok": self.ok, "identities": [row.as_dict() for row in self.rows]}


def basis_point(dim: int = 4) -> Environment:
    def unit(i: int) -> Vector:
        return tuple(1 if j == i else 0 for j in range(dim))
    return {letter: unit(i) for i, letter in enumerate("abcd")}


def random_points(count: int, seed: int = 0, dim: int = 6, bound: int = 5) -> List[Environment]:
    rng = random.Random(seed)
    return [{letter: tuple(rng.randint(-bound, bound) for _ in range(dim)) for letter in "abcd"}
            for _ in range(count)]


def _describe(env: Environment) -> str:
    return ", ".join(f"{k}={list(v)}" for k, v in sorted(env.items()))


def verify_identity_corpus(points: int = 50, seed: int = 0, strict: bool = True,
                           identities: Sequence[Identity] = CORPUS) -> IdentityReport:
    """
    Evaluate every identity at the basis point and at `points` seeded random
    points.  With strict, the first failure raises IdentityFailure.
    """
    environments = [basis_point()] + random_points(points, seed)
    report = IdentityReport()
    for identity in identities:
        row = IdentityRow(identity.name, identity.claim)
        for env in environments:
            lhs, rhs = identity.sides(env)
            row.points += 1
            if lhs != rhs:
                row.status = "failed"
                row.failure = _describe(env)
                logger.warning(f"⚠️ identity {identity.name!r} fails at {row.failure}")
                if strict:
                    raise IdentityFailure(identity.name, row.failure, f"{lhs} != {rhs}")
                break
        report.rows.append(row)
    logger.info(f"identity corpus: {sum(r.status == 'ok' for r in report.rows)}/{len(report.rows)} hold")
    return report
