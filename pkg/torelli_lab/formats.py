"""
================================================================================
torelli-lab - Text formats
================================================================================
Line-oriented readers and writers for every file the CLI consumes or emits.
Blank lines and lines starting with '#' are ignored on input.

    .fg        fatgraph <2E>
               iota: p0 ... p(2E-1)
               sigma: q0 ... q(2E-1)
               [label <dart> <string>]
               [hmark <dart> <c1> ... <c2g>]    one dart per edge, reverse by negation
               [pimark <dart> <word>]           e.g. "x1 X2 x1"

    .mv        [start <file.fg>]
               move <edge-id>                   one per line

    Wedge3     wedge3 <dim>
               w3 <i> <j> <k> <coeff>

    MultiWedge mw <grade> <dim>
               term <t1> ... <tm> <coeff>       basis-triple indices

    Lie        lie <degree> <rank>
               lynd <basis-index> <coeff>

Writers emit the canonical form, so write(read(text)) == text for canonical
text and read(write(x)) == x.
================================================================================
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import InputError, ParseError
from .exterior import MultiWedge, Wedge3, basis_triples
from .fatgraph import FatGraph, build
from .lattice import IntMatrix, IntVector, inverse_integral, mat_mul, transpose
from .marking import (
    HomologyMarking,
    InvalidMarking,
    complete_marking,
    induced_basis_change,
    tautological_marking,
)
from .nilpotent.lie import LieElement, lyndon_basis
from .nilpotent.markings import PiMarking
from .nilpotent.words import FreeWord

logger = logging.getLogger(__name__)


def _lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    for line_no, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            yield line_no, stripped.split()


def _ints(parts: Sequence[str], source: str, line_no: int) -> List[int]:
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(source, line_no, f"expected integers, got {' '.join(parts)!r}") from None


def read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


# =============================================================================
# FAT GRAPH FILES
# =============================================================================

@dataclass
class FgDocument:
    graph: FatGraph
    labels: Dict[int, str] = field(default_factory=dict)
    hmark: Dict[int, IntVector] = field(default_factory=dict)
    pimark: Dict[int, FreeWord] = field(default_factory=dict)
    source: str = "<fg>"

    def homology_marking(self) -> Optional[HomologyMarking]:
        """The hmark lines completed to every dart, or None without any."""
        if not self.hmark:
            return None
        dims = {len(v) for v in self.hmark.values()}
        if len(dims) != 1:
            raise ParseError(self.source, None, f"hmark vectors of different lengths {sorted(dims)}")
        dim = dims.pop()
        m = complete_marking(self.graph, self.hmark, dim)
        if self.graph.is_spine and dim == 2 * self.graph.genus:
            m = HomologyMarking(graph=m.graph, values=m.values, dim=dim, form=derive_form(m))
        return m

    def pi_marking(self) -> Optional[PiMarking]:
        """The pimark lines closed under inversion, or None without any."""
        if not self.pimark:
            return None
        G = self.graph
        rank = 2 * G.genus
        values: Dict[int, FreeWord] = {}
        for d, w in self.pimark.items():
            values[d] = w.with_rank(rank)
            values.setdefault(G.iota[d], values[d].inverse())
        missing = [d for d in range(G.dart_count) if d not in values]
        if missing:
            raise InvalidMarking("pimark", missing[0])
        words = tuple(values[d] for d in range(G.dart_count))
        probe = PiMarking(graph=G, values=words, rank=rank, relator=FreeWord.identity(rank))
        defects = probe.defect_vertices()
        relator = probe.vertex_product(defects[0]) if defects else FreeWord.identity(rank)
        return PiMarking(graph=G, values=words, rank=rank, relator=relator)


def derive_form(m: HomologyMarking) -> IntMatrix:
    """
    Intersection form in the marking's own basis: with m = M . taut,
    form = M^-T omega M^-1.
    """
    taut = tautological_marking(m.graph)
    M = induced_basis_change(taut, m, tuple(range(m.graph.dart_count)))
    M_inv = inverse_integral(M)
    if M_inv is None:
        raise InvalidMarking("full rank")
    return mat_mul(mat_mul(transpose(M_inv), taut.form), M_inv)


def read_fg(text: str, source: str = "<fg>") -> FgDocument:
    lines = list(_lines(text))
    if not lines or lines[0][1][0] != "fatgraph" or len(lines[0][1]) != 2:
        raise ParseError(source, lines[0][0] if lines else 1, "expected header 'fatgraph <2E>'")
    n = _ints(lines[0][1][1:], source, lines[0][0])[0]
    perms: Dict[str, List[int]] = {}
    labels: Dict[int, str] = {}
    hmark: Dict[int, IntVector] = {}
    words: Dict[int, str] = {}
    for line_no, parts in lines[1:]:
        tag = parts[0]
        if tag in ("iota:", "sigma:"):
            values = _ints(parts[1:], source, line_no)
            if len(values) != n:
                raise ParseError(source, line_no, f"{tag[:-1]} has {len(values)} entries, expected {n}")
            perms[tag[:-1]] = values
        elif tag == "label" and len(parts) >= 3:
            labels[_ints(parts[1:2], source, line_no)[0]] = " ".join(parts[2:])
        elif tag == "hmark" and len(parts) >= 3:
            values = _ints(parts[1:], source, line_no)
            hmark[values[0]] = tuple(values[1:])
        elif tag == "pimark" and len(parts) >= 2:
            words[_ints(parts[1:2], source, line_no)[0]] = " ".join(parts[2:]) or "1"
        else:
            raise ParseError(source, line_no, f"unknown line {' '.join(parts)!r}")
    for name in ("iota", "sigma"):
        if name not in perms:
            raise ParseError(source, None, f"missing '{name}:' line")
    graph = build(perms["sigma"], perms["iota"])
    for d in list(labels) + list(hmark) + list(words):
        if not 0 <= d < n:
            raise ParseError(source, None, f"dart {d} out of range")
    rank = 2 * graph.genus
    pimark = {d: FreeWord.parse(w, rank) for d, w in words.items()}
    return FgDocument(graph, labels, hmark, pimark, source)


def load_fg(path: str) -> FgDocument:
    return read_fg(read_text(path), source=path)


def write_fg(G: FatGraph, marking: Optional[HomologyMarking] = None, pi: Optional[PiMarking] = None,
             labels: Optional[Dict[int, str]] = None) -> str:
    lines = [
        f"fatgraph {G.dart_count}",
        "iota: " + " ".join(str(d) for d in G.iota),
        "sigma: " + " ".join(str(d) for d in G.sigma),
    ]
    for d in sorted(labels or {}):
        lines.append(f"label {d} {labels[d]}")
    if marking is not None:
        for x, _ in G.edges:
            lines.append(f"hmark {x} " + " ".join(str(c) for c in marking.values[x]))
    if pi is not None:
        for x, _ in G.edges:
            lines.append(f"pimark {x} {pi.values[x]}")
    return "\n".join(lines) + "\n"


# =============================================================================
# MOVE SCRIPTS
# =============================================================================

@dataclass(frozen=True)
class MoveScript:
    edges: Tuple[int, ...]
    start: Optional[str] = None


def read_mv(text: str, source: str = "<mv>") -> MoveScript:
    start = None
    edges: List[int] = []
    for line_no, parts in _lines(text):
        if parts[0] == "start" and len(parts) == 2 and start is None and not edges:
            start = parts[1]
        elif parts[0] == "move" and len(parts) == 2:
            edges.append(_ints(parts[1:], source, line_no)[0])
        else:
            raise ParseError(source, line_no, f"expected 'move <edge-id>', got {' '.join(parts)!r}")
    return MoveScript(tuple(edges), start)


def load_mv(path: str) -> MoveScript:
    script = read_mv(read_text(path), source=path)
    if script.start is not None and not os.path.isabs(script.start):
        script = MoveScript(script.edges, os.path.join(os.path.dirname(path), script.start))
    return script


def write_mv(script: MoveScript) -> str:
    lines = [f"start {script.start}"] if script.start else []
    lines += [f"move {e}" for e in script.edges]
    return "\n".join(lines) + "\n"


# =============================================================================
# EXTERIOR ALGEBRA AND LIE ELEMENTS
# =============================================================================

def _header(text: str, tag: str, arity: int, source: str) -> Tuple[List[int], List[Tuple[int, List[str]]]]:
    lines = list(_lines(text))
    if not lines or lines[0][1][0] != tag or len(lines[0][1]) != arity + 1:
        raise ParseError(source, lines[0][0] if lines else 1, f"expected a '{tag}' header with {arity} fields")
    return _ints(lines[0][1][1:], source, lines[0][0]), lines[1:]


def write_wedge3(w: Wedge3) -> str:
    lines = [f"wedge3 {w.dim}"] + [f"w3 {i} {j} {k} {c}" for (i, j, k), c in w.terms]
    return "\n".join(lines) + "\n"


def read_wedge3(text: str, source: str = "<wedge3>") -> Wedge3:
    (dim,), body = _header(text, "wedge3", 1, source)
    coeffs: Dict[Tuple[int, int, int], int] = {}
    for line_no, parts in body:
        if parts[0] != "w3" or len(parts) != 5:
            raise ParseError(source, line_no, "expected 'w3 <i> <j> <k> <coeff>'")
        i, j, k, c = _ints(parts[1:], source, line_no)
        coeffs[(i, j, k)] = coeffs.get((i, j, k), 0) + c
    try:
        return Wedge3.from_dict(dim, coeffs)
    except InputError as exc:
        raise ParseError(source, None, str(exc)) from None


def write_multiwedge(x: MultiWedge) -> str:
    lines = [f"mw {x.grade} {x.dim}"]
    lines += ["term " + " ".join(str(t) for t in key) + f" {c}" for key, c in x.terms]
    return "\n".join(lines) + "\n"


def read_multiwedge(text: str, source: str = "<mw>") -> MultiWedge:
    (grade, dim), body = _header(text, "mw", 2, source)
    size = len(basis_triples(dim))
    coeffs: Dict[Tuple[int, ...], int] = {}
    for line_no, parts in body:
        if parts[0] != "term" or len(parts) != grade + 2:
            raise ParseError(source, line_no, f"expected 'term' with {grade} indices and a coefficient")
        values = _ints(parts[1:], source, line_no)
        key = tuple(values[:-1])
        if any(not 0 <= t < size for t in key):
            raise ParseError(source, line_no, f"triple index outside 0..{size - 1}")
        coeffs[key] = coeffs.get(key, 0) + values[-1]
    return MultiWedge.from_dict(dim, grade, coeffs)


def write_lie(x: LieElement) -> str:
    lines = [f"lie {x.degree} {x.rank}"]
    lines += [f"lynd {i} {c}" for i, c in enumerate(x.coords) if c]
    return "\n".join(lines) + "\n"


def read_lie(text: str, source: str = "<lie>") -> LieElement:
    (degree, rank), body = _header(text, "lie", 2, source)
    size = len(lyndon_basis(rank, degree))
    coords = [0] * size
    for line_no, parts in body:
        if parts[0] != "lynd" or len(parts) != 3:
            raise ParseError(source, line_no, "expected 'lynd <basis-index> <coeff>'")
        i, c = _ints(parts[1:], source, line_no)
        if not 0 <= i < size:
            raise ParseError(source, line_no, f"basis index outside 0..{size - 1}")
        coords[i] += c
    return LieElement(rank, degree, tuple(coords))
