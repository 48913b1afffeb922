"""
Census records and the orbit database.

Text format (`#` lines are checkpoint markers, skipped on load):

    census g=<g> type=<unmarked|levelN:<N>> max_codim=<c> [form=<csv rows;...>]
    <key> <codim> <autcount> : <neighbour keys...> | s=<csv>;i=<csv>[;m=<labels>][;k=<kind>]

Neighbour keys repeat once per incidence, so multiplicities survive.
"""

import logging
import threading
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from ..errors import ParseError
from ..fatgraph import FatGraph
from ..lattice import IntMatrix

logger = logging.getLogger(__name__)

CODE_VERSION = "torelli-lab-census-1"

Labels = Tuple[Tuple[int, ...], ...]


@dataclass
class CensusRecord:
    key: str
    codim: int
    aut_count: int
    representative: Optional[FatGraph] = None
    labels: Optional[Labels] = None
    kind: Optional[str] = None
    cofaces: Dict[str, int] = field(default_factory=dict)
    faces: Dict[str, int] = field(default_factory=dict)

    @property
    def neighbours(self) -> List[str]:
        out = []
        for key, count in sorted(self.cofaces.items()) + sorted(self.faces.items()):
            out.extend([key] * count)
        return out

    def representative_text(self) -> str:
        if self.representative is None:
            return ""
        parts = [
            "s=" + ",".join(map(str, self.representative.sigma)),
            "i=" + ",".join(map(str, self.representative.iota)),
        ]
        if self.labels is not None:
            parts.append("m=" + "/".join(",".join(map(str, v)) for v in self.labels))
        if self.kind:
            parts.append(f"k={self.kind}")
        return ";".join(parts)

    def to_line(self) -> str:
        line = f"{self.key} {self.codim} {self.aut_count} : {' '.join(self.neighbours)}".rstrip()
        rep = self.representative_text()
        return f"{line} | {rep}" if rep else line

    def as_dict(self) -> Dict[str, object]:
        return {
            "key": self.key,
            "codim": self.codim,
            "aut_count": self.aut_count,
            "kind": self.kind,
            "representative": None if self.representative is None else {
                "sigma": list(self.representative.sigma),
                "iota": list(self.representative.iota),
                "labels": None if self.labels is None else [list(v) for v in self.labels],
            },
            "cofaces": dict(sorted(self.cofaces.items())),
            "faces": dict(sorted(self.faces.items())),
        }


class OrbitDatabase:
    """Census records keyed by canonical key; one writer, many readers."""

    def __init__(self, g: int, marking_type: str = "unmarked", modulus: Optional[int] = None,
                 max_codim: int = 2, form: Optional[IntMatrix] = None,
                 code_version: str = CODE_VERSION):
        self.g = g
        self.marking_type = marking_type
        self.modulus = modulus
        self.max_codim = max_codim
        self.form = form
        self.code_version = code_version
        self.complete = False
        self._records: Dict[str, CensusRecord] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, key: str) -> bool:
        return key in self._records

    def __iter__(self) -> Iterator[CensusRecord]:
        for key in sorted(self._records):
            yield self._records[key]

    def get(self, key: str) -> Optional[CensusRecord]:
        return self._records.get(key)

    def insert(self, record: CensusRecord) -> bool:
        """Add a record; re-inserting a known key leaves the first copy. Returns True if new."""
        with self._lock:
            if record.key in self._records:
                return False
            self._records[record.key] = record
            return True

    def by_codim(self, codim: int) -> List[CensusRecord]:
        return [r for r in self if r.codim == codim]

    def counts(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for record in self:
            out[record.codim] = out.get(record.codim, 0) + 1
        return dict(sorted(out.items()))

    @property
    def full_codim(self) -> int:
        return 4 * self.g - 3

    def header(self) -> str:
        line = f"census g={self.g} type={self.marking_type} max_codim={self.max_codim}"
        if self.form is not None:
            line += " form=" + ";".join(",".join(map(str, row)) for row in self.form)
        return line

    def to_text(self) -> str:
        return "\n".join([self.header()] + [r.to_line() for r in self]) + "\n"

    def save(self, path: str, note: Optional[str] = None) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_text())
            if note:
                fh.write(f"# {note}\n")
        logger.info(f"wrote {len(self)} census records to {path}")

    def summary(self) -> Dict[str, object]:
        return {
            "g": self.g,
            "type": self.marking_type,
            "max_codim": self.max_codim,
            "complete": self.complete,
            "counts": {str(k): v for k, v in self.counts().items()},
        }

    @classmethod
    def from_text(cls, text: str, source: str = "<census>") -> "OrbitDatabase":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("census "):
            raise ParseError(source, 1, "missing census header")
        fields = dict(part.split("=", 1) for part in lines[0].split()[1:] if "=" in part)
        try:
            g = int(fields["g"])
            max_codim = int(fields.get("max_codim", "2"))
        except (KeyError, ValueError):
            raise ParseError(source, 1, "header needs g=<int>") from None
        marking_type = fields.get("type", "unmarked")
        modulus = int(marking_type.split(":", 1)[1]) if marking_type.startswith("levelN:") else None
        form = None
        if "form" in fields:
            form = tuple(tuple(int(x) for x in row.split(",")) for row in fields["form"].split(";"))
        db = cls(g, marking_type, modulus, max_codim, form)

        neighbours: Dict[str, List[str]] = {}
        for line_no, raw in enumerate(lines[1:], start=2):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            head, _, rep = line.partition("|")
            left, sep, right = head.partition(":")
            parts = left.split()
            if not sep or len(parts) != 3:
                raise ParseError(source, line_no, "expected '<key> <codim> <autcount> : ...'")
            try:
                record = CensusRecord(parts[0], int(parts[1]), int(parts[2]))
            except ValueError:
                raise ParseError(source, line_no, "codim and autcount must be integers") from None
            if rep.strip():
                _read_representative(record, rep.strip(), source, line_no)
            neighbours[record.key] = right.split()
            db.insert(record)

        for key, keys in neighbours.items():
            record = db.get(key)
            for other in keys:
                neighbour = db.get(other)
                target = record.faces if neighbour is not None and neighbour.codim > record.codim else record.cofaces
                target[other] = target.get(other, 0) + 1
        return db

    @classmethod
    def load(cls, path: str) -> "OrbitDatabase":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read(), source=path)


def _read_representative(record: CensusRecord, text: str, source: str, line_no: int) -> None:
    items = dict(part.split("=", 1) for part in text.split(";") if "=" in part)
    try:
        sigma = tuple(int(x) for x in items["s"].split(","))
        iota = tuple(int(x) for x in items["i"].split(","))
    except (KeyError, ValueError):
        raise ParseError(source, line_no, "representative needs s=<csv>;i=<csv>") from None
    record.representative = FatGraph(sigma, iota)
    if "m" in items:
        record.labels = tuple(tuple(int(x) for x in v.split(",")) for v in items["m"].split("/"))
    record.kind = items.get("k")
