#!/usr/bin/env python3
"""
Opt-in genus-3 census: codimension 0..2 orbits of the once-punctured genus-3
ribbon graph complex, checkpointed to a text database so a killed run can be
resumed, with a JSON report comparing against published counts.

    python scripts/genus3_census.py --output g3.census --report g3.json --jobs 8
"""
import argparse
import json
import os
import sys
import time
from typing import Any, Dict

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from torelli_lab.census import OrbitDatabase, enumerate_unmarked
from torelli_lab.errors import TorelliLabError, exit_code_for
from torelli_lab.log import log, set_verbose

# Published figures: generators (codim 1), pentagon and commutativity
# relations (codim 2).
REFERENCE = {
    "generators": 12594,
    "pentagon": 9548,
    "commutativity": 31760,
}

CONVENTION_NOTE = (
    "ours: orbits of unoriented cells under the mapping class group, one per "
    "canonical form; reference: earlier computer enumeration whose cells may be "
    "counted per fundamental domain or per orientation, so ratios of 1/2 or "
    "|Aut| factors point at a convention difference, not a missing cell"
)


def _comparison(ours: int, reference: int) -> Dict[str, Any]:
    return {
        "ours": ours,
        "reference": reference,
        "difference": ours - reference,
        "ratio": round(ours / reference, 6) if reference else None,
        "agrees": ours == reference,
        "note": CONVENTION_NOTE,
    }


def build_report(db: OrbitDatabase, seconds: float) -> Dict[str, Any]:
    codim2 = db.by_codim(2)
    pentagons = sum(r.kind == "pentagon" for r in codim2)
    squares = sum(r.kind == "square" for r in codim2)
    return {
        "census": db.summary(),
        "seconds": round(seconds, 1),
        "comparison": {
            "generators": _comparison(len(db.by_codim(1)), REFERENCE["generators"]),
            "pentagon": _comparison(pentagons, REFERENCE["pentagon"]),
            "commutativity": _comparison(squares, REFERENCE["commutativity"]),
        },
    }


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Genus-3 census with checkpoint and resume.")
    parser.add_argument("--output", default="genus3.census", help="Text database (checkpoint file).")
    parser.add_argument("--report", default="genus3_report.json", help="JSON report path.")
    parser.add_argument("--max-codim", type=int, default=2)
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--fresh", action="store_true", help="Ignore an existing checkpoint.")
    parser.add_argument("--verbose", action="store_true")
    return parser.parse_args()


def main() -> int:
    args = parse_args()
    set_verbose(args.verbose)

    db = None
    if os.path.exists(args.output) and not args.fresh:
        db = OrbitDatabase.load(args.output)
        log(f"Resuming from {args.output}: {len(db)} records")

    def checkpoint(current: OrbitDatabase, note: str):
        current.save(args.output, note)
        log(f"⚠️ {note} saved to {args.output}")

    start = time.time()
    try:
        db = enumerate_unmarked(3, args.max_codim, jobs=args.jobs, checkpoint=checkpoint, db=db)
    except TorelliLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    db.save(args.output)

    report = build_report(db, time.time() - start)
    with open(args.report, "w", encoding="utf-8") as handle:
        json.dump(report, handle, indent=2, sort_keys=True)
    print(json.dumps(report["comparison"], indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
