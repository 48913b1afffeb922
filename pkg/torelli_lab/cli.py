"""
================================================================================
torelli-lab - Command line
================================================================================
One binary, subcommand style.  Results go to stdout as JSON (or, with
--format text, in the module text formats where one exists); --pretty prints
a human summary instead.  Diagnostics go to stderr as one line.

USAGE:
    python run.py validate theta.fg
    python run.py taut-mark theta.fg --pi
    python run.py j-path theta.fg loop.mv --format text
    python run.py verify-cells theta.fg --radius 6
    python run.py cup2 g2.fg 0,1
    python run.py contract g2.fg 0,1 --graph theta
    python run.py nilpotent-reduce g2.fg --k 2
    python run.py lambda --k 1 g2.fg loop.mv
    python run.py census --g 1 --levelN 3 --euler
    python run.py identity-corpus --pretty

EXIT CODES:
    0 success, 1 verification failure, 2 input error
================================================================================
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .cocycle import contraction_cocycle, cup_square_on_cell, degenerate, j_path, verify_cells, verify_cocycle
from .config import get_config
from .corpus import verify_identity_corpus
from .errors import EXIT_OK, EXIT_VERIFICATION, InputError, TorelliLabError, exit_code_for
from .exterior import pairing_graph_by_name
from .fatgraph import canonical_form
from .formats import FgDocument, load_fg, load_mv, read_text, write_fg, write_multiwedge, write_wedge3
from .log import log, set_verbose
from .marking import HomologyMarking, tautological_marking
from .sequence import MoveSequence

__all__ = ["build_parser", "main", "run"]


@dataclass
class CommandResult:
    payload: Dict[str, Any]
    text: Optional[str] = None
    summary: List[str] = field(default_factory=list)
    code: int = EXIT_OK


# =============================================================================
# HELPERS
# =============================================================================

def _marking_of(doc: FgDocument) -> HomologyMarking:
    m = doc.homology_marking()
    if m is not None:
        return m.validate(require_full_rank=doc.graph.is_spine)
    doc.graph.require_spine()
    return tautological_marking(doc.graph)


def _pi_marking_of(doc: FgDocument):
    from .nilpotent.markings import tautological_pi_marking

    pi = doc.pi_marking()
    if pi is not None:
        return pi.validate()
    doc.graph.require_spine()
    return tautological_pi_marking(doc.graph)


def _cell_id(text: str) -> Tuple[int, int]:
    try:
        e, f = (int(part) for part in text.split(","))
    except ValueError:
        raise InputError(f"cell id must be 'e,f', got {text!r}") from None
    return e, f


def _multi_key(key: Sequence[int]) -> str:
    return ",".join(str(t) for t in key)


def _sequence(args, with_pi: bool = False) -> MoveSequence:
    doc = load_fg(args.fg)
    script = load_mv(args.mv)
    pi = _pi_marking_of(doc) if with_pi else None
    return MoveSequence(doc.graph, _marking_of(doc), script.edges, pi)


# =============================================================================
# SUBCOMMANDS
# =============================================================================

def cmd_validate(args) -> CommandResult:
    doc = load_fg(args.fg)
    G = doc.graph
    payload: Dict[str, Any] = {**G.summary(), "trivalent": G.is_trivalent, "spine": G.is_spine}
    marking = None
    pi = None
    if doc.hmark:
        marking = doc.homology_marking().validate(require_full_rank=G.is_spine)
        payload["hmark"] = "valid"
    if doc.pimark:
        pi = doc.pi_marking().validate()
        payload["pimark"] = "valid"
    summary = [f"{args.fg}: {G.vertex_count} vertices, {G.edge_count} edges, "
               f"genus {G.genus}, {G.boundary_count} boundary cycles"]
    summary += [f"{name}: valid" for name in ("hmark", "pimark") if name in payload]
    return CommandResult(payload, write_fg(G, marking, pi, doc.labels), summary)


def cmd_taut_mark(args) -> CommandResult:
    doc = load_fg(args.fg)
    G = doc.graph
    G.require_spine()
    if args.pi:
        from .nilpotent.markings import tautological_pi_marking

        pi = tautological_pi_marking(G)
        payload = {"pimark": {str(d): str(w) for d, w in enumerate(pi.values)}, "relator": str(pi.relator)}
        return CommandResult(payload, write_fg(G, pi=pi, labels=doc.labels),
                             [f"relator: {pi.relator}"])
    m = tautological_marking(G)
    payload = {"hmark": {str(d): list(v) for d, v in enumerate(m.values)},
               "form": [list(row) for row in m.form]}
    return CommandResult(payload, write_fg(G, m, labels=doc.labels),
                         [f"dart {d}: {list(v)}" for d, v in enumerate(m.values)])


def cmd_move(args) -> CommandResult:
    s = _sequence(args)
    final = s.final_graph
    payload = {
        "steps": list(s.steps),
        "final": final.summary(),
        "key": canonical_form(final).key,
        "marking_preserved": s.is_torelli,
    }
    summary = [f"{len(s)} moves, final graph {payload['key']}",
               f"marking preserved: {s.is_torelli}"]
    return CommandResult(payload, write_fg(final, s.final_marking), summary)


def cmd_j_path(args) -> CommandResult:
    s = _sequence(args)
    w = j_path(s)
    payload = {"dim": w.dim, "j": {_multi_key(t): c for t, c in w.terms}, "marking_preserved": s.is_torelli}
    return CommandResult(payload, write_wedge3(w), [f"j = {w}"])


def cmd_verify_cells(args) -> CommandResult:
    doc = load_fg(args.fg)
    report = verify_cells(doc.graph, _marking_of(doc), radius=args.radius, dedupe=args.dedupe,
                          list_cells=args.list)
    payload = report.as_dict()
    if args.list:
        payload["cell_ids"] = [[key, f"{e},{f}"] for key, (e, f) in report.cell_ids]
    text = None
    if args.list:
        text = "".join(f"cell {key} {e},{f}\n" for key, (e, f) in report.cell_ids)
    summary = [f"{report.cells} cells ({report.pentagons} pentagons, {report.squares} squares) "
               f"over {report.visited} graphs",
               f"residuals: {len(report.residuals)}, apex failures: {len(report.apex_failures)}, "
               f"equivariance failures: {len(report.equivariance_failures)}"]
    return CommandResult(payload, text, summary, EXIT_OK if report.ok else EXIT_VERIFICATION)


def _cell(args):
    doc = load_fg(args.fg)
    e, f = _cell_id(args.cell)
    return degenerate(doc.graph, _marking_of(doc), e, f)


def cmd_cup2(args) -> CommandResult:
    cell = _cell(args)
    x = cup_square_on_cell(cell, args.apex)
    payload = {
        "kind": cell.kind.value,
        "cocycle_residual_zero": verify_cocycle(cell).ok,
        "grade": x.grade,
        "dim": x.dim,
        "cup2": {_multi_key(key): c for key, c in x.terms},
    }
    return CommandResult(payload, write_multiwedge(x), [f"{cell.kind.value}: j^2 = {x}"])


def cmd_contract(args) -> CommandResult:
    cell = _cell(args)
    name = args.graph
    text = None if name in ("theta", "twoloop") else read_text(name)
    graph = pairing_graph_by_name(name, text)
    value = contraction_cocycle(cell, graph, apex=args.apex)
    payload = {"kind": cell.kind.value, "graph": graph.name or name, "value": str(value)}
    return CommandResult(payload, f"{value}\n", [f"C_{graph.name or name}(j^2) = {value}"])


def cmd_nilpotent_reduce(args) -> CommandResult:
    from .nilpotent.markings import quotient_for, residual_nk

    doc = load_fg(args.fg)
    pi = _pi_marking_of(doc)
    q = quotient_for(pi, args.degree_bound)
    nk = residual_nk(pi, args.k, q)
    payload = {
        "k": args.k,
        "relator": str(pi.relator),
        "valid": nk.is_valid(),
        "darts": {str(d): [list(c) for c in coords] for d, coords in enumerate(nk.values)},
    }
    summary = [f"N_{args.k} marking, valid: {payload['valid']}"]
    summary += [f"dart {d}: {coords}" for d, coords in payload["darts"].items()]
    return CommandResult(payload, None, summary, EXIT_OK if payload["valid"] else EXIT_VERIFICATION)


def cmd_lambda(args) -> CommandResult:
    from .nilpotent.markings import lambda_k, quotient_for

    s = _sequence(args, with_pi=True)
    q = quotient_for(s.pi_marking, args.degree_bound)
    lam = lambda_k(s, args.k, q)
    sums_zero = all(v.is_zero() for v in lam.vertex_sums())
    payload = {**lam.as_dict(), "zero": lam.is_zero(), "vertex_sums_zero": sums_zero}
    summary = [f"lambda_{args.k}: " + ("zero" if lam.is_zero() else "nonzero"),
               f"vertex sums vanish: {sums_zero}"]
    summary += [f"edge {e}: {value}" for e, value in lam.edge_values().items()]
    return CommandResult(payload, None, summary)


def cmd_census(args) -> CommandResult:
    from .census import (
        enumerate_levelN,
        enumerate_unmarked,
        expected_euler,
        extract_presentation,
        orbifold_euler,
    )

    if args.queue:
        from .tasks import submit_census

        ticket = submit_census(args.g, args.levelN, args.max_codim, args.jobs, args.output, args.store)
        return CommandResult(ticket, None, [f"census job: {ticket.get('task_id') or ticket.get('status')}"],
                             EXIT_OK if ticket.get("status") in ("queued", "completed") else EXIT_VERIFICATION)

    def checkpoint(db, note):
        if args.output:
            db.save(args.output, note)
        log(f"census {note}")

    if args.levelN:
        db = enumerate_levelN(args.g, args.levelN, args.max_codim, jobs=args.jobs, checkpoint=checkpoint)
    else:
        max_codim = 2 if args.max_codim is None else args.max_codim
        db = enumerate_unmarked(args.g, max_codim, jobs=args.jobs, checkpoint=checkpoint)
    if args.output:
        db.save(args.output)

    payload: Dict[str, Any] = db.summary()
    summary = [f"census g={db.g} {db.marking_type}: " +
               ", ".join(f"codim {c}: {n}" for c, n in sorted(db.counts().items()))]
    code = EXIT_OK
    if args.store:
        from .database import init_database, save_census

        init_database()
        payload["run_id"] = save_census(db)
        summary.append(f"stored as run {payload['run_id']}")
    if args.presentation:
        report = extract_presentation(db)
        payload["presentation"] = report.as_dict()
        summary.append("presentation: " + ", ".join(f"{k} {v}" for k, v in report.counts().items()))
    if args.euler:
        chi = orbifold_euler(db)
        expected = expected_euler(db.g, db.modulus)
        payload["euler"] = {"value": str(chi), "expected": str(expected), "match": chi == expected}
        summary.append(f"orbifold Euler characteristic {chi} (expected {expected})")
        if chi != expected:
            code = EXIT_VERIFICATION
    return CommandResult(payload, db.to_text(), summary, code)


def cmd_identity_corpus(args) -> CommandResult:
    report = verify_identity_corpus(points=args.points, seed=args.seed, strict=False)
    summary = [f"{row.name}: {row.claim} [{row.status}]" for row in report.rows]
    return CommandResult(report.as_dict(), None, summary, EXIT_OK if report.ok else EXIT_VERIFICATION)


# =============================================================================
# PARSER
# =============================================================================

def _global_flags(parser: argparse.ArgumentParser, defaults: bool) -> None:
    config = get_config()

    def default(value):
        return value if defaults else argparse.SUPPRESS

    parser.add_argument("--pretty", action="store_true", default=default(False), help="Human-readable summary.")
    parser.add_argument("--format", choices=("json", "text"), default=default("json"),
                        help="Machine-readable output format.")
    parser.add_argument("--jobs", type=int, default=default(config.jobs), help="Census worker threads.")
    parser.add_argument("--seed", type=int, default=default(0), help="Seed for random sampling.")
    parser.add_argument("--degree-bound", type=int, default=default(config.degree_bound),
                        help="Highest Lie degree of the nilpotent tables.")
    parser.add_argument("--verbose", action="store_true", default=default(False), help="Progress on stderr.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torelli-lab", description="Exact combinatorics of fat-graph spines.")
    _global_flags(parser, defaults=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, defaults=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable[[Any], CommandResult], help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = add("validate", cmd_validate, "Check a .fg file and any markings it carries.")
    p.add_argument("fg")

    p = add("taut-mark", cmd_taut_mark, "Tautological homology (or pi_1) marking.")
    p.add_argument("fg")
    p.add_argument("--pi", action="store_true", help="Emit the pi_1 marking.")

    p = add("move", cmd_move, "Apply a move script.")
    p.add_argument("fg")
    p.add_argument("mv")

    p = add("j-path", cmd_j_path, "Sum of j along a move script.")
    p.add_argument("fg")
    p.add_argument("mv")

    p = add("verify-cells", cmd_verify_cells, "Cocycle check on every codimension-2 cell nearby.")
    p.add_argument("fg")
    p.add_argument("--radius", type=int, default=6)
    p.add_argument("--dedupe", choices=("graph", "marked"), default="graph")
    p.add_argument("--list", action="store_true", help="Print cell ids.")

    for name, handler, help_text in (("cup2", cmd_cup2, "Cup square of j on one cell."),
                                     ("contract", cmd_contract, "Contract j^2 on one cell.")):
        p = add(name, handler, help_text)
        p.add_argument("fg")
        p.add_argument("cell", help="Edge pair 'e,f': collapse e, then f.")
        p.add_argument("--apex", type=int, default=0)
        if name == "contract":
            p.add_argument("--graph", required=True, help="theta, twoloop or a .pgraph file")

    p = add("nilpotent-reduce", cmd_nilpotent_reduce, "N_k coordinates of the pi_1 marking.")
    p.add_argument("fg")
    p.add_argument("--k", type=int, required=True)

    p = add("lambda", cmd_lambda, "lambda_k of an N_k-trivial move script.")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("fg")
    p.add_argument("mv")

    p = add("census", cmd_census, "Orbit census of fat graph cells.")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--levelN", type=int, default=None)
    p.add_argument("--max-codim", type=int, default=None)
    p.add_argument("--output", default=None, help="Text database file (checkpointed).")
    p.add_argument("--store", action="store_true", help="Store in the census database.")
    p.add_argument("--queue", action="store_true", help="Run as a background job when a broker is available.")
    p.add_argument("--presentation", action="store_true")
    p.add_argument("--euler", action="store_true")

    p = add("identity-corpus", cmd_identity_corpus, "Check the stored identities.")
    p.add_argument("--points", type=int, default=50)
    return parser


def _emit(result: CommandResult, args) -> None:
    if args.pretty:
        out = "\n".join(result.summary) + "\n" if result.summary else ""
    elif args.format == "text" and result.text is not None:
        out = result.text
    else:
        out = json.dumps(result.payload, sort_keys=True) + "\n"
    sys.stdout.write(out)


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except TorelliLabError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return exit_code_for(exc)
    set_verbose(args.verbose)
    try:
        if args.jobs < 1:
            raise InputError(f"--jobs must be at least 1, got {args.jobs}")
        result = args.handler(args)
    except TorelliLabError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return exit_code_for(exc)
    _emit(result, args)
    return result.code


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
