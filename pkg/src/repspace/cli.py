"""Command-line entry point.

Exit codes: 0 ok, 1 verification failure, 2 solver failure, 3 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from repspace import strata, verify
from repspace.cohomology import InconsistentRepresentation, cohomology_summary
from repspace.lie import DEFAULT_RANK_TOL
from repspace.poisson import (
    REFERENCE_CONE_TABLE,
    bracket_table,
    closure_to_lie_algebra,
    planar_invariants,
    proportionality_constant,
    spatial_invariants,
    table_in_generators,
)
from repspace.serialize import canonical_json
from repspace.words import SolverError, StratumLabel, orbit_type, solve_flat

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_SOLVER = 2
EXIT_INPUT = 3

FORMATS = ("json", "csv", "text")


@dataclass
class RunConfig:
    command: str
    genus: list[int] = field(default_factory=lambda: [2])
    stratum: str | None = None
    seed: int = 0
    tol: float = DEFAULT_RANK_TOL
    output: Path | None = None
    format: str = "json"
    jobs: int = 1


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# documents


def solve_document(genus: int, stratum: str, seed: int) -> dict:
    rep = solve_flat(genus, stratum, seed=seed)
    doc = rep.to_dict()
    doc["stratum"] = orbit_type(rep).value
    doc["seed"] = seed
    return doc


def cohomology_document(rep, tol: float = DEFAULT_RANK_TOL) -> dict:
    return cohomology_summary(rep, tol)


def bracket_table_document(model: str) -> dict:
    if model == "cone":
        structure = closure_to_lie_algebra(planar_invariants())
        table = table_in_generators(structure)
        constant = proportionality_constant(table, REFERENCE_CONE_TABLE)
        return {
            "model": "cone",
            "generators": list(structure.names),
            "table": {f"{a},{b}": str(v) for (a, b), v in table.items()},
            "reference_constant": None if constant is None else str(constant),
            "relation": "x1^2 + x2^2 - rho^2",
            "inequality": "rho >= 0",
        }
    if model == "planar":
        inv = planar_invariants()
        ambient = bracket_table(inv.generators)
        return {
            "model": "planar",
            "generators": {k: str(v) for k, v in inv.generators.items()},
            "table": {f"{a},{b}": str(v) for (a, b), v in ambient.items()},
            "momentum_commutes": inv.commutes_with_momentum(),
        }
    if model == "spatial":
        inv = spatial_invariants(2)
        structure = closure_to_lie_algebra(inv)
        doc = structure.to_dict()
        doc.update(
            {
                "model": "spatial",
                "closes": True,
                "dimension": structure.dim,
                "killing_signature": list(structure.killing_signature()),
                "momentum_commutes": inv.commutes_with_momentum(),
            }
        )
        return doc
    raise InputError(f"unknown model {model!r}")


def report_rows(genera, seed: int = 0, jobs: int = 1) -> list[dict]:
    rows = []
    for genus in genera:
        rows.extend(strata.stratum_report(genus, seed=seed, jobs=jobs))
    return rows


def _load_representation(path: str):
    from repspace.words import Representation

    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return Representation.from_json(text)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read representation from {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# text renderings


def _text(doc) -> str:
    if isinstance(doc, dict) and "table" in doc:
        lines = [f"{{{k.replace(',', ', ')}}} = {v}" for k, v in sorted(doc["table"].items())]
        extra = {k: v for k, v in doc.items() if k != "table"}
        return "\n".join(lines + [f"{k}: {json.dumps(v, sort_keys=True)}" for k, v in sorted(extra.items())]) + "\n"
    if isinstance(doc, dict):
        return "".join(f"{k}: {json.dumps(v, sort_keys=True)}\n" for k, v in sorted(doc.items()))
    return canonical_json(doc)


def render(doc, fmt: str) -> str:
    if fmt == "json":
        return canonical_json(doc)
    if fmt == "csv":
        if isinstance(doc, list):
            return strata.report_csv(doc)
        raise InputError("csv output is only available for reports")
    return _text(doc)


def emit(text: str, cfg: RunConfig) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        cfg.output.write_text(text)


# ---------------------------------------------------------------------------
# commands


def cmd_solve(cfg: RunConfig) -> int:
    if cfg.stratum is None:
        raise InputError("solve needs --stratum")
    try:
        doc = solve_document(cfg.genus[0], cfg.stratum, cfg.seed)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        # unsatisfiable request, e.g. an irreducible in genus 1
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    emit(render(doc, cfg.format), cfg)
    return EXIT_OK


def cmd_cohomology(cfg: RunConfig, rep_file: str) -> int:
    rep = _load_representation(rep_file)
    try:
        doc = cohomology_document(rep, cfg.tol)
    except (InconsistentRepresentation, ValueError) as exc:
        raise InputError(str(exc)) from exc
    emit(render(doc, cfg.format), cfg)
    return EXIT_OK


def cmd_bracket_table(cfg: RunConfig, model: str) -> int:
    emit(render(bracket_table_document(model), cfg.format), cfg)
    return EXIT_OK


def cmd_report(cfg: RunConfig) -> int:
    for g in cfg.genus:
        if not 2 <= g <= 4:
            raise InputError("reports cover genus 2..4")
    rows = report_rows(cfg.genus, cfg.seed, cfg.jobs)
    emit(render(rows, cfg.format), cfg)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, only: list[str] | None) -> int:
    try:
        outcomes = verify.run(only)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    for o in outcomes:
        print(o.line, file=sys.stderr)
    doc = verify.manifest(outcomes)
    emit(render(doc, "json" if cfg.format == "csv" else cfg.format), cfg)
    return EXIT_OK if doc["passed"] else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=DEFAULT_RANK_TOL, help="relative singular-value threshold")
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--output", "-o", type=Path, default=None)

    parser = argparse.ArgumentParser(prog="repspace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="find a flat SU(2) representation")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--stratum", choices=[s.value for s in StratumLabel], required=True)

    p = sub.add_parser("cohomology", parents=[common], help="cohomology of a representation file")
    p.add_argument("rep_file", help="JSON representation record, or - for stdin")

    p = sub.add_parser("bracket-table", parents=[common], help="exact bracket tables")
    p.add_argument("--model", choices=("cone", "planar", "spatial"), default="cone")

    p = sub.add_parser("report", parents=[common], help="per-stratum dimension report")
    p.add_argument("--genus", type=int, action="append")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", action="append", help="criterion number, key or tag (repeatable)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage; that code means solver failure here
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    cfg = RunConfig(
        command=args.command,
        genus=getattr(args, "genus", None) or [2],
        stratum=getattr(args, "stratum", None),
        seed=args.seed,
        tol=args.tol,
        output=args.output,
        format=args.format,
        jobs=getattr(args, "jobs", 1),
    )
    if isinstance(cfg.genus, int):
        cfg.genus = [cfg.genus]
    try:
        if cfg.command == "solve":
            return cmd_solve(cfg)
        if cfg.command == "cohomology":
            return cmd_cohomology(cfg, args.rep_file)
        if cfg.command == "bracket-table":
            return cmd_bracket_table(cfg, args.model)
        if cfg.command == "report":
            return cmd_report(cfg)
        return cmd_verify(cfg, args.only)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
