"""Command-line driver: points in, approximate basis and diagnostics out."""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from . import report as rpt
from .bm import DuplicatePointsError, residual_table
from .newton import gauss_newton
from .poly import PointSet
from .preprocess import preprocess
from .stetter import (
    SingularNormalSetError,
    coefficient_gap,
    extended_basis,
    perturbation_diagnostics,
    pseudozero_certificate,
)
from .terms import OrderKind, TermOrdering
from .threshold import DEFAULT_GAMMA, Verdict, evaluate_threshold, select_threshold

__all__ = ["PointsParseError", "RunConfig", "RunResult", "parse_points", "run_pipeline", "main"]

SECTIONS = ("preprocess", "residuals", "basis", "newton", "extended", "pseudozero", "bounds")

EMIT_MODES = ("json", "text", "both")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DEGENERATE = 2


class PointsParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_points(source, s0: float = 0.0) -> PointSet:
    """Read comma-separated points, one per line.

    Blank lines and lines starting with ``#`` are skipped; the number of
    variables is taken from the first data row.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    elif isinstance(source, io.TextIOBase) or hasattr(source, "read"):
        text = source.read()
    else:
        raise TypeError("parse_points expects a path or a text stream")
    rows = []
    s = None
    reader = csv.reader(io.StringIO(text))
    for fields in reader:
        lineno = reader.line_num
        fields = [f.strip() for f in fields]
        if not any(fields) or fields[0].startswith("#"):
            continue
        try:
            row = [float(f) for f in fields]
        except ValueError:
            raise PointsParseError(lineno, f"non-numeric field in {','.join(fields)!r}") from None
        if not all(math.isfinite(v) for v in row):
            raise PointsParseError(lineno, "non-finite coordinate")
        if s is None:
            s = len(row)
        elif len(row) != s:
            raise PointsParseError(lineno, f"expected {s} fields, found {len(row)}")
        rows.append(row)
    if not rows:
        raise PointsParseError(0, "no points found")
    return PointSet(rows, s0)


@dataclass
class RunConfig:
    input_path: str | None = None
    ordering: str = "deglex"
    s0: float = 0.0
    epsilon: float | None = None
    gamma: float = DEFAULT_GAMMA
    max_iter: int = 50
    step_tol: float = 1e-10
    emit: str = "text"
    sections: tuple[str, ...] = SECTIONS
    points: PointSet | None = field(default=None, repr=False)

    def validate(self) -> None:
        if self.s0 < 0:
            raise ValueError("s0 must be non-negative")
        if not self.gamma > 1:
            raise ValueError("gamma must exceed 1")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.emit not in EMIT_MODES:
            raise ValueError(f"emit must be one of {EMIT_MODES}")
        unknown = set(self.sections) - set(SECTIONS)
        if unknown:
            raise ValueError(f"unknown sections: {sorted(unknown)}")
        OrderKind(self.ordering)

    def echo(self) -> dict:
        return {
            "input_path": self.input_path,
            "ordering": self.ordering,
            "s0": self.s0,
            "epsilon": self.epsilon,
            "gamma": self.gamma,
            "max_iter": self.max_iter,
            "step_tol": self.step_tol,
            "emit": self.emit,
            "sections": list(self.sections),
        }


@dataclass
class RunResult:
    report: dict
    exit_code: int


def run_pipeline(config: RunConfig) -> RunResult:
    """Preprocess, choose a threshold, run ABM and attach the diagnostics."""
    config.validate()
    P = config.points if config.points is not None else parse_points(config.input_path, config.s0)
    P = PointSet(P.points, config.s0)
    ordering = TermOrdering(OrderKind(config.ordering))
    want = set(config.sections)
    rep: dict = {
        "schema_version": rpt.SCHEMA_VERSION,
        "version": __version__,
        "config": config.echo(),
    }

    Pbar, clusters = preprocess(P)
    if "preprocess" in want:
        rep["preprocess"] = {
            "input_points": [rpt.nums(p) for p in P.points],
            "points": [rpt.nums(p) for p in Pbar.points],
            "clusters": [
                {
                    "members": rpt.nums(c.member_values),
                    "interval": rpt.nums(c.interval),
                    "representative": rpt.num(c.representative),
                }
                for c in clusters
            ],
        }

    table = residual_table(Pbar, ordering)
    if "residuals" in want:
        try:
            raw = [rpt.record_json(r) for r in residual_table(P, ordering)]
        except DuplicatePointsError:
            raw = None
        rep["residuals"] = {"preprocessed": [rpt.record_json(r) for r in table], "input": raw}

    if config.epsilon is not None:
        result, treport = evaluate_threshold(
            Pbar, config.epsilon, ordering, config.gamma, config.max_iter, config.step_tol
        )
        reports = [treport]
        verdict = treport.verdict
    else:
        sel = select_threshold(
            Pbar, ordering, config.gamma, config.max_iter, config.step_tol, table=table
        )
        reports = list(sel.reports)
        verdict = sel.verdict
        result, treport = sel.result, sel.report
    rep["verdict"] = verdict.value
    rep["epsilon"] = rpt.num(treport.epsilon) if treport is not None else None
    rep["thresholds"] = [rpt.threshold_json(r) for r in reports]

    if result is not None:
        if "basis" in want:
            rep["basis"] = {
                "epsilon": rpt.num(result.epsilon),
                "normal_set": [rpt.term_json(t) for t in result.normal_set],
                "polynomials": [rpt.poly_json(g, ordering) for g in result.basis],
                "log": [rpt.record_json(r) for r in result.log],
            }
        refinement = None
        if want & {"newton", "bounds"} and result.basis:
            p3 = treport.p3 if treport is not None else None
            refinement = p3.refinement if p3 is not None and p3.refinement is not None else None
            if refinement is None:
                refinement = gauss_newton(list(result.basis), Pbar, config.max_iter, config.step_tol)
            if "newton" in want:
                rep["newton"] = rpt.refinement_json(refinement)
        square = len(result.normal_set) == Pbar.m
        if square and want & {"extended", "pseudozero"}:
            try:
                cert = pseudozero_certificate(result, Pbar)
                ext = extended_basis(Pbar, result.normal_set)
            except SingularNormalSetError as exc:
                rep["extended_error"] = str(exc)
            else:
                if "extended" in want:
                    rep["extended"] = []
                    for g, e in zip(result.basis, ext):
                        gap = coefficient_gap(g, e, cert.spectrum, result.epsilon)
                        rep["extended"].append(
                            {
                                "corner_term": rpt.term_json(e.corner_term),
                                "polynomial": rpt.poly_json(e.polynomial, ordering),
                                "delta_c_norm": rpt.num(gap.delta_c_norm),
                                "ratio": rpt.num(gap.ratio),
                                "bound": rpt.num(gap.bound),
                            }
                        )
                if "pseudozero" in want:
                    rep["pseudozero"] = {
                        "sigma_min": rpt.num(cert.sigma_min),
                        "condition_2": rpt.num(cert.spectrum.condition_2),
                        "support_set": [rpt.term_json(t) for t in cert.support_set],
                        "entries": [
                            {
                                "index": e.index,
                                "delta": rpt.num(e.delta),
                                "max_deviation": rpt.num(e.max_deviation),
                                "witness": rpt.poly_json(e.witness.polynomial, ordering),
                            }
                            for e in cert.entries
                        ],
                    }
        if "bounds" in want and refinement is not None:
            rep["bounds"] = []
            for g in result.basis:
                rec = result.record(g.leading_term)
                d = perturbation_diagnostics(Pbar, refinement.refined_points, g.leading_term, rec.span_terms)
                rep["bounds"].append(
                    {
                        "term": rpt.term_json(g.leading_term),
                        "epsilon_t": rpt.num(d.epsilon_t),
                        "epsilon_M": rpt.num(d.epsilon_M),
                        "k2": rpt.num(d.k2),
                        "delta_R": rpt.num(d.delta_R),
                        "d_M": d.d_M,
                        "bound_eps_t": rpt.num(d.bound_eps_t),
                        "bound_eps_M": rpt.num(d.bound_eps_M),
                        "sensitivity_bound": rpt.num(d.sensitivity_bound),
                    }
                )

    code = EXIT_OK if verdict is Verdict.ACCEPTED else EXIT_DEGENERATE
    return RunResult(rep, code)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="approxbm",
        description="Approximate Groebner basis of the ideal of perturbed points.",
    )
    p.add_argument("--points", required=True, metavar="PATH", help="CSV file, one point per line")
    p.add_argument("--s0", type=float, default=0.0, help="coordinate uncertainty (default 0)")
    p.add_argument("--ordering", choices=[k.value for k in OrderKind], default="deglex")
    p.add_argument("--epsilon", type=float, default=None, help="fixed threshold (skips the search)")
    p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA, help="separation factor (default 2)")
    p.add_argument("--max-iter", type=int, default=50, help="Gauss-Newton iteration cap")
    p.add_argument("--step-tol", type=float, default=1e-10, help="Gauss-Newton step tolerance")
    p.add_argument("--json", metavar="PATH", default=None, help="write the JSON report ('-' for stdout)")
    p.add_argument("--text", action="store_true", help="print the text report (default without --json)")
    p.add_argument(
        "--sections",
        default=",".join(SECTIONS),
        help="comma-separated subset of: " + ",".join(SECTIONS),
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    sections = tuple(s.strip() for s in args.sections.split(",") if s.strip())
    config = RunConfig(
        input_path=args.points,
        ordering=args.ordering,
        s0=args.s0,
        epsilon=args.epsilon,
        gamma=args.gamma,
        max_iter=args.max_iter,
        step_tol=args.step_tol,
        emit="both" if args.json and args.text else "json" if args.json else "text",
        sections=sections,
    )
    try:
        run = run_pipeline(config)
    except (PointsParseError, ValueError, OSError) as exc:
        print(f"approxbm: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if config.emit in ("text", "both"):
        sys.stdout.write(rpt.render_text(run.report))
    if config.emit in ("json", "both"):
        payload = rpt.dumps(run.report)
        if args.json == "-":
            sys.stdout.write(payload)
        else:
            Path(args.json).write_text(payload)
    return run.exit_code
