"""JSON and plain-text rendering of pipeline results."""

from __future__ import annotations

import json
import math

SCHEMA_VERSION = "1"


def num(x):
    """JSON-safe float: non-finite values become null."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def nums(xs):
    return [num(v) for v in xs]


def term_json(t):
    return {"exponents": list(t.exponents), "text": t.format()}


def poly_json(g, ordering):
    terms = ordering.sorted(g.support, reverse=True)
    lead = getattr(g, "leading_term", None)
    return {
        "text": g.format() if lead is not None else g.format(ordering),
        "leading_term": term_json(lead) if lead is not None else None,
        "terms": [
            {"exponents": list(t.exponents), "coefficient": num(g.support[t])} for t in terms
        ],
    }


def record_json(rec):
    return {
        "term": term_json(rec.term),
        "relative_residual": num(rec.relative_residual),
        "classification": rec.classification.value,
    }


def refinement_json(out):
    return {
        "refined_points": [nums(p) for p in out.refined_points.points],
        "distinct_count": out.distinct_count,
        "merge_tolerance": num(out.merge_tol),
        "max_shift": num(out.max_shift()),
        "per_point": [
            {
                "start": nums(r.start),
                "point": nums(r.point),
                "iterations": r.iterations,
                "final_residual_norm": num(r.final_residual_norm),
                "step_norm": num(r.step_norm),
                "converged": r.converged,
                "rank_deficient": r.rank_deficient,
            }
            for r in out.per_point
        ],
    }


def threshold_json(rep):
    return {
        "epsilon": num(rep.epsilon),
        "gamma": num(rep.gamma),
        "p1": rep.p1,
        "p2": rep.p2,
        "p3": rep.p3.status.value,
        "p3_max_shift": num(rep.p3.max_shift),
        "normal_margin": num(rep.normal_margin),
        "leading_margin": num(rep.leading_margin),
        "verdict": rep.verdict.value,
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def _fmt(x, digits=5):
    if x is None:
        return "undefined"
    return f"{x:.{digits}g}"


def render_text(report: dict) -> str:
    out = []
    cfg = report["config"]
    out.append(f"approxbm {report['version']}  ordering={cfg['ordering']}  s0={cfg['s0']}")
    out.append(f"verdict: {report['verdict']}  epsilon: {_fmt(report.get('epsilon'))}")

    if "preprocess" in report:
        sec = report["preprocess"]
        out.append("")
        out.append(f"preprocessed points ({len(sec['points'])}):")
        out.append("  " + ", ".join("(" + ", ".join(repr(c) for c in p) + ")" for p in sec["points"]))
        for c in sec["clusters"]:
            if len(c["members"]) > 1:
                out.append(f"  merged {c['members']} -> {c['representative']!r}")

    if "residuals" in report:
        for label, rows in report["residuals"].items():
            if rows is None:
                continue
            out.append("")
            out.append(f"relative residuals (exact BM, {label} points):")
            head = " | ".join(f"{r['term']['text']:>8}" for r in rows)
            vals = " | ".join(f"{_fmt(r['relative_residual'], 3):>8}" for r in rows)
            kinds = " | ".join(f"{r['classification'][0].upper():>8}" for r in rows)
            out += ["  " + head, "  " + vals, "  " + kinds]

    if "thresholds" in report:
        out.append("")
        out.append("threshold runs:")
        for t in report["thresholds"]:
            out.append(
                f"  eps={_fmt(t['epsilon'])}  P1={t['p1']}  P2={t['p2']}  P3={t['p3']}  -> {t['verdict']}"
            )

    if report.get("basis"):
        b = report["basis"]
        out.append("")
        out.append("normal set: {" + ", ".join(t["text"] for t in b["normal_set"]) + "}")
        out.append("basis:")
        for g in b["polynomials"]:
            out.append(f"  {g['text']}")

    if report.get("newton"):
        n = report["newton"]
        out.append("")
        out.append(f"Gauss-Newton refined points (distinct: {n['distinct_count']}):")
        out.append(
            "  " + ", ".join("(" + ", ".join(_fmt(c, 6) for c in p) + ")" for p in n["refined_points"])
        )

    if report.get("extended"):
        out.append("")
        out.append("extended basis:")
        for e in report["extended"]:
            out.append(
                f"  {e['polynomial']['text']}   |dc|/|cE|={_fmt(e['ratio'], 3)} <= {_fmt(e['bound'], 3)}"
            )

    if report.get("pseudozero"):
        p = report["pseudozero"]
        out.append("")
        out.append(f"pseudozero tolerances (sigma_min={_fmt(p['sigma_min'])}):")
        for e in p["entries"]:
            out.append(f"  g{e['index'] + 1}: delta={_fmt(e['delta'])}  max deviation={_fmt(e['max_deviation'])}")

    if report.get("bounds"):
        out.append("")
        out.append("perturbation diagnostics (reference = refined points):")
        for d in report["bounds"]:
            out.append(
                f"  {d['term']['text']}: eps_t={_fmt(d['epsilon_t'], 3)} (<= {_fmt(d['bound_eps_t'], 3)})"
                f"  eps_M={_fmt(d['epsilon_M'], 3)} (<= {_fmt(d['bound_eps_M'], 3)})"
                f"  K2={_fmt(d['k2'], 4)}  bound={_fmt(d['sensitivity_bound'], 3)}"
            )
    return "\n".join(out) + "\n"


def load_schema() -> dict:
    """The JSON schema that every report validates against."""
    from importlib.resources import files

    return json.loads(files(__package__).joinpath("report.schema.json").read_text())
