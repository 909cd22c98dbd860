"""Text and line-delimited JSON rendering of gradations, case reports and quadric tables."""
from __future__ import annotations

import json
from typing import Iterable

from .grading import Gradation
from .quadric import TangentRow
from .splitcheck import CaseReport

__all__ = [
    "SCHEMA_VERSION",
    "dumps",
    "gradation_record",
    "case_record",
    "tangent_record",
    "render_gradation",
    "render_case",
    "render_sweep",
    "render_quadric",
]

SCHEMA_VERSION = 1


def dumps(record: dict) -> str:
    """One machine-format line: sorted keys, no whitespace variance."""
    return json.dumps({"schema_version": SCHEMA_VERSION, **record}, sort_keys=True, ensure_ascii=False,
                      separators=(",", ":"))


def _case_id(family: str, rank: int, marked: int) -> str:
    return f"{family}{rank}a{marked}"


# machine records --------------------------------------------------------

def gradation_record(grad: Gradation) -> dict:
    sys = grad.sys
    levels = {str(k): [sys.format_coeffs(r) for r in grad.roots(k)] for k in range(0, grad.depth + 1)}
    ambient = {str(k): [sys.format_ambient(r) for r in grad.roots(k)] for k in range(1, grad.depth + 1)}
    return {
        "kind": "gradation",
        "case": _case_id(sys.family, sys.rank, grad.marked),
        "family": sys.family,
        "rank": sys.rank,
        "marked": grad.marked,
        "depth": grad.depth,
        "dims": {str(k): d for k, d in grad.dims.items()},
        "levels": levels,
        "ambient": ambient,
    }


def case_record(rep: CaseReport, sys) -> dict:
    rec = {
        "kind": "case",
        "case": _case_id(rep.family, rep.rank, rep.marked),
        "family": rep.family,
        "rank": rep.rank,
        "marked": rep.marked,
        "depth": rep.depth,
        "dims": {str(k): d for k, d in rep.dims.items()},
        "levels": {str(k): [sys.format_coeffs(r) for r in roots] for k, roots in rep.levels.items()},
        "psi2": [sys.format_coeffs(r) for r in rep.psi2],
        "psi2_ambient": [sys.format_ambient(r) for r in rep.psi2],
        "abelian_levels": rep.abelian,
        "solver": {"trials": rep.trials, "solved": rep.solved, "verified": rep.verified},
        "normal_forms": {"runs": rep.normal_forms, "failures": rep.normal_form_failures,
                         "lemma_checked": rep.lemma_checked, "lemma_verified": rep.lemma_verified},
        "centralizer": rep.centralizer,
        "seed": rep.seed,
        "status": rep.status,
        "problems": rep.problems,
    }
    p = rep.pairing
    rec["pairing"] = None if p is None else {
        "paired": len(p.paired),
        "unpaired": len(p.unpaired),
        "violations": len(p.violations),
        "unpaired_roots": sorted(sys.format_ambient(r) for r in p.unpaired),
    }
    return rec


def tangent_record(row: TangentRow) -> dict:
    return {
        "kind": "quadric",
        "n": row.n,
        "m": row.m,
        "k": row.k,
        "max_kernel_dim": row.max_dim,
        "bound": row.bound,
        "admissible": row.admissible,
        "witness": row.witness,
        "candidates": row.candidates,
        "annihilator_dim": row.annihilator_dim,
        "bracket_agree": row.bracket_agree,
    }


# text --------------------------------------------------------------------

def _table(header: list[str], columns: list[list[str]]) -> list[str]:
    height = max((len(c) for c in columns), default=0)
    widths = [max([len(h)] + [len(x) for x in col]) for h, col in zip(header, columns)]
    sep = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
    lines = [sep, "| " + " | ".join(h.ljust(w) for h, w in zip(header, widths)) + " |", sep]
    for i in range(height):
        cells = [col[i] if i < len(col) else "" for col in columns]
        lines.append("| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |")
    lines.append(sep)
    return lines


def render_gradation(grad: Gradation) -> str:
    sys = grad.sys
    header, columns = [], []
    for k in range(0, grad.depth + 1):
        roots = [r for r in grad.roots(k) if r.is_positive]
        sign = "±" if k == 0 else ""
        header.append(f"Δ{k}" + (" (±)" if k == 0 else ""))
        columns.append([f"{sign}{sys.format_coeffs(r)} {sign}{_paren(sys.format_ambient(r), sign)}" for r in roots])
    dims = " ".join(f"g{k}={grad.dim(k)}" for k in range(0, grad.depth + 1))
    lines = [f"gradation ({sys.name}, α{grad.marked})  depth={grad.depth}  {dims}"]
    lines += _table(header, columns)
    return "\n".join(lines)


def _paren(text: str, sign: str) -> str:
    if sign and ("+" in text or "-" in text) and not text.startswith("1/2("):
        return f"({text})"
    return text


def render_case(rep: CaseReport, sys) -> str:
    dims = " ".join(f"g{k}={d}" for k, d in sorted(rep.dims.items()) if k >= 0)
    lines = [f"case {rep.name}: {rep.status}", f"  depth={rep.depth}  {dims}"]
    if rep.psi2:
        lines.append("  Ψ2 = {" + ", ".join(f"{sys.format_coeffs(r)}={sys.format_ambient(r)}" for r in rep.psi2) + "}")
    if rep.pairing is not None:
        p = rep.pairing
        lines.append(f"  pairing: {len(p.paired)} paired, {len(p.unpaired)} unpaired, "
                     f"{len(p.violations)} violations")
        if p.unpaired:
            lines.append("  unpaired: " + ", ".join(sorted(sys.format_ambient(r) for r in p.unpaired)))
    lines.append(f"  abelian levels: {rep.abelian}")
    lines.append(f"  solver: {rep.solved}/{rep.trials} solvable, {rep.verified} verified")
    if rep.in_range:
        lines.append(f"  normal forms: {rep.normal_forms} runs, {rep.normal_form_failures} failures; "
                     f"lemma {rep.lemma_verified}/{rep.lemma_checked}")
    else:
        lines.append("  outside the checked depth range; pairing criterion not attempted")
    lines.append(f"  centralizer: {str(rep.centralizer).lower()}")
    for msg in rep.problems:
        lines.append(f"  PROBLEM: {msg}")
    return "\n".join(lines)


def render_sweep(reports: Iterable[CaseReport], skipped: int) -> str:
    reports = list(reports)
    header = ["case", "depth", "dims", "|Ψ2|", "pairing", "solved", "centralizer", "status"]
    cols: list[list[str]] = [[] for _ in header]
    for rep in reports:
        dims = "/".join(str(rep.dims[k]) for k in range(0, rep.depth + 1))
        pair = "-" if rep.pairing is None else (
            "unique" if not rep.pairing.violations else f"{len(rep.pairing.violations)} bad")
        row = [rep.name, str(rep.depth), dims, str(len(rep.psi2)), pair,
               f"{rep.solved}/{rep.trials}", str(rep.centralizer).lower(), rep.status]
        for c, x in zip(cols, row):
            c.append(x)
    bad = sum(r.status == "violation" for r in reports)
    lines = _table(header, cols)
    lines.append(f"{len(reports)} cases, {bad} violations, {skipped} skipped (depth >= 3)")
    return "\n".join(lines)


def render_quadric(rows: list[TangentRow]) -> str:
    n, m = rows[0].n, rows[0].m
    header = ["k", "max dim", "n-m", "admissible", "witness", "annihilator", "bracket"]
    cols: list[list[str]] = [[] for _ in header]
    for r in rows:
        agree = "-" if r.bracket_agree is None else f"{r.bracket_agree}/{r.candidates}"
        ann = "-" if r.annihilator_dim is None else str(r.annihilator_dim)
        for c, x in zip(cols, [str(r.k), str(r.max_dim), str(r.bound), "yes" if r.admissible else "no",
                               r.witness, ann, agree]):
            c.append(x)
    adm = sorted(r.k for r in rows if r.admissible)
    lines = [f"quadric n={n} m={m}"] + _table(header, cols)
    lines.append("admissible k = {" + ", ".join(map(str, adm)) + "}")
    return "\n".join(lines)
