"""Report serialization: schema-versioned JSON, aligned text tables, TSV.

JSON output is canonical enough to round-trip byte-for-byte through
``json.loads`` and a second emission, which the harness relies on for its
determinism checks.
"""

from __future__ import annotations

import json

from .study import StudyReport

FORMATS = ("json", "text", "tsv")


def _as_dict(report) -> dict:
    if isinstance(report, StudyReport):
        return report.to_dict()
    if isinstance(report, dict):
        return report
    raise TypeError(f"cannot emit report of type {type(report).__name__}")


def emit_report(report, fmt: str = "json") -> str:
    """Render a report in the requested format ('json', 'text' or 'tsv')."""
    kind = fmt.lower()
    if kind == "json":
        return emit_json(report)
    if kind in ("text", "alignedtext", "aligned-text"):
        return emit_aligned_text(report)
    if kind == "tsv":
        return emit_tsv(report)
    raise ValueError(f"unknown report format {fmt!r}")


def emit_json(report) -> str:
    return json.dumps(_as_dict(report), indent=2) + "\n"


def _fmt(x, width=8, digits=4) -> str:
    if isinstance(x, float):
        return f"{x:{width}.{digits}f}"
    return f"{x:>{width}}"


def emit_aligned_text(report) -> str:
    """Human-readable table: methods as column groups with DIST/SE
    sub-columns, one row per grid value (eigen reports: one row per
    eigenvalue position)."""
    doc = _as_dict(report)
    lines = []
    results = doc.get("results", [])
    if results:
        methods = list(dict.fromkeys(r["method"] for r in results))
        grid = list(dict.fromkeys(r["grid_value"] for r in results))
        cell = {(r["method"], r["grid_value"]): r for r in results}
        head1 = f"{'sigma':>8}"
        head2 = f"{'':>8}"
        for m in methods:
            head1 += f"  {m:>17}"
            head2 += f"  {'DIST':>8} {'SE':>8}"
        lines.append(head1)
        lines.append(head2)
        for g in grid:
            row = _fmt(float(g))
            for m in methods:
                r = cell[(m, g)]
                row += f"  {_fmt(r['mean_dist'])} {_fmt(r['se_dist'])}"
            lines.append(row)
        lines.append("")
    eigen = doc.get("eigen") or []
    if eigen:
        keys = [(e["method"], e["grid_value"]) for e in eigen]
        head1 = f"{'eval':>8}"
        head2 = f"{'':>8}"
        for m, g in keys:
            head1 += f"  {m + '@' + format(float(g), 'g'):>17}"
            head2 += f"  {'EVAL':>8} {'SE':>8}"
        lines.append(head1)
        lines.append(head2)
        depth = max((len(e["eigenvalues"]) for e in eigen), default=0)
        for k in range(depth):
            row = f"{'l' + str(k + 1):>8}"
            for e in eigen:
                if k < len(e["eigenvalues"]):
                    row += f"  {_fmt(e['eigenvalues'][k])} {_fmt(e['se'][k])}"
                else:
                    row += f"  {'-':>8} {'-':>8}"
            lines.append(row)
        lines.append("")
    for note in doc.get("footnotes", []):
        lines.append(f"note: {note}")
    for ex in doc.get("exclusions", []):
        lines.append(
            f"excluded: {ex['method']} at {ex['grid_value']:g} "
            f"x{ex['count']} ({ex['error']})"
        )
    return "\n".join(lines) + "\n"


def emit_tsv(report) -> str:
    """One row per (method, grid value); eigen rows add a position column."""
    doc = _as_dict(report)
    lines = []
    results = doc.get("results", [])
    if results:
        lines.append("method\tgrid_value\tmean_dist\tse_dist\tn_ok\tn_failed")
        for r in results:
            lines.append(
                f"{r['method']}\t{r['grid_value']!r}\t{r['mean_dist']!r}"
                f"\t{r['se_dist']!r}\t{r['n_ok']}\t{r['n_failed']}"
            )
    eigen = doc.get("eigen") or []
    if eigen:
        lines.append("method\tgrid_value\tposition\teigenvalue\tse")
        for e in eigen:
            for k, (val, se) in enumerate(zip(e["eigenvalues"], e["se"])):
                lines.append(
                    f"{e['method']}\t{e['grid_value']!r}\t{k + 1}\t{val!r}\t{se!r}"
                )
    return "\n".join(lines) + "\n"
