"""Render finalized critiques into the three-stage report structure.

All renderers are pure: the score lines are re-derived from the sheet at
render time, never read from a cache, so a report can never disagree with
``compute_score``. Perspective sections follow the catalog order (top-down),
not alphabetical order.
"""
from __future__ import annotations

import csv
import html
import io

from .catalog import PERSPECTIVE_ORDER, HeuristicCatalog
from .critique import CritiqueDiff, CritiqueSheet, compute_score
from .errors import CatalogMismatchError, NotFinalizedError, SheetMismatchError


def _check_inputs(sheet: CritiqueSheet, catalog: HeuristicCatalog) -> None:
    if not sheet.is_finalized:
        raise NotFinalizedError(
            f"sheet {sheet.sheet_id} is a draft; reports need a finalized critique"
        )
    if sheet.catalog_version != catalog.version_tag:
        raise CatalogMismatchError(
            f"sheet uses catalog {sheet.catalog_version!r}, "
            f"renderer was given {catalog.version_tag!r}"
        )


def _sorted_words(sheet: CritiqueSheet, catalog: HeuristicCatalog) -> list[tuple[str, str]]:
    return [
        (word, catalog.sentiment_of(word).value)
        for word in sorted(sheet.overview.circled_words)
    ]


def _signed(value: int) -> str:
    return f"+{value}" if value > 0 else str(value)


def render_markdown(sheet: CritiqueSheet, catalog: HeuristicCatalog) -> str:
    """Three-stage critique report as CommonMark text."""
    _check_inputs(sheet, catalog)
    summary = compute_score(sheet, catalog)
    max_total = 2 * len(sheet.responses)
    doc = sheet.to_dict()

    lines: list[str] = []
    add = lines.append
    add(f"# Critique report: {sheet.overview.design_name}")
    add("")
    add(f"- Artefact: `{sheet.artefact_key}`")
    add(f"- Appraiser: {sheet.appraiser}")
    add(f"- Sheet: `{sheet.sheet_id}` (catalog {sheet.catalog_version})")
    add(f"- Created: {doc['created_at']}  |  Updated: {doc['updated_at']}")
    add("")

    add("## Stage 1 - Overview")
    add("")
    add(f"**Design name:** {sheet.overview.design_name}")
    add("")
    add(f"**Essence:** {sheet.overview.essence}")
    add("")
    add("**First-impression words:**")
    add("")
    for word, sentiment in _sorted_words(sheet, catalog):
        add(f"- {word} ({sentiment})")
    add("")

    add("## Stage 2 - Detail")
    add("")
    for pid in PERSPECTIVE_ORDER:
        perspective = catalog.perspective(pid)
        add(f"### {perspective.display_name}")
        add("")
        add(f"*{perspective.description}*")
        add("")
        add("| # | Heuristic | Anchors | Value | Note |")
        add("|---|-----------|---------|------:|------|")
        for h in catalog.heuristics_for(pid):
            response = sheet.response(h.number)
            note = _md_escape(response.note) if response.note else "(none)"
            add(
                f"| {h.number} | {_md_escape(h.question)} "
                f"| {_md_escape(h.negative_anchor)} / {_md_escape(h.positive_anchor)} "
                f"| {_signed(response.value)} | {note} |"
            )
        add("")

    add("## Stage 3 - Review")
    add("")
    add(f"**Total: {summary.total} / {max_total}**")
    add("")
    add(f"Mean per heuristic: {float(summary.mean):.2f}")
    add("")
    add("| Perspective | Subtotal |")
    add("|-------------|---------:|")
    for pid in PERSPECTIVE_ORDER:
        add(
            f"| {catalog.perspective(pid).display_name} "
            f"| {_signed(summary.perspective_subtotals[pid])} |"
        )
    add("")
    pos, neg, neu = summary.circled_sentiment_counts
    add(f"Circled-word sentiment: {pos} positive, {neg} negative, {neu} neutral.")
    add("")
    add("**Reflections:**")
    add("")
    add(sheet.review.reflections if sheet.review.reflections else "(none)")
    add("")
    add("**Improvements and next steps:**")
    add("")
    add(sheet.review.next_steps if sheet.review.next_steps else "(none)")
    add("")
    return "\n".join(lines)


def _md_escape(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


_HTML_STYLE = """
body { font-family: Georgia, serif; max-width: 54rem; margin: 2rem auto; color: #222; }
h1, h2, h3 { font-family: Helvetica, Arial, sans-serif; }
table { border-collapse: collapse; width: 100%; margin: 0.75rem 0; }
th, td { border: 1px solid #bbb; padding: 0.3rem 0.5rem; text-align: left; }
td.value { text-align: right; font-variant-numeric: tabular-nums; }
.meta { color: #555; font-size: 0.9rem; }
.total { font-size: 1.2rem; font-weight: bold; }
.word { display: inline-block; border: 1px solid #888; border-radius: 1rem;
        padding: 0.1rem 0.6rem; margin: 0.15rem; }
""".strip()


def render_html(sheet: CritiqueSheet, catalog: HeuristicCatalog) -> str:
    """Same content contract as the Markdown report, one self-contained file."""
    _check_inputs(sheet, catalog)
    summary = compute_score(sheet, catalog)
    max_total = 2 * len(sheet.responses)
    doc = sheet.to_dict()
    esc = html.escape

    parts: list[str] = []
    add = parts.append
    add("<!DOCTYPE html>")
    add('<html lang="en"><head><meta charset="utf-8">')
    add(f"<title>Critique report: {esc(sheet.overview.design_name)}</title>")
    add(f"<style>{_HTML_STYLE}</style></head><body>")
    add(f"<h1>Critique report: {esc(sheet.overview.design_name)}</h1>")
    add(
        f'<p class="meta">Artefact <code>{esc(sheet.artefact_key)}</code> · '
        f"Appraiser {esc(sheet.appraiser)} · Sheet <code>{esc(sheet.sheet_id)}</code> "
        f"(catalog {esc(sheet.catalog_version)})<br>"
        f"Created {esc(doc['created_at'])} · Updated {esc(doc['updated_at'])}</p>"
    )

    add("<h2>Stage 1 - Overview</h2>")
    add(f"<p><strong>Design name:</strong> {esc(sheet.overview.design_name)}</p>")
    add(f"<p><strong>Essence:</strong> {esc(sheet.overview.essence)}</p>")
    add("<p><strong>First-impression words:</strong></p><p>")
    for word, sentiment in _sorted_words(sheet, catalog):
        add(f'<span class="word">{esc(word)} <em>({sentiment})</em></span>')
    add("</p>")

    add("<h2>Stage 2 - Detail</h2>")
    for pid in PERSPECTIVE_ORDER:
        perspective = catalog.perspective(pid)
        add(f"<h3>{esc(perspective.display_name)}</h3>")
        add(f"<p><em>{esc(perspective.description)}</em></p>")
        add("<table><tr><th>#</th><th>Heuristic</th><th>Anchors</th>"
            "<th>Value</th><th>Note</th></tr>")
        for h in catalog.heuristics_for(pid):
            response = sheet.response(h.number)
            note = esc(response.note) if response.note else "<em>(none)</em>"
            add(
                f"<tr><td>{h.number}</td><td>{esc(h.question)}</td>"
                f"<td>{esc(h.negative_anchor)} / {esc(h.positive_anchor)}</td>"
                f'<td class="value">{_signed(response.value)}</td>'
                f"<td>{note}</td></tr>"
            )
        add("</table>")

    add("<h2>Stage 3 - Review</h2>")
    add(f'<p class="total">Total: {summary.total} / {max_total}</p>')
    add(f"<p>Mean per heuristic: {float(summary.mean):.2f}</p>")
    add("<table><tr><th>Perspective</th><th>Subtotal</th></tr>")
    for pid in PERSPECTIVE_ORDER:
        add(
            f"<tr><td>{esc(catalog.perspective(pid).display_name)}</td>"
            f'<td class="value">{_signed(summary.perspective_subtotals[pid])}</td></tr>'
        )
    add("</table>")
    pos, neg, neu = summary.circled_sentiment_counts
    add(
        f"<p>Circled-word sentiment: {pos} positive, {neg} negative, {neu} neutral.</p>"
    )
    add("<p><strong>Reflections:</strong></p>")
    add(f"<p>{esc(sheet.review.reflections) if sheet.review.reflections else '<em>(none)</em>'}</p>")
    add("<p><strong>Improvements and next steps:</strong></p>")
    add(f"<p>{esc(sheet.review.next_steps) if sheet.review.next_steps else '<em>(none)</em>'}</p>")
    add("</body></html>")
    return "\n".join(parts)


def render_diff_report(
    diff: CritiqueDiff,
    earlier: CritiqueSheet,
    later: CritiqueSheet,
    catalog: HeuristicCatalog,
) -> str:
    """Markdown table of per-heuristic and per-perspective deltas."""
    if diff.earlier_id != earlier.sheet_id or diff.later_id != later.sheet_id:
        raise SheetMismatchError(
            "diff does not describe the provided sheets "
            f"({diff.earlier_id}->{diff.later_id} vs "
            f"{earlier.sheet_id}->{later.sheet_id})"
        )
    _check_inputs(earlier, catalog)
    _check_inputs(later, catalog)

    lines: list[str] = []
    add = lines.append
    add(f"# Critique diff: {earlier.artefact_key}")
    add("")
    add(f"- Earlier: `{earlier.sheet_id}` by {earlier.appraiser}")
    add(f"- Later: `{later.sheet_id}` by {later.appraiser}")
    add("")
    if diff.total_delta == 0:
        add("**Total change: no change (0)**")
    else:
        add(f"**Total change: {_signed(diff.total_delta)}**")
    add("")
    add("| Perspective | Delta |")
    add("|-------------|------:|")
    for pid in PERSPECTIVE_ORDER:
        add(
            f"| {catalog.perspective(pid).display_name} "
            f"| {_signed(diff.per_perspective_delta[pid])} |"
        )
    add("")
    changed = {n: d for n, d in diff.per_heuristic_delta.items() if d != 0}
    if changed:
        add("| # | Heuristic | Earlier | Later | Delta |")
        add("|---|-----------|--------:|------:|------:|")
        for number in sorted(changed):
            h = catalog.heuristic(number)
            add(
                f"| {number} | {_md_escape(h.question)} "
                f"| {_signed(earlier.response(number).value)} "
                f"| {_signed(later.response(number).value)} "
                f"| {_signed(changed[number])} |"
            )
    else:
        add("No heuristic changed.")
    add("")
    words_added = ", ".join(sorted(diff.words_added)) or "(none)"
    words_removed = ", ".join(sorted(diff.words_removed)) or "(none)"
    add(f"Words added: {words_added}")
    add("")
    add(f"Words removed: {words_removed}")
    add("")
    return "\n".join(lines)


def score_csv(sheet: CritiqueSheet, catalog: HeuristicCatalog) -> str:
    """Per-heuristic value export: ``heuristic,perspective,value``."""
    _check_inputs(sheet, catalog)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["heuristic", "perspective", "value"])
    for h in catalog.heuristics:
        writer.writerow([h.number, h.perspective.value, sheet.response(h.number).value])
    return out.getvalue()
