import re

import pytest

from cds.critique import compute_score, diff
from cds.errors import CatalogMismatchError, NotFinalizedError, SheetMismatchError
from cds.figures import diff_bar_chart, perspective_bar_chart
from cds.report import render_diff_report, render_html, render_markdown, score_csv
from conftest import make_complete_sheet

PERSPECTIVE_NAMES = ["User", "Environment", "Interface", "Components", "Design", "Visual marks"]


def md_heuristic_numbers(text):
    return [int(m) for m in re.findall(r"^\| (\d+) \| ", text, flags=re.M)]


def html_heuristic_numbers(text):
    return [int(m) for m in re.findall(r"<tr><td>(\d+)</td><td>", text)]


def test_markdown_contains_all_30_heuristics_once(catalog):
    text = render_markdown(make_complete_sheet(catalog), catalog)
    assert sorted(md_heuristic_numbers(text)) == list(range(1, 31))


def test_markdown_stage_order_and_perspective_order(catalog):
    text = render_markdown(make_complete_sheet(catalog), catalog)
    s1, s2, s3 = (
        text.index("## Stage 1"),
        text.index("## Stage 2"),
        text.index("## Stage 3"),
    )
    assert s1 < s2 < s3
    positions = [text.index(f"### {name}") for name in PERSPECTIVE_NAMES]
    assert positions == sorted(positions)
    assert all(s2 < p < s3 for p in positions)


def test_markdown_max_score_line(catalog):
    sheet = make_complete_sheet(catalog, values=[2] * 30)
    text = render_markdown(sheet, catalog)
    assert "Total: 60 / 60" in text


def test_markdown_total_rederived_from_sheet(catalog):
    sheet = make_complete_sheet(catalog, values=[1] * 30)
    summary = compute_score(sheet, catalog)
    text = render_markdown(sheet, catalog)
    assert f"Total: {summary.total} / 60" in text


def test_markdown_words_and_notes_verbatim(catalog):
    sheet = make_complete_sheet(catalog)
    text = render_markdown(sheet, catalog)
    for word in sheet.overview.circled_words:
        assert word in text
    assert "note 17" in text
    assert "tighten the colour palette" in text


def test_markdown_escapes_pipes_in_notes(catalog):
    sheet = make_complete_sheet(catalog, finalize=False)
    sheet.set_response(5, 1, "a|b")
    sheet.finalize()
    text = render_markdown(sheet, catalog)
    assert "a\\|b" in text


def test_markdown_rejects_draft(catalog):
    with pytest.raises(NotFinalizedError):
        render_markdown(make_complete_sheet(catalog, finalize=False), catalog)


def test_markdown_rejects_catalog_mismatch(catalog):
    sheet = make_complete_sheet(catalog)
    sheet.catalog_version = "v3"
    with pytest.raises(CatalogMismatchError):
        render_markdown(sheet, catalog)


def test_renderers_are_deterministic(catalog):
    sheet = make_complete_sheet(catalog)
    assert render_markdown(sheet, catalog) == render_markdown(sheet, catalog)
    assert render_html(sheet, catalog) == render_html(sheet, catalog)


def test_html_contains_all_30_heuristics_once(catalog):
    text = render_html(make_complete_sheet(catalog), catalog)
    assert sorted(html_heuristic_numbers(text)) == list(range(1, 31))
    assert text.startswith("<!DOCTYPE html>")
    assert "<style>" in text  # self-contained single file


def test_html_escapes_markup_in_notes(catalog):
    sheet = make_complete_sheet(catalog, finalize=False)
    sheet.set_response(9, 0, "<script>alert(1)</script>")
    sheet.finalize()
    text = render_html(sheet, catalog)
    assert "<script>" not in text
    assert "&lt;script&gt;" in text


def test_html_rejects_draft(catalog):
    with pytest.raises(NotFinalizedError):
        render_html(make_complete_sheet(catalog, finalize=False), catalog)


def test_empty_note_rendered_explicitly(catalog):
    sheet = make_complete_sheet(catalog, finalize=False)
    sheet.set_response(3, 1, "")
    sheet.finalize()
    assert "(none)" in render_markdown(sheet, catalog)


def test_diff_report_zero(catalog):
    sheet = make_complete_sheet(catalog, values=[1] * 30)
    other = make_complete_sheet(catalog, values=[1] * 30)
    delta = diff(sheet, other)
    text = render_diff_report(delta, sheet, other, catalog)
    assert "no change" in text
    assert "No heuristic changed." in text


def test_diff_report_design_row(catalog):
    earlier_values = [0] * 30
    earlier_values[21] = -1
    later_values = [0] * 30
    later_values[21] = 2
    earlier = make_complete_sheet(catalog, values=earlier_values)
    later = make_complete_sheet(catalog, values=later_values)
    delta = diff(earlier, later)
    text = render_diff_report(delta, earlier, later, catalog)
    assert "| Design | +3 |" in text
    assert "Total change: +3" in text
    assert "| 22 |" in text


def test_diff_report_rejects_inconsistent_inputs(catalog):
    a = make_complete_sheet(catalog)
    b = make_complete_sheet(catalog)
    c = make_complete_sheet(catalog)
    delta = diff(a, b)
    with pytest.raises(SheetMismatchError):
        render_diff_report(delta, a, c, catalog)


def test_score_csv_shape(catalog):
    sheet = make_complete_sheet(catalog, values=[1] * 30)
    text = score_csv(sheet, catalog)
    lines = text.strip().split("\n")
    assert lines[0] == "heuristic,perspective,value"
    assert len(lines) == 31
    assert lines[1] == "1,user,1"
    assert lines[30] == "30,visual_marks,1"


def test_perspective_figure_written(catalog, tmp_path):
    sheet = make_complete_sheet(catalog, values=[1] * 30)
    out = perspective_bar_chart(sheet, catalog, tmp_path / "scores.png")
    data = out.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"


def test_diff_figure_written(catalog, tmp_path):
    a = make_complete_sheet(catalog, values=[0] * 30)
    b = make_complete_sheet(catalog, values=[1] * 30)
    out = diff_bar_chart(diff(a, b), catalog, tmp_path / "delta.png")
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_figure_rejects_draft(catalog, tmp_path):
    with pytest.raises(NotFinalizedError):
        perspective_bar_chart(
            make_complete_sheet(catalog, finalize=False), catalog, tmp_path / "x.png"
        )
