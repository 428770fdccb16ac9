"""Terminal workflow: create, fill, finalize, score, diff, report, stats, serve.

Exit codes: 0 success, 1 domain error, 2 usage error. All numeric output is
produced by the library functions, never recomputed here. The store location
comes from ``--store`` or the ``CDS_STORE_DIR`` environment variable.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import analytics, report
from .catalog import PERSPECTIVE_ORDER, HeuristicCatalog, load_catalog
from .critique import (
    REQUIRED_WORD_COUNT,
    CritiqueSheet,
    ScoreSummary,
    compute_score,
    diff as compute_diff,
    new_draft,
)
from .errors import CdsError
from .store import CritiqueStore

USAGE_ERROR = 2
DOMAIN_ERROR = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cds",
        description="Three-stage heuristic critique workflow for visualisation designs.",
    )
    parser.add_argument("--store", help="store directory (default: CDS_STORE_DIR or ~/.cds/store)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("new", help="create a draft critique")
    p.add_argument("--artefact", required=True, help="stable artefact key")
    p.add_argument("--appraiser", required=True, help="who is critiquing")
    p.add_argument("--sheet-id", help="explicit sheet id (scripting/tests)")

    p = sub.add_parser("fill", help="fill a draft, interactively or from a CSV")
    p.add_argument("sheet_id")
    p.add_argument("--stage", type=int, choices=(1, 2, 3), help="jump to one stage")
    p.add_argument("--answers", help="CSV of field,value[,note] rows (non-interactive)")
    p.add_argument("--finalize", action="store_true", help="finalize after a CSV fill")

    p = sub.add_parser("finalize", help="finalize a complete draft")
    p.add_argument("sheet_id")

    p = sub.add_parser("score", help="print the score summary")
    p.add_argument("sheet_id")
    p.add_argument("--output", choices=("plain", "csv"), default="plain")

    p = sub.add_parser("diff", help="delta between two finalized critiques")
    p.add_argument("earlier_id")
    p.add_argument("later_id")
    p.add_argument("--output", choices=("plain", "csv"), default="plain")
    p.add_argument("--report", dest="report_out", help="write a Markdown diff report here")
    p.add_argument("--figures", help="directory for the delta bar chart")

    p = sub.add_parser("report", help="render a critique report")
    p.add_argument("sheet_id")
    p.add_argument("--format", choices=("md", "html"), default="md")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--csv", dest="csv_out", help="also write heuristic,perspective,value CSV")
    p.add_argument("--figures", help="directory for the per-perspective bar chart")

    p = sub.add_parser("history", help="list critiques of an artefact")
    p.add_argument("artefact_key")

    p = sub.add_parser("delete", help="remove a stored critique")
    p.add_argument("sheet_id")

    p = sub.add_parser("export", help="export every record to one JSON bundle")
    p.add_argument("--out", required=True)

    p = sub.add_parser("import", help="import a JSON bundle (all-or-nothing)")
    p.add_argument("--in", dest="bundle", required=True)

    stats = sub.add_parser("stats", help="cohort statistics")
    stats_sub = stats.add_subparsers(dest="stats_command", required=True)

    p = stats_sub.add_parser("alpha", help="Cronbach's alpha over a response matrix")
    p.add_argument("--matrix", required=True, help="CSV: respondent,group,stimulus,q1..q30")
    p.add_argument("--output", choices=("plain", "csv"), default="plain")

    p = stats_sub.add_parser("ttest", help="independent two-sample t-test")
    p.add_argument("--g1", required=True, help="FILE[:COLUMN] with group-1 values")
    p.add_argument("--g2", required=True, help="FILE[:COLUMN] with group-2 values")
    p.add_argument("--welch", action="store_true", help="unequal-variance variant")
    p.add_argument("--output", choices=("plain", "csv"), default="plain")

    p = stats_sub.add_parser("compare", help="per-stimulus group stats from a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--welch", action="store_true")
    p.add_argument("--out", help="output CSV file (default: stdout)")

    p = sub.add_parser("words", help="first-impression word frequency table (CSV)")
    p.add_argument("--artefact", help="restrict to one artefact key")
    p.add_argument("--group-by", choices=("appraiser", "none"), default="appraiser")
    p.add_argument("--out", help="output CSV file (default: stdout)")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--addr", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--ui-origin", help="origin allowed for CORS (the companion UI)")
    p.add_argument("--static", help="serve a built UI bundle from this directory")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except CdsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "serve":
        from . import service

        service.run(
            addr=args.addr,
            port=args.port,
            store_dir=args.store,
            ui_origin=args.ui_origin,
            static_dir=args.static,
        )
        return 0

    catalog = load_catalog()
    store = CritiqueStore(args.store)

    if args.command == "new":
        sheet = new_draft(args.artefact, args.appraiser, catalog)
        if args.sheet_id:
            sheet.sheet_id = args.sheet_id
        store.save(sheet)
        print(sheet.sheet_id)
        return 0

    if args.command == "fill":
        return _cmd_fill(args, store, catalog)

    if args.command == "finalize":
        sheet = store.load_sheet(args.sheet_id)
        sheet.finalize()
        store.save(sheet)
        print(f"finalized {sheet.sheet_id}")
        return 0

    if args.command == "score":
        sheet = store.load_sheet(args.sheet_id)
        summary = compute_score(sheet, catalog)
        _print_score(summary, args.output)
        return 0

    if args.command == "diff":
        earlier = store.load_sheet(args.earlier_id)
        later = store.load_sheet(args.later_id)
        delta = compute_diff(earlier, later)
        if args.output == "csv":
            writer = csv.writer(sys.stdout, lineterminator="\n")
            writer.writerow(["heuristic", "delta"])
            for number, d in sorted(delta.per_heuristic_delta.items()):
                writer.writerow([number, d])
        else:
            print(f"total_delta={delta.total_delta}")
            for pid in PERSPECTIVE_ORDER:
                print(f"{pid.value}={delta.per_perspective_delta[pid]}")
            print(f"words_added={','.join(sorted(delta.words_added))}")
            print(f"words_removed={','.join(sorted(delta.words_removed))}")
        if args.report_out:
            text = report.render_diff_report(delta, earlier, later, catalog)
            Path(args.report_out).write_text(text, encoding="utf-8")
        if args.figures:
            from . import figures

            out_dir = Path(args.figures)
            out_dir.mkdir(parents=True, exist_ok=True)
            path = figures.diff_bar_chart(
                delta, catalog, out_dir / f"{args.earlier_id}_{args.later_id}_delta.png"
            )
            print(f"figure: {path}", file=sys.stderr)
        return 0

    if args.command == "report":
        sheet = store.load_sheet(args.sheet_id)
        text = (
            report.render_markdown(sheet, catalog)
            if args.format == "md"
            else report.render_html(sheet, catalog)
        )
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        if args.csv_out:
            Path(args.csv_out).write_text(
                report.score_csv(sheet, catalog), encoding="utf-8"
            )
        if args.figures:
            from . import figures

            out_dir = Path(args.figures)
            out_dir.mkdir(parents=True, exist_ok=True)
            path = figures.perspective_bar_chart(
                sheet, catalog, out_dir / f"{sheet.sheet_id}_perspectives.png"
            )
            print(f"figure: {path}", file=sys.stderr)
        return 0

    if args.command == "history":
        for header in store.history(args.artefact_key, catalog):
            total = header.score.total if header.score else "-"
            print(
                f"{header.created_at}  {header.sheet_id}  {header.status:9s}  "
                f"total={total}  by {header.appraiser}"
            )
        return 0

    if args.command == "delete":
        store.delete(args.sheet_id)
        print(f"deleted {args.sheet_id}")
        return 0

    if args.command == "export":
        count = store.export_all(args.out)
        print(f"exported {count}")
        return 0

    if args.command == "import":
        count = store.import_all(args.bundle)
        print(f"imported {count}")
        return 0

    if args.command == "stats":
        return _cmd_stats(args)

    if args.command == "words":
        keys = [args.artefact] if args.artefact else store.artefact_keys()
        sheets = []
        for key in keys:
            for header in store.history(key, catalog):
                if header.status == "finalized":
                    sheets.append(store.load_sheet(header.sheet_id))
        grouping = None
        if args.group_by == "none":
            grouping = lambda sheet: ("all", sheet.artefact_key)  # noqa: E731
        table = analytics.word_frequencies(sheets, catalog, grouping)
        _write_text(table.to_csv(), args.out)
        return 0

    raise AssertionError(f"unhandled command {args.command}")


def _print_score(summary: ScoreSummary, output: str) -> None:
    pos, neg, neu = summary.circled_sentiment_counts
    if output == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        header = ["total", "mean"] + [pid.value for pid in PERSPECTIVE_ORDER]
        header += ["positive_words", "negative_words", "neutral_words"]
        writer.writerow(header)
        row = [summary.total, f"{float(summary.mean):.6g}"]
        row += [summary.perspective_subtotals[pid] for pid in PERSPECTIVE_ORDER]
        row += [pos, neg, neu]
        writer.writerow(row)
    else:
        print(f"total={summary.total} mean={float(summary.mean):.2f}")
        for pid in PERSPECTIVE_ORDER:
            print(f"{pid.value}={summary.perspective_subtotals[pid]}")
        print(f"positive_words={pos} negative_words={neg} neutral_words={neu}")


def _cmd_stats(args: argparse.Namespace) -> int:
    if args.stats_command == "alpha":
        result = analytics.cronbach_alpha(analytics.import_matrix(args.matrix))
        if args.output == "csv":
            writer = csv.writer(sys.stdout, lineterminator="\n")
            writer.writerow(["alpha", "k", "total_variance"])
            writer.writerow([f"{result.alpha:.6f}", result.k, f"{result.total_variance:g}"])
        else:
            print(f"alpha={result.alpha:.6f}")
        return 0

    if args.stats_command == "ttest":
        g1 = _read_column(args.g1)
        g2 = _read_column(args.g2)
        result = analytics.t_test_independent(g1, g2, welch=args.welch)
        if args.output == "csv":
            writer = csv.writer(sys.stdout, lineterminator="\n")
            writer.writerow(["t", "df", "p", "mean1", "mean2", "sd1", "sd2", "n1", "n2"])
            writer.writerow(
                [
                    f"{result.t:g}",
                    f"{result.df:g}",
                    f"{result.p_two_tailed:g}",
                    f"{result.mean1:g}",
                    f"{result.mean2:g}",
                    f"{result.sd1:g}",
                    f"{result.sd2:g}",
                    result.n1,
                    result.n2,
                ]
            )
        else:
            print(f"t={result.t:g} p={result.p_two_tailed:g}")
            print(
                f"df={result.df:g} mean1={result.mean1:g} mean2={result.mean2:g} "
                f"sd1={result.sd1:g} sd2={result.sd2:g} n1={result.n1} n2={result.n2}"
            )
        return 0

    if args.stats_command == "compare":
        rows = analytics.compare_groups(
            analytics.import_matrix(args.matrix), welch=args.welch
        )
        _write_text(analytics.comparison_csv(rows), args.out)
        return 0

    raise AssertionError(f"unhandled stats command {args.stats_command}")


def _write_text(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_column(spec: str) -> list[float]:
    """Read numbers from FILE or FILE:COLUMN (header name or 0-based index)."""
    path, _, column = spec.partition(":")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(cell.strip() for cell in r)]
    if not rows:
        raise CdsError(f"{path}: no data")
    if not column:
        values = []
        start = 0
        try:
            float(rows[0][0])
        except ValueError:
            start = 1  # single unnamed header row
        for r in rows[start:]:
            values.append(float(r[0]))
        return values
    header = rows[0]
    if column.isdigit():
        idx = int(column)
        body = rows[1:] if not _all_numeric(header) else rows
    else:
        if column not in header:
            raise CdsError(f"{path}: no column named {column!r}")
        idx = header.index(column)
        body = rows[1:]
    try:
        return [float(r[idx]) for r in body]
    except (IndexError, ValueError) as exc:
        raise CdsError(f"{path}: bad value in column {column!r}: {exc}") from exc


def _all_numeric(row: list[str]) -> bool:
    try:
        for cell in row:
            float(cell)
        return True
    except ValueError:
        return False


# -- fill -------------------------------------------------------------------


def _cmd_fill(args: argparse.Namespace, store: CritiqueStore, catalog: HeuristicCatalog) -> int:
    sheet = store.load_sheet(args.sheet_id)
    if args.answers:
        _fill_from_csv(sheet, Path(args.answers), catalog)
        if args.finalize:
            sheet.finalize()
        store.save(sheet)
        print(f"filled {sheet.sheet_id}" + (" (finalized)" if sheet.is_finalized else ""))
        return 0
    try:
        _fill_interactive(sheet, catalog, stage=args.stage)
    except (EOFError, KeyboardInterrupt):
        print("\nsaving partial draft", file=sys.stderr)
    store.save(sheet)
    return 0


def _fill_from_csv(sheet: CritiqueSheet, path: Path, catalog: HeuristicCatalog) -> None:
    """Apply field,value[,note] rows; fields: design_name, essence, word,
    reflections, next_steps, or a heuristic number 1..30."""
    name, essence = sheet.overview.design_name, sheet.overview.essence
    words = list(sheet.overview.circled_words)
    reflections, next_steps = sheet.review.reflections, sheet.review.next_steps
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not row[0].strip():
                continue
            field = row[0].strip().lower()
            value = row[1] if len(row) > 1 else ""
            note = row[2] if len(row) > 2 else ""
            if field == "design_name":
                name = value
            elif field == "essence":
                essence = value
            elif field == "word":
                words.append(value)
            elif field == "reflections":
                reflections = value
            elif field == "next_steps":
                next_steps = value
            elif field.isdigit():
                sheet.set_response(int(field), int(value), note)
            else:
                raise CdsError(f"{path}:{lineno}: unknown field {field!r}")
    sheet.set_overview(name, essence, words, catalog)
    sheet.set_review(reflections, next_steps)


def _prompt(text: str) -> str:
    return input(text).strip()


def _fill_interactive(
    sheet: CritiqueSheet, catalog: HeuristicCatalog, stage: Optional[int] = None
) -> None:
    stages = [stage] if stage else [1, 2, 3]
    if 1 in stages:
        _stage_overview(sheet, catalog)
    if 2 in stages:
        _stage_detail(sheet, catalog)
    if 3 in stages:
        _stage_review(sheet, catalog)


def _stage_overview(sheet: CritiqueSheet, catalog: HeuristicCatalog) -> None:
    print("Stage 1 - Overview")
    name = _prompt(f"Design name [{sheet.overview.design_name}]: ") or sheet.overview.design_name
    essence = _prompt(f"Essence [{sheet.overview.essence}]: ") or sheet.overview.essence
    print("First-impression words (pick exactly 5):")
    print("  " + " ".join(e.word for e in catalog.lexicon))
    while True:
        raw = _prompt("Circle 5 words (comma or space separated): ")
        words = [w for w in raw.replace(",", " ").split() if w]
        if len(words) != REQUIRED_WORD_COUNT:
            print(f"exactly {REQUIRED_WORD_COUNT} required, you gave {len(words)}")
            continue
        try:
            sheet.set_overview(name, essence, words, catalog)
            return
        except CdsError as exc:
            print(str(exc))


def _stage_detail(sheet: CritiqueSheet, catalog: HeuristicCatalog) -> None:
    todo = sheet.unset_numbers()  # resume at the first unanswered heuristic
    if not todo:
        print("Stage 2 - Detail: all 30 heuristics already answered")
        return
    print(f"Stage 2 - Detail ({len(todo)} remaining; enter q to stop and save)")
    for number in todo:
        h = catalog.heuristic(number)
        print(f"\n#{number} [{catalog.perspective(h.perspective).display_name}] {h.question}")
        print(f"   {h.negative_anchor}  <- -2 -1 0 +1 +2 ->  {h.positive_anchor}")
        while True:
            raw = _prompt("value: ")
            if raw.lower() == "q":
                return
            try:
                value = int(raw)
            except ValueError:
                print("enter an integer between -2 and +2")
                continue
            if not -2 <= value <= 2:
                print("value must be between -2 and +2")
                continue
            note = _prompt("note (optional): ")
            sheet.set_response(number, value, note)
            break


def _stage_review(sheet: CritiqueSheet, catalog: HeuristicCatalog) -> None:
    print("Stage 3 - Review")
    unset = sheet.unset_numbers()
    if unset:
        print("score unavailable; unanswered heuristics: " + ", ".join(map(str, unset)))
    else:
        _print_score(compute_score(sheet, catalog), "plain")
    reflections = _prompt("Reflections: ")
    next_steps = _prompt("Improvements and next steps: ")
    sheet.set_review(
        reflections or sheet.review.reflections, next_steps or sheet.review.next_steps
    )
    problems, _ = sheet.completeness_problems()
    if problems:
        print("not finalizable yet: " + "; ".join(problems))
        return
    if _prompt("Finalize now? [y/N]: ").lower().startswith("y"):
        sheet.finalize()
        print(f"finalized {sheet.sheet_id}")
