"""End-to-end CLI tests: the scripted new -> fill -> finalize -> score ->
report -> diff pipeline against golden files, plus exit-code coverage.

SOURCE_DATE_EPOCH pins timestamps so outputs are byte-reproducible.
"""
import os
import subprocess
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).resolve().parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"
EPOCH = "1736935200"  # 2025-01-15T10:00:00Z


def run_cds(args, store_dir, check=True, epoch=EPOCH):
    env = dict(os.environ, CDS_STORE_DIR=str(store_dir), SOURCE_DATE_EPOCH=epoch)
    env.setdefault("MPLBACKEND", "Agg")
    proc = subprocess.run(
        [sys.executable, "-m", "cds", *args],
        capture_output=True,
        text=True,
        env=env,
    )
    if check and proc.returncode != 0:
        raise AssertionError(
            f"cds {' '.join(args)} exited {proc.returncode}\n"
            f"stdout: {proc.stdout}\nstderr: {proc.stderr}"
        )
    return proc


@pytest.fixture(scope="module")
def populated_store(tmp_path_factory):
    """The scripted pipeline: two critiques of one artefact."""
    store = tmp_path_factory.mktemp("clistore")
    out = run_cds(
        ["new", "--artefact", "metro-map", "--appraiser", "alice", "--sheet-id", "sheet-a"],
        store,
    )
    assert out.stdout == "sheet-a\n"
    run_cds(["fill", "sheet-a", "--answers", str(FIXTURES / "answers_a.csv")], store)
    out = run_cds(["finalize", "sheet-a"], store)
    assert out.stdout == "finalized sheet-a\n"
    run_cds(
        ["new", "--artefact", "metro-map", "--appraiser", "alice", "--sheet-id", "sheet-b"],
        store,
    )
    out = run_cds(
        ["fill", "sheet-b", "--answers", str(FIXTURES / "answers_b.csv"), "--finalize"],
        store,
    )
    assert "finalized" in out.stdout
    return store


def test_score_matches_golden(populated_store):
    out = run_cds(["score", "sheet-a"], populated_store)
    assert out.stdout == (GOLDEN / "score_a.txt").read_text()
    out = run_cds(["score", "sheet-b"], populated_store)
    assert out.stdout == (GOLDEN / "score_b.txt").read_text()


def test_score_csv_matches_golden(populated_store):
    out = run_cds(["score", "sheet-a", "--output", "csv"], populated_store)
    assert out.stdout == (GOLDEN / "score_a.csv").read_text()


def test_diff_matches_golden(populated_store):
    out = run_cds(["diff", "sheet-a", "sheet-b"], populated_store)
    assert out.stdout == (GOLDEN / "diff_ab.txt").read_text()


def test_report_matches_golden(populated_store, tmp_path):
    out_file = tmp_path / "report.md"
    run_cds(["report", "sheet-a", "--format", "md", "--out", str(out_file)], populated_store)
    assert out_file.read_text() == (GOLDEN / "report_a.md").read_text()


def test_diff_report_matches_golden(populated_store, tmp_path):
    out_file = tmp_path / "diff.md"
    run_cds(["diff", "sheet-a", "sheet-b", "--report", str(out_file)], populated_store)
    assert out_file.read_text() == (GOLDEN / "diff_report_ab.md").read_text()


def test_report_to_stdout_is_reproducible(populated_store):
    first = run_cds(["report", "sheet-a"], populated_store)
    second = run_cds(["report", "sheet-a"], populated_store)
    assert first.stdout == second.stdout


def test_report_html_and_figures(populated_store, tmp_path):
    out_file = tmp_path / "report.html"
    figures = tmp_path / "figs"
    run_cds(
        [
            "report", "sheet-a", "--format", "html",
            "--out", str(out_file),
            "--csv", str(tmp_path / "scores.csv"),
            "--figures", str(figures),
        ],
        populated_store,
    )
    assert out_file.read_text().startswith("<!DOCTYPE html>")
    assert (tmp_path / "scores.csv").read_text().startswith("heuristic,perspective,value")
    png = figures / "sheet-a_perspectives.png"
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_diff_figures(populated_store, tmp_path):
    figures = tmp_path / "figs"
    run_cds(["diff", "sheet-a", "sheet-b", "--figures", str(figures)], populated_store)
    assert (figures / "sheet-a_sheet-b_delta.png").exists()


def test_history_lists_both(populated_store):
    out = run_cds(["history", "metro-map"], populated_store)
    lines = out.stdout.strip().split("\n")
    assert len(lines) == 2
    assert "sheet-a" in lines[0] and "total=10" in lines[0]
    assert "sheet-b" in lines[1] and "total=32" in lines[1]


def test_words_csv(populated_store):
    out = run_cds(["words"], populated_store)
    lines = out.stdout.strip().split("\n")
    assert lines[0] == "group,stimulus,word,count"
    assert "alice,metro-map,clear,2" in lines
    assert "alice,metro-map,complex,1" in lines
    assert len(lines) == 21


def test_words_group_by_none(populated_store):
    out = run_cds(["words", "--group-by", "none"], populated_store)
    assert "all,metro-map,clear,2" in out.stdout


def test_export_import_between_stores(populated_store, tmp_path):
    bundle = tmp_path / "bundle.json"
    out = run_cds(["export", "--out", str(bundle)], populated_store)
    assert out.stdout == "exported 2\n"
    out = run_cds(["import", "--in", str(bundle)], tmp_path / "fresh")
    assert out.stdout == "imported 2\n"
    score = run_cds(["score", "sheet-a"], tmp_path / "fresh")
    assert score.stdout == (GOLDEN / "score_a.txt").read_text()


def test_stats_alpha_fixture(tmp_path):
    out = run_cds(
        ["stats", "alpha", "--matrix", str(FIXTURES / "matrix_constant.csv")], tmp_path
    )
    assert out.stdout == "alpha=1.000000\n"


def test_stats_ttest_identical_groups(tmp_path):
    out = run_cds(
        ["stats", "ttest", "--g1", str(FIXTURES / "g1.csv"), "--g2", str(FIXTURES / "g1.csv")],
        tmp_path,
    )
    assert out.stdout.splitlines()[0] == "t=0 p=1"


def test_stats_ttest_fixture(tmp_path):
    out = run_cds(
        ["stats", "ttest", "--g1", str(FIXTURES / "g1.csv"), "--g2", str(FIXTURES / "g2.csv")],
        tmp_path,
    )
    assert out.stdout.splitlines()[0] == "t=-1.22474 p=0.287864"


def test_stats_compare_csv(tmp_path):
    out = run_cds(
        ["stats", "compare", "--matrix", str(FIXTURES / "matrix_constant.csv")], tmp_path
    )
    lines = out.stdout.strip().split("\n")
    assert lines[0] == "stimulus,group,mean,sd,n,t,df,p"
    assert len(lines) == 3  # two groups of one stimulus


# -- exit codes ---------------------------------------------------------------


def test_usage_error_exit_2(tmp_path):
    out = run_cds(["new", "--appraiser", "alice"], tmp_path, check=False)
    assert out.returncode == 2


def test_unknown_command_exit_2(tmp_path):
    out = run_cds(["frobnicate"], tmp_path, check=False)
    assert out.returncode == 2


def test_domain_error_exit_1(tmp_path):
    out = run_cds(["score", "missing-sheet"], tmp_path, check=False)
    assert out.returncode == 1
    assert "missing-sheet" in out.stderr


def test_score_of_incomplete_draft_exit_1(tmp_path):
    run_cds(["new", "--artefact", "x", "--appraiser", "a", "--sheet-id", "s1"], tmp_path)
    out = run_cds(["score", "s1"], tmp_path, check=False)
    assert out.returncode == 1


def test_out_of_range_answer_exit_1(tmp_path):
    run_cds(["new", "--artefact", "x", "--appraiser", "a", "--sheet-id", "s1"], tmp_path)
    answers = tmp_path / "bad.csv"
    answers.write_text("7,3,too high\n")
    out = run_cds(["fill", "s1", "--answers", str(answers)], tmp_path, check=False)
    assert out.returncode == 1
    assert "range" in out.stderr.lower() or "-2" in out.stderr


def test_unknown_word_in_answers_exit_1(tmp_path):
    run_cds(["new", "--artefact", "x", "--appraiser", "a", "--sheet-id", "s1"], tmp_path)
    answers = tmp_path / "bad.csv"
    answers.write_text("word,amazing\n")
    out = run_cds(["fill", "s1", "--answers", str(answers)], tmp_path, check=False)
    assert out.returncode == 1
    assert "amazing" in out.stderr


def test_unwritable_store_exit_1(tmp_path):
    target = tmp_path / "blocker"
    target.write_text("a file, not a directory")
    out = run_cds(
        ["new", "--artefact", "x", "--appraiser", "a"], target / "store", check=False
    )
    assert out.returncode == 1


def test_fill_finalized_sheet_exit_1(populated_store, tmp_path):
    answers = tmp_path / "one.csv"
    answers.write_text("1,0,\n")
    out = run_cds(["fill", "sheet-a", "--answers", str(answers)], populated_store, check=False)
    assert out.returncode == 1
    assert "finalized" in out.stderr


# -- interactive wizard --------------------------------------------------------


def interactive(args, store_dir, stdin_text):
    env = dict(os.environ, CDS_STORE_DIR=str(store_dir), SOURCE_DATE_EPOCH=EPOCH)
    return subprocess.run(
        [sys.executable, "-m", "cds", *args],
        input=stdin_text,
        capture_output=True,
        text=True,
        env=env,
    )


def test_wizard_reprompts_on_six_words_and_bad_value(tmp_path):
    run_cds(["new", "--artefact", "x", "--appraiser", "a", "--sheet-id", "w1"], tmp_path)
    # Stage 1: name, essence, six words (re-prompt), then five.
    stage1 = "Demo\nthe gist\nclear clever fair bad vague useful\nclear clever fair bad vague\n"
    # Stage 2: #1 gets 3 (re-prompt), then 2 with a note; quit at #2.
    stage2 = "3\n2\nnice\nq\n"
    proc = interactive(["fill", "w1"], tmp_path, stage1 + stage2)
    assert proc.returncode == 0
    assert "exactly 5 required" in proc.stdout
    assert "between -2 and +2" in proc.stdout
    # The partial session was saved: resume sees 29 remaining.
    resume = interactive(["fill", "w1", "--stage", "2"], tmp_path, "q\n")
    assert "29 remaining" in resume.stdout


def test_wizard_full_run_finalizes(tmp_path):
    run_cds(["new", "--artefact", "x", "--appraiser", "a", "--sheet-id", "w2"], tmp_path)
    lines = ["Demo", "the gist", "clear clever fair bad vague"]
    for _ in range(30):
        lines += ["1", ""]  # value, empty note
    lines += ["fine", "polish", "y"]  # stage 3 + accept finalize
    proc = interactive(["fill", "w2"], tmp_path, "\n".join(lines) + "\n")
    assert proc.returncode == 0
    assert "finalized w2" in proc.stdout
    score = run_cds(["score", "w2"], tmp_path)
    assert score.stdout.splitlines()[0] == "total=30 mean=1.00"
