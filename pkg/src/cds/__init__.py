"""Critique workflow for visualisation designs.

A three-stage heuristic critique (overview, detail, review): 30 questions in
six perspectives on a -2..+2 scale, five first-impression words from a fixed
twenty-word lexicon, summed scores with per-perspective subtotals, diffs
between successive critiques, reports, and cohort reliability statistics.
"""
from .analytics import (
    ReliabilityResult,
    ResponseMatrix,
    TTestResult,
    WordFrequencyTable,
    cronbach_alpha,
    descriptive_stats,
    import_matrix,
    t_test_independent,
    word_frequencies,
)
from .catalog import (
    Heuristic,
    HeuristicCatalog,
    Perspective,
    PerspectiveId,
    Sentiment,
    get_heuristic,
    load_catalog,
    verify_lexicon_partition,
)
from .critique import (
    CritiqueDiff,
    CritiqueSheet,
    ScoreSummary,
    compute_score,
    diff,
    new_draft,
)
from .errors import CdsError
from .report import render_diff_report, render_html, render_markdown, score_csv
from .store import CritiqueRecord, CritiqueStore, InMemoryStore

__version__ = "0.1.0"

__all__ = [
    "CdsError",
    "CritiqueDiff",
    "CritiqueRecord",
    "CritiqueSheet",
    "CritiqueStore",
    "Heuristic",
    "HeuristicCatalog",
    "InMemoryStore",
    "Perspective",
    "PerspectiveId",
    "ReliabilityResult",
    "ResponseMatrix",
    "ScoreSummary",
    "Sentiment",
    "TTestResult",
    "WordFrequencyTable",
    "compute_score",
    "cronbach_alpha",
    "descriptive_stats",
    "diff",
    "get_heuristic",
    "import_matrix",
    "load_catalog",
    "new_draft",
    "render_diff_report",
    "render_html",
    "render_markdown",
    "score_csv",
    "t_test_independent",
    "verify_lexicon_partition",
    "word_frequencies",
]
