"""Cohort statistics over finalized critiques.

All estimators use the sample (n-1) convention. The two-tailed t-test p-value
is computed from the regularized incomplete beta function I_x(df/2, 1/2) with
x = df/(df + t^2), evaluated by a modified Lentz continued fraction, so no
external statistics tables or libraries are involved.

Everything here is a pure function over immutable inputs.
"""
from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

from .catalog import HEURISTIC_COUNT, HeuristicCatalog, LIKERT_MAX, LIKERT_MIN
from .critique import CritiqueSheet
from .errors import AnalyticsError, NotFinalizedError

MATRIX_HEADER = ["respondent", "group", "stimulus"] + [
    f"q{i}" for i in range(1, HEURISTIC_COUNT + 1)
]


@dataclass(frozen=True)
class RowLabel:
    respondent: str
    group: str
    stimulus: str


@dataclass(frozen=True)
class ResponseMatrix:
    """One row per respondent per stimulus, 30 Likert answers each."""

    rows: tuple[tuple[int, ...], ...]
    row_labels: tuple[RowLabel, ...]

    def totals(self) -> list[int]:
        return [sum(row) for row in self.rows]


def import_matrix(source: Union[str, Path, io.TextIOBase]) -> ResponseMatrix:
    """Parse and validate the response-matrix CSV.

    Expects the exact header ``respondent,group,stimulus,q1..q30``; reports
    the row and column of the first out-of-range cell.
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return _parse_matrix(fh)
    return _parse_matrix(source)


def _parse_matrix(fh: Iterable[str]) -> ResponseMatrix:
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise AnalyticsError("matrix CSV is empty") from None
    if [h.strip() for h in header] != MATRIX_HEADER:
        raise AnalyticsError(
            f"matrix header must be {','.join(MATRIX_HEADER)!r}"
        )
    rows: list[tuple[int, ...]] = []
    labels: list[RowLabel] = []
    for lineno, record in enumerate(reader, start=2):
        if not record:
            continue
        if len(record) != len(MATRIX_HEADER):
            raise AnalyticsError(
                f"row {lineno}: expected {len(MATRIX_HEADER)} columns, got {len(record)}"
            )
        values = []
        for col, cell in enumerate(record[3:], start=1):
            try:
                value = int(cell)
            except ValueError:
                raise AnalyticsError(
                    f"row {lineno}, column q{col}: {cell!r} is not an integer"
                ) from None
            if not LIKERT_MIN <= value <= LIKERT_MAX:
                raise AnalyticsError(
                    f"row {lineno}, column q{col}: value {value} outside "
                    f"{LIKERT_MIN}..{LIKERT_MAX}"
                )
            values.append(value)
        rows.append(tuple(values))
        labels.append(RowLabel(record[0], record[1], record[2]))
    if not rows:
        raise AnalyticsError("matrix CSV has a header but no data rows")
    return ResponseMatrix(rows=tuple(rows), row_labels=tuple(labels))


@dataclass(frozen=True)
class ReliabilityResult:
    alpha: float
    k: int
    item_variances: tuple[float, ...]
    total_variance: float

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "k": self.k,
            "item_variances": list(self.item_variances),
            "total_variance": self.total_variance,
        }


def cronbach_alpha(
    matrix: Union[ResponseMatrix, Sequence[Sequence[float]]]
) -> ReliabilityResult:
    """Cronbach's alpha: (k/(k-1)) * (1 - sum(item variances)/total variance).

    Rows are respondents, columns are items; sample variances throughout.
    """
    rows = matrix.rows if isinstance(matrix, ResponseMatrix) else [tuple(r) for r in matrix]
    n = len(rows)
    if n < 2:
        raise AnalyticsError(f"alpha needs at least 2 respondent rows, got {n}")
    k = len(rows[0])
    if k < 2:
        raise AnalyticsError(f"alpha needs at least 2 items, got {k}")
    if any(len(r) != k for r in rows):
        raise AnalyticsError("all rows must have the same number of items")

    item_variances = tuple(
        statistics.variance([row[j] for row in rows]) for j in range(k)
    )
    totals = [sum(row) for row in rows]
    total_variance = statistics.variance(totals)
    if total_variance == 0:
        raise AnalyticsError("alpha undefined: total-score variance is zero")
    alpha = (k / (k - 1)) * (1 - sum(item_variances) / total_variance)
    return ReliabilityResult(alpha, k, item_variances, total_variance)


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: float
    p_two_tailed: float
    mean1: float
    mean2: float
    sd1: float
    sd2: float
    n1: int
    n2: int
    welch: bool = False

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "df": self.df,
            "p_two_tailed": self.p_two_tailed,
            "mean1": self.mean1,
            "mean2": self.mean2,
            "sd1": self.sd1,
            "sd2": self.sd2,
            "n1": self.n1,
            "n2": self.n2,
            "welch": self.welch,
        }


def t_test_independent(
    group1: Sequence[float], group2: Sequence[float], welch: bool = False
) -> TTestResult:
    """Independent two-sample t-test, Student's pooled form by default.

    ``welch=True`` drops the equal-variance assumption and uses the
    Welch-Satterthwaite degrees of freedom.
    """
    n1, n2 = len(group1), len(group2)
    if n1 < 2 or n2 < 2:
        raise AnalyticsError(
            f"each group needs at least 2 observations, got {n1} and {n2}"
        )
    mean1, mean2 = statistics.fmean(group1), statistics.fmean(group2)
    var1, var2 = statistics.variance(group1), statistics.variance(group2)

    if welch:
        se1, se2 = var1 / n1, var2 / n2
        se = se1 + se2
        if se == 0:
            raise AnalyticsError("t undefined: both group variances are zero")
        t = (mean1 - mean2) / math.sqrt(se)
        df = se * se / (se1 * se1 / (n1 - 1) + se2 * se2 / (n2 - 1))
    else:
        pooled = ((n1 - 1) * var1 + (n2 - 1) * var2) / (n1 + n2 - 2)
        if pooled == 0:
            raise AnalyticsError("t undefined: pooled variance is zero")
        t = (mean1 - mean2) / math.sqrt(pooled * (1 / n1 + 1 / n2))
        df = float(n1 + n2 - 2)

    return TTestResult(
        t=t,
        df=df,
        p_two_tailed=student_t_two_tailed_p(t, df),
        mean1=mean1,
        mean2=mean2,
        sd1=math.sqrt(var1),
        sd2=math.sqrt(var2),
        n1=n1,
        n2=n2,
        welch=welch,
    )


def student_t_two_tailed_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for T ~ Student-t(df); equals I_x(df/2, 1/2), x = df/(df+t^2)."""
    if df <= 0:
        raise AnalyticsError(f"degrees of freedom must be positive, got {df}")
    if t == 0:
        return 1.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) via the continued fraction (modified Lentz algorithm).

    The symmetry I_x(a,b) = 1 - I_{1-x}(b,a) keeps the fraction in its
    fast-converging region x < (a+1)/(a+b+2).
    """
    if a <= 0 or b <= 0:
        raise ValueError("beta parameters must be positive")
    if x <= 0:
        return 0.0
    if x >= 1:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1) / (a + b + 2):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1 - x) / b


def _beta_cf(a: float, b: float, x: float, max_iter: int = 300, eps: float = 1e-15) -> float:
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1, a - 1
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        num = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + num * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + num / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + num * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + num / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise AnalyticsError(
        f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})"
    )


@dataclass(frozen=True)
class DescriptiveStats:
    mean: float
    sd: Optional[float]  # None when n < 2
    n: int


def descriptive_stats(values: Sequence[float]) -> DescriptiveStats:
    """Sample mean and sample (n-1) standard deviation."""
    if not values:
        raise AnalyticsError("cannot describe an empty list")
    mean = statistics.fmean(values)
    sd = statistics.stdev(values) if len(values) >= 2 else None
    return DescriptiveStats(mean=mean, sd=sd, n=len(values))


GroupingFn = Callable[[CritiqueSheet], tuple[str, str]]


def _default_grouping(sheet: CritiqueSheet) -> tuple[str, str]:
    return (sheet.appraiser, sheet.artefact_key)


@dataclass(frozen=True)
class WordFrequencyTable:
    """Counts per (group, stimulus, word); every lexicon word is present."""

    counts: dict[tuple[str, str, str], int]

    def rows(self) -> list[tuple[str, str, str, int]]:
        return [
            (g, s, w, c) for (g, s, w), c in sorted(self.counts.items())
        ]

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["group", "stimulus", "word", "count"])
        writer.writerows(self.rows())
        return out.getvalue()


def word_frequencies(
    sheets: Iterable[CritiqueSheet],
    catalog: HeuristicCatalog,
    grouping: Optional[GroupingFn] = None,
) -> WordFrequencyTable:
    """Tabulate circled-word usage per (group, stimulus).

    Each finalized sheet contributes exactly its five circled words; all
    twenty lexicon words get a row (zero counts included) so the table is
    directly plottable.
    """
    tag = grouping or _default_grouping
    counts: dict[tuple[str, str, str], int] = {}
    for sheet in sheets:
        if not sheet.is_finalized:
            raise NotFinalizedError(
                f"sheet {sheet.sheet_id} is not finalized"
            )
        group, stimulus = tag(sheet)
        for entry in catalog.lexicon:
            counts.setdefault((group, stimulus, entry.word), 0)
        for word in sheet.overview.circled_words:
            counts[(group, stimulus, word)] = counts.get((group, stimulus, word), 0) + 1
    return WordFrequencyTable(counts=counts)


@dataclass(frozen=True)
class GroupComparisonRow:
    stimulus: str
    group: str
    mean: float
    sd: Optional[float]
    n: int
    t: Optional[float]
    df: Optional[float]
    p: Optional[float]


def compare_groups(matrix: ResponseMatrix, welch: bool = False) -> list[GroupComparisonRow]:
    """Per-stimulus group comparison of total scores.

    Emits one row per (stimulus, group) with descriptive statistics; when a
    stimulus has exactly two groups the t-test values are attached to its
    first row.
    """
    by_stimulus: dict[str, dict[str, list[int]]] = {}
    for label, row in zip(matrix.row_labels, matrix.rows):
        by_stimulus.setdefault(label.stimulus, {}).setdefault(label.group, []).append(
            sum(row)
        )
    out: list[GroupComparisonRow] = []
    for stimulus, groups in by_stimulus.items():
        names = list(groups)
        test: Optional[TTestResult] = None
        if len(names) == 2:
            try:
                test = t_test_independent(groups[names[0]], groups[names[1]], welch=welch)
            except AnalyticsError:
                test = None
        for i, name in enumerate(names):
            stats = descriptive_stats(groups[name])
            out.append(
                GroupComparisonRow(
                    stimulus=stimulus,
                    group=name,
                    mean=stats.mean,
                    sd=stats.sd,
                    n=stats.n,
                    t=test.t if test and i == 0 else None,
                    df=test.df if test and i == 0 else None,
                    p=test.p_two_tailed if test and i == 0 else None,
                )
            )
    return out


def comparison_csv(rows: Sequence[GroupComparisonRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["stimulus", "group", "mean", "sd", "n", "t", "df", "p"])
    for r in rows:
        writer.writerow(
            [
                r.stimulus,
                r.group,
                f"{r.mean:g}",
                "" if r.sd is None else f"{r.sd:g}",
                r.n,
                "" if r.t is None else f"{r.t:g}",
                "" if r.df is None else f"{r.df:g}",
                "" if r.p is None else f"{r.p:g}",
            ]
        )
    return out.getvalue()
