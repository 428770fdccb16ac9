"""Critique lifecycle: drafts, responses, completeness, scores, diffs.

A sheet is value-like: mutating operations require Draft status and are
rejected once the sheet is finalized. The module holds no shared state;
serializing concurrent edits to one sheet is the caller's job.
"""
from __future__ import annotations

import os
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Iterable, Optional

from .catalog import (
    HEURISTIC_COUNT,
    PERSPECTIVE_ORDER,
    PERSPECTIVE_SIZE,
    HeuristicCatalog,
    PerspectiveId,
    Sentiment,
)
from .errors import (
    DuplicateWordError,
    ImmutableSheetError,
    IncompleteSheetError,
    NotFinalizedError,
    SchemaError,
    SheetMismatchError,
    UnknownWordError,
)

REQUIRED_WORD_COUNT = 5

STATUS_DRAFT = "draft"
STATUS_FINALIZED = "finalized"


def utcnow() -> datetime:
    """Current UTC time; honors SOURCE_DATE_EPOCH for reproducible output."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch:
        return datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    return datetime.now(timezone.utc)


def _rfc3339(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _parse_ts(text: str) -> datetime:
    try:
        return datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError as exc:
        raise SchemaError(f"bad timestamp {text!r}: {exc}") from exc


@dataclass
class OverviewSection:
    design_name: str = ""
    essence: str = ""
    circled_words: set[str] = field(default_factory=set)


@dataclass
class HeuristicResponse:
    heuristic_number: int
    value: Optional[int] = None
    note: str = ""


@dataclass
class ReviewSection:
    reflections: str = ""
    next_steps: str = ""


@dataclass
class CritiqueSheet:
    sheet_id: str
    artefact_key: str
    appraiser: str
    created_at: datetime
    updated_at: datetime
    catalog_version: str
    status: str = STATUS_DRAFT
    overview: OverviewSection = field(default_factory=OverviewSection)
    responses: list[HeuristicResponse] = field(default_factory=list)
    review: ReviewSection = field(default_factory=ReviewSection)

    @property
    def is_finalized(self) -> bool:
        return self.status == STATUS_FINALIZED

    def response(self, number: int) -> HeuristicResponse:
        if not 1 <= number <= len(self.responses):
            raise ValueError(f"heuristic number {number} out of range 1..{len(self.responses)}")
        return self.responses[number - 1]

    def unset_numbers(self) -> list[int]:
        return [r.heuristic_number for r in self.responses if r.value is None]

    def _require_draft(self) -> None:
        if self.is_finalized:
            raise ImmutableSheetError(
                f"sheet {self.sheet_id} is finalized and cannot be modified"
            )

    def _touch(self) -> None:
        self.updated_at = utcnow()

    def set_overview(
        self, name: str, essence: str, words: Iterable[str], catalog: HeuristicCatalog
    ) -> "CritiqueSheet":
        """Record the first-stage fields.

        Words are checked against the lexicon and for duplicates now; the
        exactly-5 cardinality is enforced at finalize so partial drafts work.
        """
        self._require_draft()
        seen: set[str] = set()
        for raw in words:
            word = raw.strip().lower()
            if word not in catalog.words:
                raise UnknownWordError(word)
            if word in seen:
                raise DuplicateWordError(word)
            seen.add(word)
        self.overview.design_name = name
        self.overview.essence = essence
        self.overview.circled_words = seen
        self._touch()
        return self

    def set_response(self, number: int, value: Optional[int], note: str = "") -> "CritiqueSheet":
        self._require_draft()
        if not 1 <= number <= len(self.responses):
            raise ValueError(
                f"heuristic number {number} out of range 1..{len(self.responses)}"
            )
        if value is not None and not -2 <= value <= 2:
            raise ValueError(f"value {value} outside Likert range -2..+2")
        slot = self.responses[number - 1]
        slot.value = value
        slot.note = note
        self._touch()
        return self

    def set_review(self, reflections: str, next_steps: str) -> "CritiqueSheet":
        self._require_draft()
        self.review.reflections = reflections
        self.review.next_steps = next_steps
        self._touch()
        return self

    def completeness_problems(self) -> tuple[list[str], list[int]]:
        """Full missing-items list; empty when the sheet can be finalized."""
        problems: list[str] = []
        unset = self.unset_numbers()
        if not self.overview.design_name.strip():
            problems.append("design_name is empty")
        words = len(self.overview.circled_words)
        if words != REQUIRED_WORD_COUNT:
            problems.append(
                f"exactly {REQUIRED_WORD_COUNT} circled words required, have {words}"
            )
        if unset:
            problems.append(
                "heuristics without a value: " + ", ".join(f"#{n}" for n in unset)
            )
        return problems, unset

    def finalize(self) -> "CritiqueSheet":
        """Mark the sheet finalized; fails with the full list of missing items."""
        self._require_draft()
        problems, unset = self.completeness_problems()
        if problems:
            raise IncompleteSheetError(problems, unset)
        self.status = STATUS_FINALIZED
        self._touch()
        return self

    def to_dict(self) -> dict:
        return {
            "sheet_id": self.sheet_id,
            "artefact_key": self.artefact_key,
            "appraiser": self.appraiser,
            "created_at": _rfc3339(self.created_at),
            "updated_at": _rfc3339(self.updated_at),
            "catalog_version": self.catalog_version,
            "status": self.status,
            "overview": {
                "design_name": self.overview.design_name,
                "essence": self.overview.essence,
                "circled_words": sorted(self.overview.circled_words),
            },
            "responses": [
                {"number": r.heuristic_number, "value": r.value, "note": r.note}
                for r in self.responses
            ],
            "review": {
                "reflections": self.review.reflections,
                "next_steps": self.review.next_steps,
            },
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CritiqueSheet":
        """Parse and validate a critique record document (the wire schema)."""
        if not isinstance(doc, dict):
            raise SchemaError("critique record must be a JSON object")
        try:
            overview = doc["overview"]
            review = doc["review"]
            responses = doc["responses"]
            words = overview["circled_words"]
            if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
                raise SchemaError("circled_words must be a list of strings")
            sheet = cls(
                sheet_id=_text(doc, "sheet_id"),
                artefact_key=_text(doc, "artefact_key"),
                appraiser=_text(doc, "appraiser"),
                created_at=_parse_ts(_text(doc, "created_at")),
                updated_at=_parse_ts(_text(doc, "updated_at")),
                catalog_version=_text(doc, "catalog_version"),
                status=_text(doc, "status"),
                overview=OverviewSection(
                    design_name=_text(overview, "design_name"),
                    essence=_text(overview, "essence"),
                    circled_words=set(words),
                ),
                review=ReviewSection(
                    reflections=_text(review, "reflections"),
                    next_steps=_text(review, "next_steps"),
                ),
            )
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"critique record missing/invalid field: {exc}") from exc

        if sheet.status not in (STATUS_DRAFT, STATUS_FINALIZED):
            raise SchemaError(f"unknown status {sheet.status!r}")
        if not sheet.artefact_key:
            raise SchemaError("artefact_key must be non-empty")
        if not isinstance(responses, list) or len(responses) != HEURISTIC_COUNT:
            raise SchemaError(
                f"responses must hold exactly {HEURISTIC_COUNT} slots, "
                f"got {len(responses) if isinstance(responses, list) else type(responses).__name__}"
            )
        slots: list[HeuristicResponse] = []
        for i, r in enumerate(responses, start=1):
            try:
                number, value, note = r["number"], r["value"], r["note"]
            except (KeyError, TypeError) as exc:
                raise SchemaError(f"response slot {i} malformed: {exc}") from exc
            if number != i:
                raise SchemaError(f"response slot {i} carries number {number}")
            if value is not None:
                if not isinstance(value, int) or isinstance(value, bool) or not -2 <= value <= 2:
                    raise SchemaError(f"response #{i} value {value!r} outside -2..+2")
            slots.append(HeuristicResponse(number, value, str(note)))
        sheet.responses = slots

        if sheet.is_finalized:
            problems, unset = sheet.completeness_problems()
            if problems:
                raise SchemaError(
                    "finalized record is incomplete: " + "; ".join(problems)
                )
        return sheet


def _text(obj: dict, name: str) -> str:
    value = obj[name]
    if not isinstance(value, str):
        raise SchemaError(f"field {name!r} must be a string")
    return value


def new_draft(artefact_key: str, appraiser: str, catalog: HeuristicCatalog) -> CritiqueSheet:
    """Create a Draft sheet with 30 unset response slots."""
    if not artefact_key or not artefact_key.strip():
        raise ValueError("artefact_key must be non-empty")
    now = utcnow()
    return CritiqueSheet(
        sheet_id=uuid.uuid4().hex,
        artefact_key=artefact_key,
        appraiser=appraiser,
        created_at=now,
        updated_at=now,
        catalog_version=catalog.version_tag,
        responses=[HeuristicResponse(n) for n in range(1, HEURISTIC_COUNT + 1)],
    )


@dataclass(frozen=True)
class ScoreSummary:
    """Headline figure is the total; the mean is carried alongside, exactly."""

    total: int
    mean: Fraction
    perspective_subtotals: dict[PerspectiveId, int]
    circled_sentiment_counts: tuple[int, int, int]  # positive, negative, neutral

    def to_dict(self) -> dict:
        pos, neg, neu = self.circled_sentiment_counts
        return {
            "total": self.total,
            "mean": float(self.mean),
            "perspective_subtotals": {
                pid.value: sub for pid, sub in self.perspective_subtotals.items()
            },
            "circled_sentiment_counts": {
                "positive": pos,
                "negative": neg,
                "neutral": neu,
            },
        }


def compute_score(sheet: CritiqueSheet, catalog: HeuristicCatalog) -> ScoreSummary:
    """Sum the 30 Likert values; per-perspective subtotals and exact mean.

    Works on drafts too, provided every value is set.
    """
    unset = sheet.unset_numbers()
    if unset:
        raise IncompleteSheetError(
            ["heuristics without a value: " + ", ".join(f"#{n}" for n in unset)],
            unset,
        )
    subtotals = {pid: 0 for pid in PERSPECTIVE_ORDER}
    for r in sheet.responses:
        pid = catalog.heuristic(r.heuristic_number).perspective
        subtotals[pid] += r.value
    total = sum(subtotals.values())
    counts = {s: 0 for s in Sentiment}
    for word in sheet.overview.circled_words:
        counts[catalog.sentiment_of(word)] += 1
    return ScoreSummary(
        total=total,
        mean=Fraction(total, len(sheet.responses)),
        perspective_subtotals=subtotals,
        circled_sentiment_counts=(
            counts[Sentiment.POSITIVE],
            counts[Sentiment.NEGATIVE],
            counts[Sentiment.NEUTRAL],
        ),
    )


@dataclass(frozen=True)
class CritiqueDiff:
    earlier_id: str
    later_id: str
    total_delta: int
    per_heuristic_delta: dict[int, int]
    per_perspective_delta: dict[PerspectiveId, int]
    words_added: frozenset[str]
    words_removed: frozenset[str]

    def to_dict(self) -> dict:
        return {
            "earlier_id": self.earlier_id,
            "later_id": self.later_id,
            "total_delta": self.total_delta,
            "per_heuristic_delta": {str(n): d for n, d in sorted(self.per_heuristic_delta.items())},
            "per_perspective_delta": {
                pid.value: d for pid, d in self.per_perspective_delta.items()
            },
            "words_added": sorted(self.words_added),
            "words_removed": sorted(self.words_removed),
        }


def diff(earlier: CritiqueSheet, later: CritiqueSheet) -> CritiqueDiff:
    """Structured delta (later minus earlier) between two finalized critiques."""
    for sheet in (earlier, later):
        if not sheet.is_finalized:
            raise NotFinalizedError(f"sheet {sheet.sheet_id} is not finalized")
    if earlier.artefact_key != later.artefact_key:
        raise SheetMismatchError(
            f"cannot diff different artefacts "
            f"({earlier.artefact_key!r} vs {later.artefact_key!r})"
        )
    if earlier.catalog_version != later.catalog_version:
        raise SheetMismatchError(
            f"cannot diff across catalog versions "
            f"({earlier.catalog_version!r} vs {later.catalog_version!r})"
        )
    per_heuristic: dict[int, int] = {}
    per_perspective = {pid: 0 for pid in PERSPECTIVE_ORDER}
    for a, b in zip(earlier.responses, later.responses):
        delta = b.value - a.value
        per_heuristic[a.heuristic_number] = delta
        # Positional grouping holds for every loadable catalog.
        pid = PERSPECTIVE_ORDER[(a.heuristic_number - 1) // PERSPECTIVE_SIZE]
        per_perspective[pid] += delta
    return CritiqueDiff(
        earlier_id=earlier.sheet_id,
        later_id=later.sheet_id,
        total_delta=sum(per_heuristic.values()),
        per_heuristic_delta=per_heuristic,
        per_perspective_delta=per_perspective,
        words_added=frozenset(later.overview.circled_words - earlier.overview.circled_words),
        words_removed=frozenset(earlier.overview.circled_words - later.overview.circled_words),
    )
