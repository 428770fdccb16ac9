"""Canonical critique catalog: perspectives, heuristics, anchors, word lexicon.

The catalog is data, not code. The repository ships ``catalog/cds-v4.json``
and this package embeds a byte-identical copy, so alternate catalog versions
can be loaded for study without touching the code. The loader validates every
structural invariant and rejects hand-edited files that break them.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Union

from .errors import CatalogFormatError, CatalogIntegrityError

LIKERT_MIN = -2
LIKERT_MAX = 2
HEURISTIC_COUNT = 30
PERSPECTIVE_SIZE = 5
LEXICON_SIZE = 20
EXPECTED_PARTITION = (7, 7, 6)  # positive, negative, neutral


class PerspectiveId(str, Enum):
    USER = "user"
    ENVIRONMENT = "environment"
    INTERFACE = "interface"
    COMPONENTS = "components"
    DESIGN = "design"
    VISUAL_MARKS = "visual_marks"


PERSPECTIVE_ORDER: tuple[PerspectiveId, ...] = tuple(PerspectiveId)


class Sentiment(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class Perspective:
    id: PerspectiveId
    display_name: str
    description: str


@dataclass(frozen=True)
class Heuristic:
    number: int
    perspective: PerspectiveId
    question: str
    negative_anchor: str
    positive_anchor: str
    explanatory_note: str


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    sentiment: Sentiment


@dataclass(frozen=True)
class PartitionReport:
    """Counts per sentiment class, with a flag when they deviate from 7/7/6."""

    positive: int
    negative: int
    neutral: int

    @property
    def counts(self) -> tuple[int, int, int]:
        return (self.positive, self.negative, self.neutral)

    @property
    def matches_expected(self) -> bool:
        return self.counts == EXPECTED_PARTITION


@dataclass(frozen=True)
class HeuristicCatalog:
    """Immutable critique definition; safe to share across threads."""

    version_tag: str
    likert_min: int
    likert_max: int
    perspectives: tuple[Perspective, ...]
    heuristics: tuple[Heuristic, ...]
    lexicon: tuple[LexiconEntry, ...]

    def heuristic(self, number: int) -> Heuristic:
        """Return the heuristic with the given number (1..30)."""
        if not 1 <= number <= len(self.heuristics):
            raise CatalogIntegrityError(
                f"heuristic number {number} out of range 1..{len(self.heuristics)}"
            )
        return self.heuristics[number - 1]

    def perspective_of(self, number: int) -> Perspective:
        """Perspective owning heuristic ``number`` (positional grouping)."""
        h = self.heuristic(number)
        return self.perspective(h.perspective)

    def perspective(self, pid: PerspectiveId) -> Perspective:
        for p in self.perspectives:
            if p.id == pid:
                return p
        raise CatalogIntegrityError(f"unknown perspective {pid}")

    def heuristics_for(self, pid: PerspectiveId) -> tuple[Heuristic, ...]:
        return tuple(h for h in self.heuristics if h.perspective == pid)

    @property
    def words(self) -> frozenset[str]:
        return frozenset(e.word for e in self.lexicon)

    def sentiment_of(self, word: str) -> Sentiment:
        for e in self.lexicon:
            if e.word == word:
                return e.sentiment
        raise CatalogIntegrityError(f"word {word!r} not in lexicon")

    def lexicon_partition(self) -> PartitionReport:
        pos = sum(1 for e in self.lexicon if e.sentiment is Sentiment.POSITIVE)
        neg = sum(1 for e in self.lexicon if e.sentiment is Sentiment.NEGATIVE)
        neu = sum(1 for e in self.lexicon if e.sentiment is Sentiment.NEUTRAL)
        return PartitionReport(pos, neg, neu)

    def to_dict(self) -> dict:
        return {
            "version_tag": self.version_tag,
            "likert": {"min": self.likert_min, "max": self.likert_max},
            "perspectives": [
                {
                    "id": p.id.value,
                    "display_name": p.display_name,
                    "description": p.description,
                }
                for p in self.perspectives
            ],
            "heuristics": [
                {
                    "number": h.number,
                    "perspective": h.perspective.value,
                    "question": h.question,
                    "negative_anchor": h.negative_anchor,
                    "positive_anchor": h.positive_anchor,
                    "explanatory_note": h.explanatory_note,
                }
                for h in self.heuristics
            ],
            "lexicon": [
                {"word": e.word, "sentiment": e.sentiment.value} for e in self.lexicon
            ],
        }

    def checksum(self) -> str:
        """SHA-256 over the canonical serialization; whitespace-insensitive."""
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def embedded_catalog_bytes() -> bytes:
    """Raw bytes of the embedded default catalog file."""
    return resources.files("cds.data").joinpath("cds-v4.json").read_bytes()


CatalogSource = Union[str, Path, bytes, dict, None]


def load_catalog(source: CatalogSource = None) -> HeuristicCatalog:
    """Load and validate a catalog.

    ``source`` may be a path to a catalog file, raw bytes, an already-parsed
    dict, or ``None`` for the embedded default. Raises
    :class:`CatalogFormatError` when the document cannot be parsed and
    :class:`CatalogIntegrityError` naming the first violated invariant.
    """
    if source is None:
        raw: dict = _parse(embedded_catalog_bytes())
    elif isinstance(source, dict):
        raw = source
    elif isinstance(source, bytes):
        raw = _parse(source)
    else:
        path = Path(source)
        try:
            raw = _parse(path.read_bytes())
        except OSError as exc:
            raise CatalogFormatError(f"cannot read catalog file {path}: {exc}") from exc
    return _build(raw)


def get_heuristic(catalog: HeuristicCatalog, number: int) -> Heuristic:
    return catalog.heuristic(number)


def verify_lexicon_partition(catalog: HeuristicCatalog) -> PartitionReport:
    return catalog.lexicon_partition()


def _parse(data: bytes) -> dict:
    try:
        raw = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CatalogFormatError(f"catalog is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise CatalogFormatError("catalog document must be a JSON object")
    return raw


def _field(obj: dict, name: str, kind: type):
    if name not in obj:
        raise CatalogFormatError(f"catalog missing field {name!r}")
    value = obj[name]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise CatalogFormatError(f"catalog field {name!r} must be {kind.__name__}")
    return value


def _build(raw: dict) -> HeuristicCatalog:
    version_tag = _field(raw, "version_tag", str)
    likert = _field(raw, "likert", dict)
    likert_min = _field(likert, "min", int)
    likert_max = _field(likert, "max", int)

    perspectives = tuple(
        Perspective(
            id=_perspective_id(_field(p, "id", str)),
            display_name=_field(p, "display_name", str),
            description=_field(p, "description", str),
        )
        for p in _field(raw, "perspectives", list)
    )
    heuristics = tuple(
        Heuristic(
            number=_field(h, "number", int),
            perspective=_perspective_id(_field(h, "perspective", str)),
            question=_field(h, "question", str),
            negative_anchor=_field(h, "negative_anchor", str),
            positive_anchor=_field(h, "positive_anchor", str),
            explanatory_note=_field(h, "explanatory_note", str),
        )
        for h in _field(raw, "heuristics", list)
    )
    # Words normalized to lowercase at load; avoids case disputes downstream.
    lexicon = tuple(
        LexiconEntry(
            word=_field(e, "word", str).strip().lower(),
            sentiment=_sentiment(_field(e, "sentiment", str)),
        )
        for e in _field(raw, "lexicon", list)
    )

    catalog = HeuristicCatalog(
        version_tag=version_tag,
        likert_min=likert_min,
        likert_max=likert_max,
        perspectives=perspectives,
        heuristics=heuristics,
        lexicon=lexicon,
    )
    _check_integrity(catalog)
    return catalog


def _perspective_id(value: str) -> PerspectiveId:
    try:
        return PerspectiveId(value)
    except ValueError:
        raise CatalogFormatError(f"unknown perspective id {value!r}") from None


def _sentiment(value: str) -> Sentiment:
    try:
        return Sentiment(value.lower())
    except ValueError:
        raise CatalogFormatError(f"unknown sentiment {value!r}") from None


def _check_integrity(catalog: HeuristicCatalog) -> None:
    if (catalog.likert_min, catalog.likert_max) != (LIKERT_MIN, LIKERT_MAX):
        raise CatalogIntegrityError(
            f"likert bounds must be {LIKERT_MIN}..{LIKERT_MAX}, "
            f"got {catalog.likert_min}..{catalog.likert_max}"
        )

    got_order = tuple(p.id for p in catalog.perspectives)
    if got_order != PERSPECTIVE_ORDER:
        raise CatalogIntegrityError(
            f"perspectives must be exactly {[p.value for p in PERSPECTIVE_ORDER]} "
            f"in order, got {[p.value for p in got_order]}"
        )

    numbers = sorted(h.number for h in catalog.heuristics)
    expected = list(range(1, HEURISTIC_COUNT + 1))
    if numbers != expected:
        missing = sorted(set(expected) - set(numbers))
        extra = sorted(set(numbers) - set(expected))
        dupes = sorted({n for n in numbers if numbers.count(n) > 1})
        detail = []
        if missing:
            detail.append(f"missing {missing}")
        if extra:
            detail.append(f"out-of-range {extra}")
        if dupes:
            detail.append(f"duplicated {dupes}")
        raise CatalogIntegrityError(
            "heuristic numbers must be exactly 1..30: " + ", ".join(detail)
        )
    ordered = tuple(h.number for h in catalog.heuristics)
    if ordered != tuple(expected):
        raise CatalogIntegrityError("heuristics must be listed in number order")

    # Stored perspective must agree with the positional grouping n -> ceil(n/5).
    for h in catalog.heuristics:
        positional = PERSPECTIVE_ORDER[(h.number - 1) // PERSPECTIVE_SIZE]
        if h.perspective != positional:
            raise CatalogIntegrityError(
                f"heuristic #{h.number} stored under {h.perspective.value!r} "
                f"but positional grouping assigns {positional.value!r}"
            )
        if not h.negative_anchor.strip() or not h.positive_anchor.strip():
            raise CatalogIntegrityError(f"heuristic #{h.number} has an empty anchor")
        if h.negative_anchor == h.positive_anchor:
            raise CatalogIntegrityError(
                f"heuristic #{h.number} anchors must differ, both {h.negative_anchor!r}"
            )

    for pid in PERSPECTIVE_ORDER:
        owned = catalog.heuristics_for(pid)
        if len(owned) != PERSPECTIVE_SIZE:
            raise CatalogIntegrityError(
                f"perspective {pid.value!r} owns {len(owned)} heuristics, "
                f"expected {PERSPECTIVE_SIZE}"
            )

    words = [e.word for e in catalog.lexicon]
    if len(words) != LEXICON_SIZE:
        raise CatalogIntegrityError(
            f"lexicon must hold exactly {LEXICON_SIZE} words, got {len(words)}"
        )
    if len(set(words)) != len(words):
        dupes = sorted({w for w in words if words.count(w) > 1})
        raise CatalogIntegrityError(f"lexicon words must be distinct: {dupes}")
    partition = catalog.lexicon_partition()
    if not partition.matches_expected:
        raise CatalogIntegrityError(
            f"lexicon sentiment partition must be {EXPECTED_PARTITION} "
            f"(positive, negative, neutral), got {partition.counts}"
        )
