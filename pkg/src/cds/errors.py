"""Exception hierarchy shared across the package.

Every domain failure raises a subclass of :class:`CdsError` so callers (CLI,
HTTP service) can map errors to exit codes / status codes in one place.
"""
from __future__ import annotations


class CdsError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "cds_error"


class CatalogFormatError(CdsError):
    """Catalog source could not be parsed as the catalog file format."""

    code = "catalog_format"


class CatalogIntegrityError(CdsError):
    """Catalog parsed but violates a structural invariant."""

    code = "catalog_integrity"


class CatalogMismatchError(CdsError):
    """Sheet and catalog disagree on the catalog version."""

    code = "catalog_mismatch"


class UnknownWordError(CdsError):
    """A circled word is not in the catalog lexicon."""

    code = "unknown_word"

    def __init__(self, word: str):
        self.word = word
        super().__init__(f"word {word!r} is not in the catalog lexicon")


class DuplicateWordError(CdsError):
    """The same word was circled more than once."""

    code = "duplicate_word"

    def __init__(self, word: str):
        self.word = word
        super().__init__(f"word {word!r} circled more than once")


class ImmutableSheetError(CdsError):
    """Attempted to mutate a finalized sheet."""

    code = "sheet_finalized"


class NotFinalizedError(CdsError):
    """Operation requires a finalized sheet but got a draft."""

    code = "sheet_draft"


class IncompleteSheetError(CdsError):
    """Sheet fails completeness checks; carries the full missing-items list.

    ``unset_numbers`` lists heuristic numbers without a value; ``problems``
    is the human-readable list covering every missing item.
    """

    code = "incomplete_sheet"

    def __init__(self, problems: list[str], unset_numbers: list[int]):
        self.problems = problems
        self.unset_numbers = unset_numbers
        super().__init__("; ".join(problems))


class SheetMismatchError(CdsError):
    """Two sheets cannot be diffed (different artefact or catalog version)."""

    code = "sheet_mismatch"


class SchemaError(CdsError):
    """A document does not conform to the critique record schema."""

    code = "schema"


class RecordNotFoundError(CdsError):
    """No stored record with the requested id."""

    code = "not_found"

    def __init__(self, sheet_id: str):
        self.sheet_id = sheet_id
        super().__init__(f"no record with sheet_id {sheet_id!r}")


class StoreError(CdsError):
    """Repository-level failure (I/O, corrupt bundle, bad schema version)."""

    code = "store"


class AnalyticsError(CdsError):
    """A statistics precondition failed (undersized input, zero variance)."""

    code = "analytics"
