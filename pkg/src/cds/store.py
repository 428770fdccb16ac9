"""Durable critique repository: one JSON document per record plus an index.

Layout under the store root:

    records/<sheet_id>.json   -- {schema_version, content_hash, sheet}
    index.json                -- artefact_key -> [sheet_ids by created_at]

The record files are the source of truth; the index is a rebuildable cache.
Mutations are serialized through a repository-level file lock (single writer),
while reads go straight to the immutable record files.
"""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from filelock import FileLock

from .catalog import HeuristicCatalog, load_catalog
from .critique import CritiqueSheet, ScoreSummary, compute_score
from .errors import RecordNotFoundError, SchemaError, StoreError

SCHEMA_VERSION = 1
STORE_DIR_ENV = "CDS_STORE_DIR"
DEFAULT_STORE_DIR = "~/.cds/store"


def content_hash(sheet_doc: dict) -> str:
    """SHA-256 of the canonical serialization of a sheet document."""
    blob = json.dumps(sheet_doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CritiqueRecord:
    sheet: CritiqueSheet
    schema_version: int
    content_hash: str

    @classmethod
    def wrap(cls, sheet: CritiqueSheet) -> "CritiqueRecord":
        return cls(
            sheet=sheet,
            schema_version=SCHEMA_VERSION,
            content_hash=content_hash(sheet.to_dict()),
        )

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "content_hash": self.content_hash,
            "sheet": self.sheet.to_dict(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CritiqueRecord":
        if not isinstance(doc, dict) or "sheet" not in doc:
            raise SchemaError("record document must be an object with a 'sheet' field")
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise StoreError(
                f"unsupported record schema_version {version!r}; "
                f"this build reads version {SCHEMA_VERSION} only"
            )
        sheet = CritiqueSheet.from_dict(doc["sheet"])
        expected = content_hash(sheet.to_dict())
        stored = doc.get("content_hash")
        if stored != expected:
            raise StoreError(
                f"content hash mismatch for sheet {sheet.sheet_id}: "
                f"stored {stored!r}, computed {expected!r}"
            )
        return cls(sheet=sheet, schema_version=version, content_hash=stored)


@dataclass(frozen=True)
class RecordHeader:
    """History entry: identity plus the score when the record is finalized."""

    sheet_id: str
    artefact_key: str
    appraiser: str
    created_at: str
    updated_at: str
    status: str
    score: Optional[ScoreSummary]

    def to_dict(self) -> dict:
        return {
            "sheet_id": self.sheet_id,
            "artefact_key": self.artefact_key,
            "appraiser": self.appraiser,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "status": self.status,
            "score": self.score.to_dict() if self.score else None,
        }


def resolve_store_dir(root: Union[str, Path, None] = None) -> Path:
    if root is not None:
        return Path(root).expanduser()
    env = os.environ.get(STORE_DIR_ENV)
    if env:
        return Path(env).expanduser()
    return Path(DEFAULT_STORE_DIR).expanduser()


class CritiqueStore:
    """Directory-backed repository of critique records."""

    def __init__(self, root: Union[str, Path, None] = None):
        self.root = resolve_store_dir(root)
        self.records_dir = self.root / "records"
        self.index_path = self.root / "index.json"
        self.records_dir.mkdir(parents=True, exist_ok=True)
        self._lock = FileLock(str(self.root / ".lock"))
        # created_at by sheet_id; immutable once written, so safe to cache.
        self._created_cache: dict[str, object] = {}

    # -- write path -------------------------------------------------------

    def save(self, item: Union[CritiqueSheet, CritiqueRecord, dict]) -> str:
        record = self._coerce(item)
        with self._lock:
            path = self._record_path(record.sheet.sheet_id)
            if path.exists():
                existing = json.loads(path.read_text(encoding="utf-8"))
                if existing.get("content_hash") == record.content_hash:
                    return record.sheet.sheet_id  # identical content: no-op
            self._write_json(path, record.to_dict())
            self._index_add(record.sheet)
        return record.sheet.sheet_id

    def delete(self, sheet_id: str) -> None:
        with self._lock:
            path = self._record_path(sheet_id)
            if not path.exists():
                raise RecordNotFoundError(sheet_id)
            record = CritiqueRecord.from_dict(
                json.loads(path.read_text(encoding="utf-8"))
            )
            path.unlink()
            index = self._read_index()
            key = record.sheet.artefact_key
            if key in index:
                index[key] = [i for i in index[key] if i != sheet_id]
                if not index[key]:
                    del index[key]
            self._write_json(self.index_path, index)

    # -- read path ---------------------------------------------------------

    def load(self, sheet_id: str) -> CritiqueRecord:
        path = self._record_path(sheet_id)
        if not path.exists():
            raise RecordNotFoundError(sheet_id)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise StoreError(f"record file for {sheet_id} is corrupt: {exc}") from exc
        return CritiqueRecord.from_dict(doc)

    def load_sheet(self, sheet_id: str) -> CritiqueSheet:
        return self.load(sheet_id).sheet

    def exists(self, sheet_id: str) -> bool:
        return self._record_path(sheet_id).exists()

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.records_dir.glob("*.json"))

    def artefact_keys(self) -> list[str]:
        return sorted(self._read_index())

    def history(
        self, artefact_key: str, catalog: Optional[HeuristicCatalog] = None
    ) -> list[RecordHeader]:
        """Chronological headers for one artefact; drafts carry a null score."""
        ids = self._read_index().get(artefact_key, [])
        cat = catalog or load_catalog()
        headers = []
        for sheet_id in ids:
            sheet = self.load(sheet_id).sheet
            score = None
            if sheet.is_finalized and sheet.catalog_version == cat.version_tag:
                score = compute_score(sheet, cat)
            doc = sheet.to_dict()
            headers.append(
                RecordHeader(
                    sheet_id=sheet.sheet_id,
                    artefact_key=sheet.artefact_key,
                    appraiser=sheet.appraiser,
                    created_at=doc["created_at"],
                    updated_at=doc["updated_at"],
                    status=sheet.status,
                    score=score,
                )
            )
        return headers

    # -- bundles -----------------------------------------------------------

    def export_all(self, path: Union[str, Path]) -> int:
        """Write every record into one JSON array; returns the count."""
        docs = [self.load(sheet_id).to_dict() for sheet_id in self.list_ids()]
        self._write_json(Path(path), docs)
        return len(docs)

    def import_all(self, path: Union[str, Path]) -> int:
        """Import a bundle, validating every record before committing any."""
        try:
            docs = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StoreError(f"cannot read bundle {path}: {exc}") from exc
        if not isinstance(docs, list):
            raise StoreError("bundle must be a JSON array of records")
        records = []
        for i, doc in enumerate(docs):
            try:
                records.append(CritiqueRecord.from_dict(doc))
            except Exception as exc:
                raise StoreError(
                    f"bundle record {i} is invalid, nothing imported: {exc}"
                ) from exc
        for record in records:
            self.save(record)
        return len(records)

    def rebuild_index(self) -> None:
        """Regenerate index.json from the record files (the source of truth)."""
        sheets = [self.load(sheet_id).sheet for sheet_id in self.list_ids()]
        index: dict[str, list[str]] = {}
        for sheet in sorted(sheets, key=lambda s: (s.created_at, s.sheet_id)):
            index.setdefault(sheet.artefact_key, []).append(sheet.sheet_id)
        with self._lock:
            self._write_json(self.index_path, index)

    # -- internals ----------------------------------------------------------

    def _coerce(self, item: Union[CritiqueSheet, CritiqueRecord, dict]) -> CritiqueRecord:
        if isinstance(item, CritiqueRecord):
            # Re-validate: hash must match the body it claims to describe.
            return CritiqueRecord.from_dict(item.to_dict())
        if isinstance(item, CritiqueSheet):
            return CritiqueRecord.wrap(CritiqueSheet.from_dict(item.to_dict()))
        return CritiqueRecord.wrap(CritiqueSheet.from_dict(item))

    def _record_path(self, sheet_id: str) -> Path:
        if not sheet_id or "/" in sheet_id or sheet_id.startswith("."):
            raise SchemaError(f"invalid sheet_id {sheet_id!r}")
        return self.records_dir / f"{sheet_id}.json"

    def _read_index(self) -> dict[str, list[str]]:
        if not self.index_path.exists():
            return {}
        try:
            return json.loads(self.index_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            # Index is only a cache; fall back to scanning records.
            ids = self.list_ids()
            index: dict[str, list[str]] = {}
            for sheet in sorted(
                (self.load(i).sheet for i in ids), key=lambda s: (s.created_at, s.sheet_id)
            ):
                index.setdefault(sheet.artefact_key, []).append(sheet.sheet_id)
            return index

    def _index_add(self, sheet: CritiqueSheet) -> None:
        self._created_cache[sheet.sheet_id] = sheet.created_at
        index = self._read_index()
        ids = index.setdefault(sheet.artefact_key, [])
        if sheet.sheet_id not in ids:
            ids.append(sheet.sheet_id)
            # Keep chronological order even if records arrive out of order.
            for i in ids:
                if i not in self._created_cache:
                    self._created_cache[i] = self.load(i).sheet.created_at
            ids.sort(key=lambda i: (self._created_cache[i], i))
        self._write_json(self.index_path, index)

    @staticmethod
    def _write_json(path: Path, payload) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(
            json.dumps(payload, indent=2, sort_keys=False) + "\n", encoding="utf-8"
        )
        os.replace(tmp, path)


class InMemoryStore:
    """Dict-backed store with the CritiqueStore interface; used in tests."""

    def __init__(self):
        self._records: dict[str, dict] = {}

    def save(self, item: Union[CritiqueSheet, CritiqueRecord, dict]) -> str:
        if isinstance(item, CritiqueRecord):
            record = CritiqueRecord.from_dict(item.to_dict())
        elif isinstance(item, CritiqueSheet):
            record = CritiqueRecord.wrap(CritiqueSheet.from_dict(item.to_dict()))
        else:
            record = CritiqueRecord.wrap(CritiqueSheet.from_dict(item))
        self._records[record.sheet.sheet_id] = record.to_dict()
        return record.sheet.sheet_id

    def load(self, sheet_id: str) -> CritiqueRecord:
        if sheet_id not in self._records:
            raise RecordNotFoundError(sheet_id)
        return CritiqueRecord.from_dict(self._records[sheet_id])

    def load_sheet(self, sheet_id: str) -> CritiqueSheet:
        return self.load(sheet_id).sheet

    def exists(self, sheet_id: str) -> bool:
        return sheet_id in self._records

    def delete(self, sheet_id: str) -> None:
        if sheet_id not in self._records:
            raise RecordNotFoundError(sheet_id)
        del self._records[sheet_id]

    def list_ids(self) -> list[str]:
        return sorted(self._records)

    def artefact_keys(self) -> list[str]:
        return sorted({d["sheet"]["artefact_key"] for d in self._records.values()})

    def history(
        self, artefact_key: str, catalog: Optional[HeuristicCatalog] = None
    ) -> list[RecordHeader]:
        cat = catalog or load_catalog()
        sheets = [
            self.load(i).sheet
            for i in self.list_ids()
            if self._records[i]["sheet"]["artefact_key"] == artefact_key
        ]
        sheets.sort(key=lambda s: (s.created_at, s.sheet_id))
        headers = []
        for sheet in sheets:
            score = None
            if sheet.is_finalized and sheet.catalog_version == cat.version_tag:
                score = compute_score(sheet, cat)
            doc = sheet.to_dict()
            headers.append(
                RecordHeader(
                    sheet_id=sheet.sheet_id,
                    artefact_key=sheet.artefact_key,
                    appraiser=sheet.appraiser,
                    created_at=doc["created_at"],
                    updated_at=doc["updated_at"],
                    status=sheet.status,
                    score=score,
                )
            )
        return headers

    def export_all(self, path: Union[str, Path]) -> int:
        docs = [self._records[i] for i in self.list_ids()]
        Path(path).write_text(json.dumps(docs, indent=2) + "\n", encoding="utf-8")
        return len(docs)

    def import_all(self, path: Union[str, Path]) -> int:
        try:
            docs = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StoreError(f"cannot read bundle {path}: {exc}") from exc
        if not isinstance(docs, list):
            raise StoreError("bundle must be a JSON array of records")
        records = []
        for i, doc in enumerate(docs):
            try:
                records.append(CritiqueRecord.from_dict(doc))
            except Exception as exc:
                raise StoreError(
                    f"bundle record {i} is invalid, nothing imported: {exc}"
                ) from exc
        for record in records:
            self._records[record.sheet.sheet_id] = record.to_dict()
        return len(records)
