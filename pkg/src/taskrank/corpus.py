"""Document collection ingestion.

The corpus file is UTF-8, line-delimited JSON: one record per line with the
fields ``doc_id``, ``title``, ``abstract``, ``body``, ``journal`` and ``date``.
Absent fields are treated as empty. ``body`` may be a single string (split
into paragraphs on blank lines) or a pre-split list of paragraph strings.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import DuplicateDocId, MalformedRecord

_BLANK_RUN = re.compile(r"\n\s*\n")


def segment_paragraphs(raw_body: str) -> list[str]:
    """Split body text into paragraphs on blank-line boundaries.

    Each paragraph is stripped of surrounding whitespace; empty segments are
    dropped. ``""`` yields ``[]``.
    """
    if not raw_body or not raw_body.strip():
        return []
    parts = _BLANK_RUN.split(raw_body)
    return [p.strip() for p in parts if p.strip()]


@dataclass(frozen=True)
class Document:
    """One scientific paper with optional metadata and body paragraphs."""

    doc_id: str
    title: str = ""
    abstract: str = ""
    body: tuple[str, ...] = ()
    journal: str = ""
    publish_date: str = ""


@dataclass(frozen=True)
class Collection:
    """Immutable, ordered set of documents with O(1) id lookup."""

    docs: tuple[Document, ...]
    by_id: dict[str, int] = field(compare=False)
    skipped_records: int = 0

    @classmethod
    def from_documents(cls, docs, skipped_records: int = 0) -> "Collection":
        docs = tuple(docs)
        by_id: dict[str, int] = {}
        for i, doc in enumerate(docs):
            if doc.doc_id in by_id:
                raise DuplicateDocId(doc.doc_id)
            by_id[doc.doc_id] = i
        return cls(docs=docs, by_id=by_id, skipped_records=skipped_records)

    def __len__(self) -> int:
        return len(self.docs)

    def __iter__(self):
        return iter(self.docs)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self.by_id

    def get(self, doc_id: str) -> Document | None:
        idx = self.by_id.get(doc_id)
        return self.docs[idx] if idx is not None else None


def _record_to_document(record: dict) -> Document:
    doc_id = record.get("doc_id")
    if not isinstance(doc_id, str) or not doc_id:
        raise ValueError("missing or empty doc_id")
    body = record.get("body", "")
    if isinstance(body, str):
        paragraphs = segment_paragraphs(body)
    elif isinstance(body, list):
        paragraphs = [str(p).strip() for p in body if str(p).strip()]
    else:
        raise ValueError("body must be a string or a list of strings")
    return Document(
        doc_id=doc_id,
        title=str(record.get("title", "") or ""),
        abstract=str(record.get("abstract", "") or ""),
        body=tuple(paragraphs),
        journal=str(record.get("journal", "") or ""),
        publish_date=str(record.get("date", "") or ""),
    )


def load_collection(path, strict: bool = True) -> Collection:
    """Load a line-delimited corpus file.

    In strict mode any malformed line or duplicate doc_id aborts the load.
    In lenient mode malformed lines and duplicate ids (first occurrence kept)
    are skipped; the skip count is reported on the returned collection.
    """
    docs: list[Document] = []
    seen: set[str] = set()
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                if not isinstance(record, dict):
                    raise ValueError("record is not an object")
                doc = _record_to_document(record)
            except (json.JSONDecodeError, ValueError) as exc:
                if strict:
                    raise MalformedRecord(line_no, str(exc)) from exc
                skipped += 1
                continue
            if doc.doc_id in seen:
                if strict:
                    raise DuplicateDocId(doc.doc_id)
                skipped += 1
                continue
            seen.add(doc.doc_id)
            docs.append(doc)
    return Collection.from_documents(docs, skipped_records=skipped)
