"""Positional inverted index: build, persist atomically, reopen, query.

On disk an index directory holds immutable generations:

    manifest.json             points at the current generation (written last)
    snap-NNNNNN.terms.dat     sorted "stem TAB offset TAB nbytes" lines
    snap-NNNNNN.postings.dat  concatenated varint payloads (see codec)
    snap-NNNNNN.docs.dat      JSON lines: doc_id, book_id, language, ...
    snap-NNNNNN.fields.dat    title/author/isbn lookup structures

Commits write every segment to a temp name, rename, then publish the
manifest with an atomic rename; a crash before the manifest rename leaves
the previous generation fully readable. Files of older generations are
never touched, so already-open snapshots stay valid.
"""

from __future__ import annotations

import hashlib
import json
import os
import re as _re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .codec import Occurrence, Posting, decode_postings, encode_postings
from .corpus import Book, normalize_isbn
from .errors import (AnalyzerMismatch, CorruptIndex, DuplicateBookId,
                     EmptyIndex, WriterConflict)
from .textproc import Analyzers, Token, analyze_line, normalize

_FIELD_NAMES = ("title", "author")


@dataclass(frozen=True)
class DocEntry:
    doc_id: int
    book_id: str
    language: str
    token_count: int


@dataclass(frozen=True)
class CorpusStats:
    doc_count: int
    total_tokens: int
    avg_doc_len: float


class IndexWriter:
    """Buffers postings in memory; one writer per target directory."""

    def __init__(self, analyzers: Analyzers):
        self.analyzers = analyzers
        self._postings: dict[str, list[tuple[int, list[Occurrence]]]] = {}
        self._docs: list[DocEntry] = []
        self._book_ids: set[str] = set()
        self._fields: dict[str, dict] = {
            name: {"tokens": {}, "exact": {}, "lengths": {}}
            for name in _FIELD_NAMES
        }
        self._isbn_exact: dict[str, list[int]] = {}

    def add_document(self, book: Book, tokens: list[Token]) -> int:
        """Buffer one analyzed book; doc_ids are dense in insertion order."""
        book_id = book.meta.book_id
        if book_id in self._book_ids:
            raise DuplicateBookId(book_id)
        self._book_ids.add(book_id)
        doc_id = len(self._docs)

        per_stem: dict[str, list[Occurrence]] = {}
        for t in tokens:
            per_stem.setdefault(t.stem, []).append(
                Occurrence(t.pos, t.page_no, t.line_no)
            )
        for stem_, occs in per_stem.items():
            self._postings.setdefault(stem_, []).append((doc_id, occs))

        config = self.analyzers.for_language(book.meta.language)
        for name in _FIELD_NAMES:
            value = getattr(book.meta, name) or ""
            field = self._fields[name]
            field_tokens = [
                lt for lt in analyze_line(value, config) if not lt.is_stopword
            ]
            tf: dict[str, int] = {}
            for lt in field_tokens:
                tf[lt.stem] = tf.get(lt.stem, 0) + 1
            for stem_, count in tf.items():
                field["tokens"].setdefault(stem_, []).append([doc_id, count])
            if value:
                field["exact"].setdefault(
                    normalize(value).casefold(), []
                ).append(doc_id)
            field["lengths"][doc_id] = len(field_tokens)
        if book.meta.isbn:
            self._isbn_exact.setdefault(
                normalize_isbn(book.meta.isbn), []
            ).append(doc_id)

        self._docs.append(
            DocEntry(doc_id, book_id, book.meta.language, len(tokens))
        )
        return doc_id

    def commit(self, directory: str | os.PathLike) -> "IndexSnapshot":
        """Write all segments then publish the manifest atomically.

        Holds an exclusive lock file for the duration: one writer per index
        directory (readers are unaffected).
        """
        if not self._docs:
            raise EmptyIndex("no documents added")
        root = Path(directory)
        root.mkdir(parents=True, exist_ok=True)
        lock_path = root / ".write.lock"
        try:
            lock_fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise WriterConflict(
                f"{lock_path} exists: another writer owns this directory "
                "(remove the file if that writer crashed)")
        try:
            return self._commit_locked(root)
        finally:
            os.close(lock_fd)
            lock_path.unlink(missing_ok=True)

    def _commit_locked(self, root: Path) -> "IndexSnapshot":
        generation = _next_generation(root)
        prefix = f"snap-{generation:06d}"

        terms_lines = []
        payload = bytearray()
        for stem_ in sorted(self._postings):
            data = encode_postings(
                [Posting(doc_id, tuple(occs))
                 for doc_id, occs in self._postings[stem_]]
            )
            terms_lines.append(f"{stem_}\t{len(payload)}\t{len(data)}")
            payload.extend(data)

        docs_lines = [
            json.dumps(
                {"doc_id": d.doc_id, "book_id": d.book_id,
                 "language": d.language, "token_count": d.token_count},
                ensure_ascii=False, sort_keys=True)
            for d in self._docs
        ]

        total = sum(d.token_count for d in self._docs)
        fields_obj = {}
        for name in _FIELD_NAMES:
            field = self._fields[name]
            lengths = field["lengths"]
            avg = (sum(lengths.values()) / len(lengths)) if lengths else 0.0
            fields_obj[name] = {
                "tokens": field["tokens"],
                "exact": field["exact"],
                "lengths": {str(k): v for k, v in lengths.items()},
                "avg_len": avg,
            }
        fields_obj["isbn"] = {"exact": self._isbn_exact}

        segments = {
            f"{prefix}.terms.dat":
                ("\n".join(terms_lines) + "\n").encode("utf-8"),
            f"{prefix}.postings.dat": bytes(payload),
            f"{prefix}.docs.dat":
                ("\n".join(docs_lines) + "\n").encode("utf-8"),
            f"{prefix}.fields.dat":
                json.dumps(fields_obj, ensure_ascii=False,
                           sort_keys=True).encode("utf-8"),
        }
        digests = {}
        for name, data in segments.items():
            _write_atomic(root / name, data)
            digests[name] = hashlib.sha256(data).hexdigest()

        content_digest = hashlib.sha256(
            json.dumps(sorted(digests.items())).encode("ascii")
            + self.analyzers.fingerprint.encode("ascii")
        ).hexdigest()
        manifest = {
            "snapshot_id": f"{generation:06d}-{content_digest[:12]}",
            "generation": generation,
            "analyzer_hash": self.analyzers.fingerprint,
            "corpus_stats": {
                "doc_count": len(self._docs),
                "total_tokens": total,
                "avg_doc_len": total / len(self._docs),
            },
            "files": {
                "terms": f"{prefix}.terms.dat",
                "postings": f"{prefix}.postings.dat",
                "docs": f"{prefix}.docs.dat",
                "fields": f"{prefix}.fields.dat",
            },
            "digests": digests,
        }
        _publish_manifest(root / "manifest.json", manifest)
        return open_snapshot(root)


def _write_atomic(path: Path, data: bytes) -> None:
    tmp = path.with_name(".tmp-" + path.name)
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def _publish_manifest(path: Path, manifest: dict) -> None:
    # kept as a separate hook so crash-injection tests can intercept the
    # publish step specifically
    data = json.dumps(manifest, ensure_ascii=False, sort_keys=True,
                      indent=1).encode("utf-8")
    _write_atomic(path, data)


def _next_generation(root: Path) -> int:
    best = 0
    for entry in root.iterdir():
        m = _re.match(r"snap-(\d{6})\.", entry.name)
        if m:
            best = max(best, int(m.group(1)))
    return best + 1


class IndexSnapshot:
    """Read-only view of one committed generation; safe to share."""

    def __init__(self, snapshot_id: str, generation: int, analyzer_hash: str,
                 corpus_stats: CorpusStats, doc_table: list[DocEntry],
                 term_dict: dict[str, tuple[int, int]], postings_blob: bytes,
                 fields: dict):
        self.snapshot_id = snapshot_id
        self.generation = generation
        self.analyzer_hash = analyzer_hash
        self.corpus_stats = corpus_stats
        self.doc_table = doc_table
        self.by_book = {d.book_id: d.doc_id for d in doc_table}
        self._term_dict = term_dict
        self._postings_blob = postings_blob
        self._fields = fields

    # --- content lookups ---------------------------------------------------

    def lookup(self, stem_: str) -> list[Posting]:
        """Postings for a stem; unknown stems yield an empty list."""
        loc = self._term_dict.get(stem_)
        if loc is None:
            return []
        offset, nbytes = loc
        return decode_postings(self._postings_blob[offset:offset + nbytes])

    def doc_frequency(self, stem_: str) -> int:
        loc = self._term_dict.get(stem_)
        if loc is None:
            return 0
        # payload starts with the doc count
        from .codec import decode_varint
        count, _ = decode_varint(self._postings_blob, loc[0])
        return count

    def term_stems(self) -> list[str]:
        """All indexed stems, sorted (the terms.dat order)."""
        return sorted(self._term_dict)

    def phrase_docs(self, stems: list[Optional[str]]
                    ) -> dict[int, list[Occurrence]]:
        """All docs with an adjacency match for the stems; None entries are
        placeholders that match any token at that offset.

        Values are the matching occurrences of the first concrete stem (a
        placeholder has no occurrence of its own to report).
        """
        concrete = [(i, s) for i, s in enumerate(stems) if s is not None]
        if not concrete:
            return {}
        length = len(stems)
        per_stem = [(i, {p.doc_id: p for p in self.lookup(s)})
                    for i, s in concrete]
        first_i, first_map = per_stem[0]
        candidates = set(first_map)
        for _, postings in per_stem[1:]:
            candidates &= set(postings)
        out: dict[int, list[Occurrence]] = {}
        for doc_id in sorted(candidates):
            token_count = self.doc_table[doc_id].token_count
            pos_sets = {i: {o.pos for o in postings[doc_id].occurrences}
                        for i, postings in per_stem}
            matches = []
            for occ in first_map[doc_id].occurrences:
                start = occ.pos - first_i
                if start < 0 or start + length > token_count:
                    continue
                if all(start + i in pos_sets[i] for i, _ in concrete[1:]):
                    matches.append(occ)
            if matches:
                out[doc_id] = matches
        return out

    def phrase_match(self, stems: list[Optional[str]],
                     doc_id: int) -> list[Occurrence]:
        """Adjacency matches within one document (see phrase_docs)."""
        return self.phrase_docs(stems).get(doc_id, [])

    # --- field lookups -----------------------------------------------------

    def field_token_postings(self, field: str, stem_: str) -> list[tuple[int, int]]:
        rows = self._fields[field]["tokens"].get(stem_, [])
        return [(row[0], row[1]) for row in rows]

    def field_exact(self, field: str, value: str) -> list[int]:
        return list(self._fields[field]["exact"].get(value, []))

    def field_length(self, field: str, doc_id: int) -> int:
        return self._fields[field]["lengths"].get(str(doc_id), 0)

    def field_avg_len(self, field: str) -> float:
        return self._fields[field]["avg_len"] or 1.0

    def isbn_lookup(self, isbn: str) -> list[int]:
        return list(self._fields["isbn"]["exact"].get(normalize_isbn(isbn), []))


def open_snapshot(directory: str | os.PathLike,
                  expected_analyzer_hash: Optional[str] = None
                  ) -> IndexSnapshot:
    """Open the current generation; verifies segment digests and, when
    given, that the analyzer data files still match the snapshot."""
    root = Path(directory)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise CorruptIndex(f"no manifest.json in {root}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))

    if expected_analyzer_hash is not None \
            and manifest["analyzer_hash"] != expected_analyzer_hash:
        raise AnalyzerMismatch(
            "index was built with different analyzer data files; re-index"
        )

    blobs = {}
    for name in manifest["files"].values():
        data = (root / name).read_bytes()
        if hashlib.sha256(data).hexdigest() != manifest["digests"][name]:
            raise CorruptIndex(f"digest mismatch for {name}")
        blobs[name] = data

    term_dict = {}
    for line in blobs[manifest["files"]["terms"]].decode("utf-8").splitlines():
        stem_, offset, nbytes = line.split("\t")
        term_dict[stem_] = (int(offset), int(nbytes))

    doc_table = []
    for line in blobs[manifest["files"]["docs"]].decode("utf-8").splitlines():
        obj = json.loads(line)
        doc_table.append(DocEntry(obj["doc_id"], obj["book_id"],
                                  obj["language"], obj["token_count"]))

    stats = manifest["corpus_stats"]
    total = sum(d.token_count for d in doc_table)
    if stats["doc_count"] != len(doc_table) \
            or stats["total_tokens"] != total \
            or abs(stats["avg_doc_len"] - total / max(len(doc_table), 1)) \
            > 1e-9:
        raise CorruptIndex("corpus_stats disagree with the doc table")
    return IndexSnapshot(
        snapshot_id=manifest["snapshot_id"],
        generation=manifest["generation"],
        analyzer_hash=manifest["analyzer_hash"],
        corpus_stats=CorpusStats(stats["doc_count"], stats["total_tokens"],
                                 stats["avg_doc_len"]),
        doc_table=doc_table,
        term_dict=term_dict,
        postings_blob=blobs[manifest["files"]["postings"]],
        fields=json.loads(blobs[manifest["files"]["fields"]].decode("utf-8")),
    )
