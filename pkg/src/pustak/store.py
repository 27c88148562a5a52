"""Corpus store: validated book bundles plus the mutable state database.

A store directory looks like:

    store/
      books/<book_id>/...   canonical bundles (corpus.save_bundle format)
      state.db              sqlite: hits, metadata overrides, tombstones,
                            admin accounts, sessions, status points

Index snapshots live elsewhere and never change; everything an admin can
mutate lives in state.db so edits are visible immediately without
re-indexing.
"""

from __future__ import annotations

import hashlib
import json
import os
import secrets
import sqlite3
import threading
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .corpus import LANGUAGES, Book, BookMeta, load_bundle, save_bundle
from .textproc import normalize

_SCHEMA = """
CREATE TABLE IF NOT EXISTS hits (
    book_id TEXT PRIMARY KEY,
    n INTEGER NOT NULL DEFAULT 0
);
CREATE TABLE IF NOT EXISTS overrides (
    book_id TEXT PRIMARY KEY,
    abstract TEXT,
    isbn TEXT,
    author TEXT
);
CREATE TABLE IF NOT EXISTS tombstones (
    book_id TEXT PRIMARY KEY,
    deleted_at REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS accounts (
    username TEXT PRIMARY KEY,
    password_hash BLOB NOT NULL,
    salt BLOB NOT NULL,
    role TEXT NOT NULL CHECK (role IN ('editor', 'monitor'))
);
CREATE TABLE IF NOT EXISTS sessions (
    token TEXT PRIMARY KEY,
    username TEXT NOT NULL,
    role TEXT NOT NULL,
    expires_at REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS status_points (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    timestamp REAL NOT NULL,
    cumulative_books INTEGER NOT NULL,
    cumulative_pages INTEGER NOT NULL,
    dataset_label TEXT NOT NULL
);
"""

SESSION_TTL_SECONDS = 24 * 3600

_SCRYPT = {"n": 2 ** 14, "r": 8, "p": 1}


def _hash_password(password: str, salt: bytes) -> bytes:
    return hashlib.scrypt(password.encode("utf-8"), salt=salt, **_SCRYPT)


@dataclass(frozen=True)
class StatusPoint:
    timestamp: float
    cumulative_books: int
    cumulative_pages: int
    dataset_label: str


class StateDB:
    """All mutable service state, serialized through one connection."""

    def __init__(self, path: str | os.PathLike):
        self._conn = sqlite3.connect(str(path), check_same_thread=False)
        self._conn.execute("PRAGMA journal_mode=WAL")
        self._lock = threading.Lock()
        with self._lock:
            self._conn.executescript(_SCHEMA)
            self._conn.commit()
            # hot read paths (search filters every candidate) are served
            # from memory; sqlite stays the durable record
            self._hits = dict(self._conn.execute(
                "SELECT book_id, n FROM hits").fetchall())
            self._tombstones = {row[0] for row in self._conn.execute(
                "SELECT book_id FROM tombstones").fetchall()}
            self._overrides = {}
            for book_id, abstract, isbn, author in self._conn.execute(
                    "SELECT book_id, abstract, isbn, author "
                    "FROM overrides").fetchall():
                self._overrides[book_id] = {
                    k: v for k, v in (("abstract", abstract),
                                      ("isbn", isbn), ("author", author))
                    if v is not None
                }

    def close(self) -> None:
        self._conn.close()

    # --- hit counters -------------------------------------------------------

    def get_hits(self, book_id: str) -> int:
        with self._lock:
            return self._hits.get(book_id, 0)

    def increment_hit(self, book_id: str) -> int:
        with self._lock:
            self._conn.execute(
                "INSERT INTO hits (book_id, n) VALUES (?, 1) "
                "ON CONFLICT(book_id) DO UPDATE SET n = n + 1",
                (book_id,),
            )
            self._conn.commit()
            value = self._hits.get(book_id, 0) + 1
            self._hits[book_id] = value
        return value

    # --- metadata overrides and tombstones ----------------------------------

    def set_override(self, book_id: str, patch: dict) -> None:
        fields = {k: patch[k] for k in ("abstract", "isbn", "author")
                  if k in patch}
        if not fields:
            raise ValueError("patch must set at least one field")
        with self._lock:
            merged = dict(self._overrides.get(book_id, {}))
            merged.update(fields)
            self._conn.execute(
                "INSERT OR REPLACE INTO overrides "
                "(book_id, abstract, isbn, author) VALUES (?, ?, ?, ?)",
                (book_id, merged.get("abstract"), merged.get("isbn"),
                 merged.get("author")),
            )
            self._conn.commit()
            self._overrides[book_id] = merged

    def get_override(self, book_id: str) -> dict:
        with self._lock:
            return dict(self._overrides.get(book_id, {}))

    def add_tombstone(self, book_id: str) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO tombstones (book_id, deleted_at) "
                "VALUES (?, ?)", (book_id, time.time()),
            )
            self._conn.commit()
            self._tombstones.add(book_id)

    def is_tombstoned(self, book_id: str) -> bool:
        with self._lock:
            return book_id in self._tombstones

    # --- admin accounts and sessions ----------------------------------------

    def create_account(self, username: str, password: str, role: str) -> None:
        if role not in ("editor", "monitor"):
            raise ValueError(f"bad role {role!r}")
        salt = secrets.token_bytes(16)
        digest = _hash_password(password, salt)
        with self._lock:
            self._conn.execute(
                "INSERT INTO accounts (username, password_hash, salt, role) "
                "VALUES (?, ?, ?, ?)", (username, digest, salt, role),
            )
            self._conn.commit()

    def has_account(self, username: str) -> bool:
        with self._lock:
            row = self._conn.execute(
                "SELECT 1 FROM accounts WHERE username = ?", (username,)
            ).fetchone()
        return row is not None

    def any_account(self) -> bool:
        with self._lock:
            row = self._conn.execute("SELECT 1 FROM accounts").fetchone()
        return row is not None

    def verify_credentials(self, username: str, password: str) -> Optional[str]:
        """Role name on success, None on bad username/password."""
        with self._lock:
            row = self._conn.execute(
                "SELECT password_hash, salt, role FROM accounts "
                "WHERE username = ?", (username,)
            ).fetchone()
        if not row:
            return None
        digest, salt, role = row
        if secrets.compare_digest(_hash_password(password, salt), digest):
            return role
        return None

    def create_session(self, username: str, role: str) -> tuple[str, float]:
        token = secrets.token_hex(32)
        expires = time.time() + SESSION_TTL_SECONDS
        with self._lock:
            self._conn.execute(
                "INSERT INTO sessions (token, username, role, expires_at) "
                "VALUES (?, ?, ?, ?)", (token, username, role, expires),
            )
            self._conn.commit()
        return token, expires

    def session_role(self, token: str) -> Optional[tuple[str, str]]:
        """(username, role) for a live session, else None."""
        with self._lock:
            row = self._conn.execute(
                "SELECT username, role, expires_at FROM sessions "
                "WHERE token = ?", (token,)
            ).fetchone()
        if not row or row[2] < time.time():
            return None
        return row[0], row[1]

    # --- ingestion status series --------------------------------------------

    def append_status_point(self, books: int, pages: int,
                            label: str) -> StatusPoint:
        point = StatusPoint(time.time(), books, pages, label)
        with self._lock:
            self._conn.execute(
                "INSERT INTO status_points "
                "(timestamp, cumulative_books, cumulative_pages, "
                "dataset_label) VALUES (?, ?, ?, ?)",
                (point.timestamp, point.cumulative_books,
                 point.cumulative_pages, point.dataset_label),
            )
            self._conn.commit()
        return point

    def status_points(self) -> list[StatusPoint]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT timestamp, cumulative_books, cumulative_pages, "
                "dataset_label FROM status_points ORDER BY id"
            ).fetchall()
        return [StatusPoint(*row) for row in rows]


class CorpusStore:
    """Books on disk plus the state database, opened together."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.books_dir = self.root / "books"
        self.books_dir.mkdir(parents=True, exist_ok=True)
        self.state = StateDB(self.root / "state.db")
        self._book_cache: dict[str, Book] = {}
        self._meta_cache: dict[str, BookMeta] = {}
        self._page_cache: dict[tuple[str, int], dict] = {}
        self._cache_lock = threading.Lock()

    def close(self) -> None:
        self.state.close()

    def book_ids(self) -> list[str]:
        return sorted(p.name for p in self.books_dir.iterdir() if p.is_dir())

    def has_book(self, book_id: str) -> bool:
        return (self.books_dir / book_id / "meta.json").is_file()

    def add_book(self, book: Book) -> None:
        save_bundle(book, self.books_dir / book.meta.book_id)

    def load_book(self, book_id: str) -> Book:
        with self._cache_lock:
            cached = self._book_cache.get(book_id)
        if cached is not None:
            return cached
        book = load_bundle(self.books_dir / book_id)
        with self._cache_lock:
            if len(self._book_cache) >= 64:
                self._book_cache.pop(next(iter(self._book_cache)))
            self._book_cache[book_id] = book
        return book

    def load_meta(self, book_id: str) -> BookMeta:
        """Metadata only, without reading page files."""
        with self._cache_lock:
            cached = self._meta_cache.get(book_id)
        if cached is not None:
            return cached
        raw = json.loads(
            (self.books_dir / book_id / "meta.json").read_text(
                encoding="utf-8")
        )
        meta = BookMeta(
            book_id=book_id,
            title=raw.get("title", ""),
            author=raw.get("author", ""),
            language=raw.get("language", LANGUAGES[0]),
            isbn=raw.get("isbn"),
            genre=raw.get("genre"),
            source=raw.get("source"),
            abstract=raw.get("abstract"),
            cover_image=raw.get("cover_image"),
        )
        with self._cache_lock:
            self._meta_cache[book_id] = meta
        return meta

    def page_count(self, book_id: str) -> int:
        return len(list((self.books_dir / book_id / "pages").glob("*.json")))

    def total_pages(self) -> int:
        return sum(self.page_count(b) for b in self.book_ids())

    def effective_meta(self, book_id: str) -> Optional[BookMeta]:
        """Metadata with admin overrides applied; None when the book is
        unknown or tombstoned (hidden everywhere)."""
        if not self.has_book(book_id) or self.state.is_tombstoned(book_id):
            return None
        meta = self.load_meta(book_id)
        override = self.state.get_override(book_id)
        return replace(meta, **override) if override else meta

    def line_text(self, book_id: str, page_no: int,
                  line_no: int) -> Optional[str]:
        """Normalized text of one line, for snippets and highlights.

        Reads just the one page file (store bundles are canonical, so the
        page file name is derived from page_no) instead of the whole book.
        """
        key = (book_id, page_no)
        with self._cache_lock:
            lines = self._page_cache.get(key)
        if lines is None:
            path = self.books_dir / book_id / "pages" / f"{page_no:04d}.json"
            try:
                obj = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, ValueError):
                return None
            lines = {entry["line_no"]: entry["text"]
                     for entry in obj.get("lines", [])}
            with self._cache_lock:
                if len(self._page_cache) >= 512:
                    self._page_cache.pop(next(iter(self._page_cache)))
                self._page_cache[key] = lines
        text = lines.get(line_no)
        return normalize(text) if text is not None else None
