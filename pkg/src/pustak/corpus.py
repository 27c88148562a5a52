"""Corpus data model and on-disk book bundle parsing.

A bundle is one directory per book:

    <bundle>/
      meta.json            title/author/isbn/language/... (language: hi|ta|te)
      pages/0001.json      {"page_no": 1, "image": "images/0001.png",
                            "lines": [{"line_no": 0, "bbox": [x,y,w,h],
                                       "text": "..."}]}
      images/0001.png      optional page scans

The directory name is the book_id. Page files are read in zero-padded
filename order and their page_no values must be strictly increasing.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import EmptyBook, MalformedPage, MissingMeta, UnsupportedLanguage

logger = logging.getLogger(__name__)

LANGUAGES = ("hi", "ta", "te")

#: language code -> human-readable name, as used in result cards
LANGUAGE_NAMES = {"hi": "Hindi", "ta": "Tamil", "te": "Telugu"}


@dataclass(frozen=True)
class Line:
    """One OCR line: 0-based line_no, pixel bbox (x, y, w, h), raw text."""

    line_no: int
    bbox: tuple[int, int, int, int]
    text: str


@dataclass(frozen=True)
class Page:
    page_no: int
    image: Optional[str]
    lines: tuple[Line, ...]


@dataclass(frozen=True)
class BookMeta:
    book_id: str
    title: str
    author: str
    language: str
    isbn: Optional[str] = None
    genre: Optional[str] = None
    source: Optional[str] = None
    abstract: Optional[str] = None
    cover_image: Optional[str] = None


@dataclass(frozen=True)
class Book:
    meta: BookMeta
    pages: tuple[Page, ...]

    def page(self, page_no: int) -> Optional[Page]:
        for p in self.pages:
            if p.page_no == page_no:
                return p
        return None


def validate_isbn(isbn: str) -> bool:
    """True iff the digits (hyphens/spaces ignored) pass the ISBN-10 mod-11
    or ISBN-13 mod-10 weighted checksum. Malformed input returns False."""
    digits = isbn.replace("-", "").replace(" ", "")
    if len(digits) == 10:
        total = 0
        for i, ch in enumerate(digits[:9]):
            if not ch.isdigit():
                return False
            total += int(ch) * (10 - i)
        last = digits[9]
        if last in ("X", "x"):
            total += 10
        elif last.isdigit():
            total += int(last)
        else:
            return False
        return total % 11 == 0
    if len(digits) == 13:
        if not digits.isdigit():
            return False
        total = sum(int(ch) * (1 if i % 2 == 0 else 3) for i, ch in enumerate(digits))
        return total % 10 == 0
    return False


def normalize_isbn(isbn: str) -> str:
    """Strip hyphens and spaces; uppercase a trailing X."""
    return isbn.replace("-", "").replace(" ", "").upper()


def _require(cond: bool, page_no, reason: str) -> None:
    if not cond:
        raise MalformedPage(page_no, reason)


def _parse_line(obj, page_no) -> Line:
    _require(isinstance(obj, dict), page_no, "line entry is not an object")
    line_no = obj.get("line_no")
    _require(isinstance(line_no, int) and line_no >= 0, page_no, "bad line_no")
    bbox = obj.get("bbox")
    _require(
        isinstance(bbox, (list, tuple)) and len(bbox) == 4
        and all(isinstance(v, (int, float)) for v in bbox),
        page_no, f"line {line_no}: bbox must be [x, y, w, h]",
    )
    x, y, w, h = (int(v) for v in bbox)
    _require(w > 0 and h > 0, page_no, f"line {line_no}: non-positive bbox size")
    text = obj.get("text")
    _require(isinstance(text, str), page_no, f"line {line_no}: text must be a string")
    return Line(line_no=line_no, bbox=(x, y, w, h), text=text)


def _parse_page(obj, fallback_no) -> Page:
    _require(isinstance(obj, dict), fallback_no, "page file is not a JSON object")
    page_no = obj.get("page_no")
    _require(isinstance(page_no, int) and page_no >= 1, fallback_no, "bad page_no")
    image = obj.get("image")
    if image is not None:
        _require(isinstance(image, str), page_no, "image must be a path string")
    lines_raw = obj.get("lines", [])
    _require(isinstance(lines_raw, list), page_no, "lines must be a list")
    lines = [_parse_line(entry, page_no) for entry in lines_raw]
    seen = set()
    for ln in lines:
        _require(ln.line_no not in seen, page_no, f"duplicate line_no {ln.line_no}")
        seen.add(ln.line_no)
    lines.sort(key=lambda ln: ln.line_no)
    return Page(page_no=page_no, image=image, lines=tuple(lines))


def load_bundle(path: str | os.PathLike) -> Book:
    """Load and validate one book bundle directory.

    Raises MissingMeta, UnsupportedLanguage, MalformedPage or EmptyBook.
    An invalid ISBN in the metadata is logged as a warning, not an error:
    legacy books frequently carry dirty identifiers.
    """
    root = Path(path)
    meta_path = root / "meta.json"
    if not meta_path.is_file():
        raise MissingMeta(f"no meta.json in {root}")
    try:
        raw = json.loads(meta_path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise MissingMeta(f"unreadable meta.json in {root}: {exc}") from exc
    if not isinstance(raw, dict):
        raise MissingMeta(f"meta.json in {root} is not an object")

    language = raw.get("language")
    if language not in LANGUAGES:
        raise UnsupportedLanguage(f"{root}: language {language!r} not in {LANGUAGES}")

    meta = BookMeta(
        book_id=root.name,
        title=str(raw.get("title", "")),
        author=str(raw.get("author", "")),
        language=language,
        isbn=raw.get("isbn"),
        genre=raw.get("genre"),
        source=raw.get("source"),
        abstract=raw.get("abstract"),
        cover_image=raw.get("cover_image"),
    )
    if meta.isbn and not validate_isbn(meta.isbn):
        logger.warning("book %s: ISBN %r fails checksum", meta.book_id, meta.isbn)

    pages_dir = root / "pages"
    page_files = sorted(pages_dir.glob("*.json")) if pages_dir.is_dir() else []
    pages = []
    last_no = 0
    for pf in page_files:
        try:
            obj = json.loads(pf.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise MalformedPage(pf.name, f"unreadable JSON: {exc}") from exc
        page = _parse_page(obj, pf.stem)
        _require(page.page_no > last_no, page.page_no,
                 f"page_no not strictly increasing (after {last_no})")
        last_no = page.page_no
        pages.append(page)

    if not pages:
        raise EmptyBook(f"{root}: no pages")
    return Book(meta=meta, pages=tuple(pages))


def save_bundle(book: Book, path: str | os.PathLike) -> None:
    """Write a Book back out in bundle format (inverse of load_bundle).

    Image files themselves are not copied; only references are preserved.
    """
    root = Path(path)
    (root / "pages").mkdir(parents=True, exist_ok=True)
    meta = {
        "title": book.meta.title,
        "author": book.meta.author,
        "language": book.meta.language,
    }
    for key in ("isbn", "genre", "source", "abstract", "cover_image"):
        value = getattr(book.meta, key)
        if value is not None:
            meta[key] = value
    (root / "meta.json").write_text(
        json.dumps(meta, ensure_ascii=False, indent=1), encoding="utf-8"
    )
    for page in book.pages:
        obj = {
            "page_no": page.page_no,
            "lines": [
                {"line_no": ln.line_no, "bbox": list(ln.bbox), "text": ln.text}
                for ln in page.lines
            ],
        }
        if page.image is not None:
            obj["image"] = page.image
        out = root / "pages" / f"{page.page_no:04d}.json"
        out.write_text(json.dumps(obj, ensure_ascii=False), encoding="utf-8")
