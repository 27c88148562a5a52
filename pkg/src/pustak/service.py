"""HTTP facade: public search/view/match/hit endpoints plus the
authenticated admin surface (login, metadata edits, status series).

Search and view endpoints are public by design; every mutating admin
endpoint requires an Editor session. Metadata is read live from the store
(with overrides and tombstones applied), never from the index snapshot, so
admin edits show up immediately without re-indexing.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Literal, Optional

from fastapi import Depends, FastAPI, Header, HTTPException, Query, Response
from pydantic import BaseModel

from . import search as searchmod
from .config import ServiceConfig
from .errors import BadPage, EmptyQuery, UnknownBook
from .index import IndexSnapshot, open_snapshot
from .queryparse import FilterSet
from .rank import RankingParams
from .search import SearchRequest, matches_body, result_body
from .store import CorpusStore
from .textproc import Analyzers

_IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".webp", ".gif"}

ADMIN_USER_ENV = "ADMIN_BOOTSTRAP_USER"
ADMIN_PASS_ENV = "ADMIN_BOOTSTRAP_PASS"


class AppState:
    """Shared immutable snapshot plus mutable store; the snapshot swap is a
    plain attribute assignment, so in-flight requests finish on the old
    generation."""

    def __init__(self, store: CorpusStore, analyzers: Analyzers,
                 snapshot: IndexSnapshot, params: RankingParams):
        self.store = store
        self.analyzers = analyzers
        self.snapshot = snapshot
        self.params = params

    def swap_snapshot(self, snapshot: IndexSnapshot) -> None:
        self.snapshot = snapshot


class LoginBody(BaseModel):
    username: str
    password: str


class PatchBody(BaseModel):
    abstract: Optional[str] = None
    isbn: Optional[str] = None
    author: Optional[str] = None

    def fields(self) -> dict:
        return {k: v for k, v in
                (("abstract", self.abstract), ("isbn", self.isbn),
                 ("author", self.author)) if v is not None}


class AccountBody(BaseModel):
    username: str
    password: str
    role: Literal["editor", "monitor"]


def bootstrap_admin(store: CorpusStore) -> None:
    """First-run Editor account from environment credentials."""
    user = os.environ.get(ADMIN_USER_ENV)
    password = os.environ.get(ADMIN_PASS_ENV)
    if user and password and not store.state.has_account(user):
        store.state.create_account(user, password, "editor")


def create_app(config: Optional[ServiceConfig] = None, *,
               state: Optional[AppState] = None) -> FastAPI:
    if state is None:
        if config is None:
            raise ValueError("need a config or a prebuilt AppState")
        store = CorpusStore(config.store_dir)
        data_dir = Path(config.data_dir) if config.data_dir else None
        analyzers = Analyzers(data_dir)
        snapshot = open_snapshot(config.index_dir,
                                 expected_analyzer_hash=analyzers.fingerprint)
        state = AppState(store, analyzers, snapshot, config.rank)
    bootstrap_admin(state.store)

    app = FastAPI(title="pustak", docs_url=None, redoc_url=None)
    app.state.pustak = state

    def session(authorization: Optional[str] = Header(None)) -> tuple[str, str]:
        if not authorization or not authorization.startswith("Bearer "):
            raise HTTPException(401, "missing bearer token")
        found = state.store.state.session_role(authorization[7:])
        if not found:
            raise HTTPException(401, "invalid or expired session")
        return found

    def editor(sess: tuple[str, str] = Depends(session)) -> tuple[str, str]:
        if sess[1] != "editor":
            raise HTTPException(403, "editor role required")
        return sess

    def visible_or_404(book_id: str):
        meta = state.store.effective_meta(book_id)
        if meta is None:
            raise HTTPException(404, "unknown book")
        return meta

    # --- public endpoints ---------------------------------------------------

    @app.get("/api/search")
    def api_search(
        q: str,
        lang: Optional[Literal["hi", "ta", "te"]] = None,
        field: Literal["content", "title", "isbn", "author"] = "content",
        genre: Optional[str] = None,
        source: Optional[str] = None,
        multilingual: bool = False,
        page: int = Query(1, ge=1),
        size: int = Query(10, ge=1, le=searchmod.MAX_PAGE_SIZE),
    ):
        if not q.strip():
            raise HTTPException(400, "EmptyQuery")
        request = SearchRequest(
            raw_query=q,
            filters=FilterSet(language=lang, field=field,
                              genre=genre, source=source),
            multilingual=multilingual, page=page, page_size=size,
        )
        try:
            result = searchmod.execute(request, state.snapshot, state.store,
                                       state.analyzers, state.params)
        except EmptyQuery:
            raise HTTPException(400, "EmptyQuery")
        except BadPage as exc:
            raise HTTPException(400, str(exc))
        return result_body(result)

    @app.get("/api/stats")
    def api_stats():
        store = state.store
        genres: set[str] = set()
        sources: set[str] = set()
        books = 0
        pages = 0
        for book_id in store.book_ids():
            meta = store.effective_meta(book_id)
            if meta is None:
                continue
            books += 1
            pages += store.page_count(book_id)
            if meta.genre:
                genres.add(meta.genre)
            if meta.source:
                sources.add(meta.source)
        return {
            "total_books": books,
            "total_pages": pages,
            "languages": ["hi", "ta", "te"],
            "genres": sorted(genres),
            "sources": sorted(sources),
        }

    @app.get("/api/books/{book_id}")
    def api_book(book_id: str):
        meta = visible_or_404(book_id)
        book = state.store.load_book(book_id)
        return {
            "book_id": meta.book_id,
            "title": meta.title,
            "author": meta.author,
            "language": meta.language,
            "isbn": meta.isbn,
            "genre": meta.genre,
            "source": meta.source,
            "abstract": meta.abstract,
            "cover_image": meta.cover_image,
            "page_count": len(book.pages),
            "hits": state.store.state.get_hits(book_id),
        }

    @app.get("/api/books/{book_id}/pages/{page_no}")
    def api_book_page(book_id: str, page_no: int):
        visible_or_404(book_id)
        book = state.store.load_book(book_id)
        page = book.page(page_no)
        if page is None:
            raise HTTPException(404, "unknown page")
        image = f"/media/{book_id}/{page.image}" if page.image else None
        return {
            "page_no": page.page_no,
            "page_count": len(book.pages),
            "image": image,
            "lines": [
                {"line_no": ln.line_no, "bbox": list(ln.bbox),
                 "text": ln.text}
                for ln in page.lines
            ],
        }

    @app.get("/api/books/{book_id}/matches")
    def api_book_matches(book_id: str, q: str, multilingual: bool = False):
        visible_or_404(book_id)
        if not q.strip():
            raise HTTPException(400, "EmptyQuery")
        try:
            matches = searchmod.matches_for_query(
                book_id, q, multilingual, state.snapshot, state.store,
                state.analyzers)
        except EmptyQuery:
            raise HTTPException(400, "EmptyQuery")
        except UnknownBook:
            raise HTTPException(404, "unknown book")
        body = matches_body(book_id, matches)
        for pm, raw in zip(matches, body["matches"]):
            if pm.image:
                raw["image"] = f"/media/{book_id}/{pm.image}"
        return body

    @app.post("/api/books/{book_id}/hit", status_code=204)
    def api_book_hit(book_id: str):
        visible_or_404(book_id)
        state.store.state.increment_hit(book_id)
        return Response(status_code=204)

    @app.get("/media/{book_id}/{rest:path}")
    def media(book_id: str, rest: str):
        visible_or_404(book_id)
        base = (state.store.books_dir / book_id).resolve()
        target = (base / rest).resolve()
        if not str(target).startswith(str(base) + os.sep) \
                or target.suffix.lower() not in _IMAGE_SUFFIXES \
                or not target.is_file():
            raise HTTPException(404, "not found")
        from fastapi.responses import FileResponse
        return FileResponse(target)

    # --- admin endpoints ----------------------------------------------------

    @app.post("/api/admin/login")
    def admin_login(body: LoginBody):
        role = state.store.state.verify_credentials(body.username,
                                                    body.password)
        if role is None:
            raise HTTPException(401, "bad credentials")
        token, expires = state.store.state.create_session(body.username, role)
        return {"token": token, "role": role, "expires_at": expires}

    @app.get("/api/admin/status")
    def admin_status(sess=Depends(session)):
        points = state.store.state.status_points()
        return {
            "points": [
                {"timestamp": p.timestamp,
                 "cumulative_books": p.cumulative_books,
                 "cumulative_pages": p.cumulative_pages,
                 "dataset_label": p.dataset_label}
                for p in points
            ],
            "datasets": sorted({p.dataset_label for p in points}),
        }

    @app.patch("/api/admin/books/{book_id}")
    def admin_patch_book(book_id: str, body: PatchBody,
                         sess=Depends(editor)):
        fields = body.fields()
        if not fields:
            raise HTTPException(422, "patch must set at least one field")
        visible_or_404(book_id)
        state.store.state.set_override(book_id, fields)
        meta = state.store.effective_meta(book_id)
        return {"book_id": book_id, "abstract": meta.abstract,
                "isbn": meta.isbn, "author": meta.author}

    @app.delete("/api/admin/books/{book_id}", status_code=204)
    def admin_delete_book(book_id: str, sess=Depends(editor)):
        visible_or_404(book_id)
        state.store.state.add_tombstone(book_id)
        return Response(status_code=204)

    @app.post("/api/admin/accounts", status_code=201)
    def admin_create_account(body: AccountBody, sess=Depends(editor)):
        if state.store.state.has_account(body.username):
            raise HTTPException(409, "username exists")
        state.store.state.create_account(body.username, body.password,
                                         body.role)
        return {"username": body.username, "role": body.role}

    return app
