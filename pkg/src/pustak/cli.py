"""Operator command line: ingest, index, search, gen-corpus, serve, bench."""

from __future__ import annotations

import json
import random
import shutil
import sys
import time
from pathlib import Path

import click

from . import gencorpus, search as searchmod
from .config import load_config
from .corpus import load_bundle
from .errors import PustakError
from .index import IndexWriter, open_snapshot
from .queryparse import FilterSet
from .search import SearchRequest
from .store import CorpusStore
from .textproc import Analyzers, analyze_book

#: matches starlette's JSONResponse serialization so `search --json` output
#: is byte-identical to the HTTP body
_JSON_KW = dict(ensure_ascii=False, allow_nan=False, indent=None,
                separators=(",", ":"))


@click.group()
def main():
    """Search engine tooling for OCR book corpora."""


@main.command()
@click.option("--corpus", "corpus_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--skip-bad", is_flag=True,
              help="Count bad bundles as errors instead of aborting.")
@click.option("--label", default=None, help="Dataset label for the status "
              "series; defaults to the corpus directory name.")
def ingest(corpus_dir, out_dir, skip_bad, label):
    """Validate every bundle under --corpus and write the corpus store."""
    store = CorpusStore(out_dir)
    books = pages = errors = 0
    failed = False
    for entry in sorted(Path(corpus_dir).iterdir()):
        if not entry.is_dir():
            continue
        try:
            book = load_bundle(entry)
        except PustakError as exc:
            errors += 1
            click.echo(f"error: {entry.name}: {exc}", err=True)
            if not skip_bad:
                failed = True
                break
            continue
        store.add_book(book)
        images = entry / "images"
        if images.is_dir():
            shutil.copytree(images, store.books_dir / book.meta.book_id /
                            "images", dirs_exist_ok=True)
        cover = book.meta.cover_image
        if cover and (entry / cover).is_file():
            target = store.books_dir / book.meta.book_id / cover
            target.parent.mkdir(parents=True, exist_ok=True)
            shutil.copyfile(entry / cover, target)
        books += 1
        pages += len(book.pages)
    if not failed:
        store.state.append_status_point(
            len(store.book_ids()), store.total_pages(),
            label or Path(corpus_dir).name)
    click.echo(f"books={books} pages={pages} errors={errors}")
    store.close()
    if failed:
        sys.exit(1)


@main.command("index")
@click.option("--store", "store_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--out", "index_dir", required=True, type=click.Path())
def index_cmd(store_dir, index_dir):
    """Build an index snapshot from a corpus store."""
    store = CorpusStore(store_dir)
    analyzers = Analyzers()
    writer = IndexWriter(analyzers)
    tokens_total = 0
    for book_id in store.book_ids():
        book = store.load_book(book_id)
        tokens = analyze_book(book, analyzers.for_language(book.meta.language))
        writer.add_document(book, tokens)
        tokens_total += len(tokens)
    try:
        snapshot = writer.commit(index_dir)
    except PustakError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"docs={snapshot.corpus_stats.doc_count} "
               f"tokens={tokens_total} snapshot={snapshot.snapshot_id}")
    store.close()


@main.command("search")
@click.option("--index", "index_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--store", "store_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--q", "query", required=True)
@click.option("--lang", type=click.Choice(["hi", "ta", "te"]), default=None)
@click.option("--field", type=click.Choice(["content", "title", "isbn",
                                            "author"]), default="content")
@click.option("--genre", default=None)
@click.option("--source", default=None)
@click.option("--multilingual", is_flag=True)
@click.option("--page", default=1, type=int)
@click.option("--size", default=10, type=int)
@click.option("--json", "as_json", is_flag=True,
              help="Emit the exact HTTP response body.")
def search_cmd(index_dir, store_dir, query, lang, field, genre, source,
               multilingual, page, size, as_json):
    """Run one query against a committed index."""
    store = CorpusStore(store_dir)
    analyzers = Analyzers()
    try:
        snapshot = open_snapshot(index_dir,
                                 expected_analyzer_hash=analyzers.fingerprint)
        request = SearchRequest(
            raw_query=query,
            filters=FilterSet(language=lang, field=field, genre=genre,
                              source=source),
            multilingual=multilingual, page=page, page_size=size,
        )
        result = searchmod.execute(request, snapshot, store, analyzers)
    except PustakError as exc:
        raise click.ClickException(str(exc))
    finally:
        store.close()
    if as_json:
        click.echo(json.dumps(searchmod.result_body(result), **_JSON_KW))
        return
    click.echo(f"total_hits: {result.total_hits}")
    for rank_no, card in enumerate(result.results,
                                   start=(page - 1) * size + 1):
        click.echo(f"{rank_no:3d}. [{card.score:.4f}] {card.book_id} "
                   f"{card.title} — {card.author}")
        if card.snippet:
            click.echo(f"      {card.snippet}")


@main.command("gen-corpus")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--books", required=True, type=int)
@click.option("--pages-per-book", default=5, type=int)
@click.option("--lang", type=click.Choice(["hi", "ta", "te", "mixed"]),
              default="mixed")
@click.option("--seed", default=0, type=int)
@click.option("--lines-per-page", default=10, type=int)
@click.option("--tokens-per-line", default=10, type=int)
@click.option("--plant-every", default=10, type=int,
              help="Plant a known phrase in every Nth book (0 disables).")
def gen_corpus_cmd(out_dir, books, pages_per_book, lang, seed,
                   lines_per_page, tokens_per_line, plant_every):
    """Generate a deterministic synthetic corpus with planted phrases."""
    summary = gencorpus.generate_corpus(
        out_dir, books=books, pages_per_book=pages_per_book, lang=lang,
        seed=seed, lines_per_page=lines_per_page,
        tokens_per_line=tokens_per_line, plant_every=plant_every)
    click.echo(f"books={summary.books} pages={summary.pages} "
               f"plants={len(summary.plants)}")


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
def serve(config_path):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    config = load_config(config_path)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port)


@main.command()
@click.option("--store", "store_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--index", "index_dir", required=True, type=click.Path())
@click.option("--queries", default=200, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--json", "as_json", is_flag=True)
def bench(store_dir, index_dir, queries, seed, as_json):
    """Time index construction and single-term query latency."""
    store = CorpusStore(store_dir)
    analyzers = Analyzers()

    index_seconds = None
    if not (Path(index_dir) / "manifest.json").is_file():
        started = time.perf_counter()
        writer = IndexWriter(analyzers)
        for book_id in store.book_ids():
            book = store.load_book(book_id)
            writer.add_document(
                book, analyze_book(book,
                                   analyzers.for_language(book.meta.language)))
        snapshot = writer.commit(index_dir)
        index_seconds = time.perf_counter() - started
    else:
        snapshot = open_snapshot(index_dir,
                                 expected_analyzer_hash=analyzers.fingerprint)

    stems = snapshot.term_stems()
    rng = random.Random(seed)
    sample = [stems[rng.randrange(len(stems))] for _ in range(queries)]
    latencies = []
    for stem_ in sample:
        started = time.perf_counter()
        searchmod.execute(SearchRequest(raw_query=stem_), snapshot, store,
                          analyzers)
        latencies.append((time.perf_counter() - started) * 1000.0)
    latencies.sort()
    pages = store.total_pages()
    report = {
        "docs": snapshot.corpus_stats.doc_count,
        "pages": pages,
        "tokens": snapshot.corpus_stats.total_tokens,
        "index_seconds": index_seconds,
        "query_count": queries,
        "p50_ms": latencies[len(latencies) // 2],
        "p95_ms": latencies[int(len(latencies) * 0.95)],
    }
    store.close()
    if as_json:
        click.echo(json.dumps(report, **_JSON_KW))
    else:
        built = (f"indexed in {index_seconds:.1f}s"
                 if index_seconds is not None else "reused existing index")
        click.echo(f"docs={report['docs']} pages={pages} "
                   f"tokens={report['tokens']} ({built})")
        click.echo(f"queries={queries} p50={report['p50_ms']:.2f}ms "
                   f"p95={report['p95_ms']:.2f}ms")


if __name__ == "__main__":
    main()
