import sys
from dataclasses import dataclass
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pustak.corpus import load_bundle
from pustak.gencorpus import generate_corpus, load_plants
from pustak.index import IndexWriter, open_snapshot
from pustak.store import CorpusStore
from pustak.textproc import Analyzers, analyze_book


@pytest.fixture(scope="session")
def analyzers():
    return Analyzers()


@dataclass
class Corpus:
    corpus_dir: Path
    store_dir: Path
    index_dir: Path
    plants: list


def build_corpus(root: Path, analyzers, *, books=24, pages_per_book=3,
                 seed=11, plant_every=6, lines_per_page=6,
                 tokens_per_line=8) -> Corpus:
    corpus_dir = root / "corpus"
    store_dir = root / "store"
    index_dir = root / "index"
    generate_corpus(corpus_dir, books=books, pages_per_book=pages_per_book,
                    lang="mixed", seed=seed, plant_every=plant_every,
                    lines_per_page=lines_per_page,
                    tokens_per_line=tokens_per_line)
    store = CorpusStore(store_dir)
    total_pages = 0
    for entry in sorted(corpus_dir.iterdir()):
        if entry.is_dir():
            book = load_bundle(entry)
            store.add_book(book)
            total_pages += len(book.pages)
    store.state.append_status_point(len(store.book_ids()), total_pages,
                                    "fixture")
    writer = IndexWriter(analyzers)
    for book_id in store.book_ids():
        book = store.load_book(book_id)
        writer.add_document(
            book, analyze_book(book,
                               analyzers.for_language(book.meta.language)))
    writer.commit(index_dir)
    store.close()
    return Corpus(corpus_dir, store_dir, index_dir,
                  load_plants(corpus_dir))


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory, analyzers):
    """Read-only fixture corpus; tests that mutate state must build their
    own (see fresh_corpus)."""
    return build_corpus(tmp_path_factory.mktemp("small"), analyzers)


@pytest.fixture()
def fresh_corpus(tmp_path, analyzers):
    return build_corpus(tmp_path, analyzers, books=9, pages_per_book=2,
                        seed=3, plant_every=3)


@pytest.fixture()
def open_small(small_corpus, analyzers):
    store = CorpusStore(small_corpus.store_dir)
    snapshot = open_snapshot(small_corpus.index_dir,
                             expected_analyzer_hash=analyzers.fingerprint)
    yield store, snapshot
    store.close()
