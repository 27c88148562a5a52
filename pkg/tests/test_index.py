import hashlib
import json

import pytest

from oracle import OracleCorpus
from pustak import index as indexmod
from pustak.corpus import Book, BookMeta, Line, Page
from pustak.errors import (AnalyzerMismatch, CorruptIndex, DuplicateBookId,
                           EmptyIndex, WriterConflict)
from pustak.index import IndexWriter, open_snapshot
from pustak.textproc import analyze_book, normalize, stem


def make_book(book_id, texts, lang="hi"):
    lines = tuple(Line(i, (0, 30 * i, 400, 28), t)
                  for i, t in enumerate(texts))
    return Book(
        meta=BookMeta(book_id=book_id, title=f"शीर्षक {book_id}",
                      author="लेखक", language=lang),
        pages=(Page(1, None, lines),),
    )


@pytest.fixture()
def three_doc_snapshot(tmp_path, analyzers):
    books = [
        make_book("b0", ["राम वन गए", "सीता साथ गईं"]),
        make_book("b1", ["राम राज", "लव कुश"]),
        make_book("b2", ["वन में फूल", "कमल और कुमुद"]),
    ]
    writer = IndexWriter(analyzers)
    for book in books:
        writer.add_document(
            book, analyze_book(book, analyzers.for_language("hi")))
    snapshot = writer.commit(tmp_path / "idx")
    return books, snapshot, tmp_path / "idx"


class TestAddDocument:
    def test_dense_doc_ids(self, analyzers):
        writer = IndexWriter(analyzers)
        config = analyzers.for_language("hi")
        b0 = make_book("x0", ["एक"])
        b1 = make_book("x1", ["दो"])
        assert writer.add_document(b0, analyze_book(b0, config)) == 0
        assert writer.add_document(b1, analyze_book(b1, config)) == 1

    def test_duplicate_book_id(self, analyzers):
        writer = IndexWriter(analyzers)
        config = analyzers.for_language("hi")
        book = make_book("dup", ["एक"])
        writer.add_document(book, analyze_book(book, config))
        with pytest.raises(DuplicateBookId):
            writer.add_document(book, analyze_book(book, config))

    def test_repeated_term_single_posting(self, tmp_path, analyzers):
        writer = IndexWriter(analyzers)
        config = analyzers.for_language("hi")
        book = make_book("rep", ["राम राम"])
        writer.add_document(book, analyze_book(book, config))
        snapshot = writer.commit(tmp_path / "idx")
        postings = snapshot.lookup(stem(normalize("राम"), config))
        assert len(postings) == 1
        assert [o.pos for o in postings[0].occurrences] == [0, 1]


class TestLookup:
    def test_unknown_term(self, three_doc_snapshot):
        _books, snapshot, idx_dir = three_doc_snapshot
        assert snapshot.lookup("नहींहै") == []

    def test_doc_set_matches_brute_force(self, three_doc_snapshot,
                                          analyzers):
        books, snapshot, idx_dir = three_doc_snapshot
        oracle = OracleCorpus(books, analyzers)
        config = analyzers.for_language("hi")
        for word in ["राम", "वन", "सीता", "कमल", "फूल", "गए"]:
            stemmed = stem(normalize(word), config)
            got = {snapshot.doc_table[p.doc_id].book_id
                   for p in snapshot.lookup(stemmed)}
            expected = oracle.search([word])
            assert got == expected, word
            doc_ids = [p.doc_id for p in snapshot.lookup(stemmed)]
            assert doc_ids == sorted(doc_ids)

    def test_stopwords_never_indexed(self, three_doc_snapshot, analyzers):
        _books, snapshot, idx_dir = three_doc_snapshot
        # "और" is a stopword: it appears in b2's text but not in the index
        assert snapshot.lookup("और") == []


class TestPhraseMatch:
    def test_single_stem_degenerates_to_lookup(self, three_doc_snapshot,
                                               analyzers):
        _books, snapshot, idx_dir = three_doc_snapshot
        config = analyzers.for_language("hi")
        stemmed = stem("राम", config)
        postings = {p.doc_id: p for p in snapshot.lookup(stemmed)}
        for doc_id, posting in postings.items():
            got = snapshot.phrase_match([stemmed], doc_id)
            assert got == list(posting.occurrences)

    def test_adjacency_enumerated_by_hand(self, tmp_path, analyzers):
        # doc = "a b a": phrase "a b" matches only at position 0
        writer = IndexWriter(analyzers)
        config = analyzers.for_language("hi")
        book = make_book("ab", ["का़म बिना का़म"])
        # use two distinct non-stopword words
        book = make_book("ab", ["कमल नयन कमल"])
        writer.add_document(book, analyze_book(book, config))
        snapshot = writer.commit(tmp_path / "idx")
        a, b = stem("कमल", config), stem("नयन", config)
        matches = snapshot.phrase_match([a, b], 0)
        assert [o.pos for o in matches] == [0]
        assert snapshot.phrase_match([b, a], 0)[0].pos == 1

    def test_no_adjacency(self, three_doc_snapshot, analyzers):
        _books, snapshot, idx_dir = three_doc_snapshot
        config = analyzers.for_language("hi")
        assert snapshot.phrase_match(
            [stem("राम", config), stem("फूल", config)], 0) == []

    def test_placeholder_matches_any_token(self, tmp_path, analyzers):
        writer = IndexWriter(analyzers)
        config = analyzers.for_language("hi")
        book = make_book("ph", ["कमल जल नयन"])
        writer.add_document(book, analyze_book(book, config))
        snapshot = writer.commit(tmp_path / "idx")
        a, c = stem("कमल", config), stem("नयन", config)
        assert [o.pos for o in snapshot.phrase_match([a, None, c], 0)] == [0]
        # placeholder window must stay inside the document
        assert snapshot.phrase_match([c, None], 0) == []

    def test_phrase_subset_of_conjunction(self, three_doc_snapshot,
                                          analyzers):
        books, snapshot, idx_dir = three_doc_snapshot
        config = analyzers.for_language("hi")
        stems = [stem("राम", config), stem("वन", config)]
        phrase_docs = set(snapshot.phrase_docs(stems))
        conjunction = set.intersection(*[
            {p.doc_id for p in snapshot.lookup(s)} for s in stems
        ])
        assert phrase_docs <= conjunction


class TestCommitAndOpen:
    def test_empty_index(self, tmp_path, analyzers):
        with pytest.raises(EmptyIndex):
            IndexWriter(analyzers).commit(tmp_path / "idx")

    def test_reopen_equivalent(self, tmp_path, three_doc_snapshot,
                               analyzers):
        _books, snapshot, idx_dir = three_doc_snapshot
        reopened = open_snapshot(idx_dir)
        config = analyzers.for_language("hi")
        for word in ["राम", "वन", "कमल"]:
            stemmed = stem(word, config)
            assert reopened.lookup(stemmed) == snapshot.lookup(stemmed)
        assert reopened.corpus_stats == snapshot.corpus_stats
        assert reopened.snapshot_id == snapshot.snapshot_id

    def test_commit_over_existing_bumps_generation(self, tmp_path,
                                                   analyzers):
        config = analyzers.for_language("hi")
        idx = tmp_path / "idx"
        first = None
        for round_no in range(2):
            writer = IndexWriter(analyzers)
            book = make_book("g", ["कमल नयन जल"])
            writer.add_document(book, analyze_book(book, config))
            snapshot = writer.commit(idx)
            if round_no == 0:
                first = snapshot
        second = open_snapshot(idx)
        assert second.generation == first.generation + 1
        assert second.snapshot_id != first.snapshot_id
        # the old snapshot object still answers queries (files untouched)
        assert first.lookup(stem("कमल", config))

    def test_analyzer_hash_mismatch(self, tmp_path, three_doc_snapshot):
        _books, snapshot, idx_dir = three_doc_snapshot
        with pytest.raises(AnalyzerMismatch):
            open_snapshot(idx_dir, expected_analyzer_hash="0" * 64)

    def test_digest_mismatch_detected(self, tmp_path, analyzers):
        config = analyzers.for_language("hi")
        writer = IndexWriter(analyzers)
        book = make_book("d", ["कमल नयन"])
        writer.add_document(book, analyze_book(book, config))
        snapshot = writer.commit(tmp_path / "idx")
        manifest = json.loads((tmp_path / "idx" / "manifest.json").
                              read_text())
        name = manifest["files"]["postings"]
        blob = bytearray((tmp_path / "idx" / name).read_bytes())
        blob[0] ^= 0xFF
        (tmp_path / "idx" / name).write_bytes(blob)
        with pytest.raises(CorruptIndex):
            open_snapshot(tmp_path / "idx")



class TestManifestConsistency:
    def test_tampered_corpus_stats_rejected(self, tmp_path, analyzers):
        config = analyzers.for_language("hi")
        writer = IndexWriter(analyzers)
        book = make_book("m", ["कमल नयन"])
        writer.add_document(book, analyze_book(book, config))
        writer.commit(tmp_path / "idx")
        manifest_path = tmp_path / "idx" / "manifest.json"
        manifest = json.loads(manifest_path.read_text())
        manifest["corpus_stats"]["doc_count"] = 99
        manifest_path.write_text(json.dumps(manifest))
        with pytest.raises(CorruptIndex):
            open_snapshot(tmp_path / "idx")


class TestCrashInjection:
    def test_old_snapshot_survives_failed_publish(self, tmp_path, analyzers,
                                                  monkeypatch):
        config = analyzers.for_language("hi")
        idx = tmp_path / "idx"
        writer = IndexWriter(analyzers)
        book = make_book("c0", ["कमल नयन जल"])
        writer.add_document(book, analyze_book(book, config))
        old = writer.commit(idx)

        # second commit dies after segments are written, before the
        # manifest rename
        real_publish = indexmod._publish_manifest

        def boom(path, manifest):
            raise OSError("injected crash before manifest publish")

        monkeypatch.setattr(indexmod, "_publish_manifest", boom)
        writer2 = IndexWriter(analyzers)
        book2 = make_book("c1", ["वायु गगन"])
        writer2.add_document(book2, analyze_book(book2, config))
        with pytest.raises(OSError):
            writer2.commit(idx)
        monkeypatch.setattr(indexmod, "_publish_manifest", real_publish)

        reopened = open_snapshot(idx)
        assert reopened.snapshot_id == old.snapshot_id
        assert reopened.lookup(stem("कमल", config))
        assert reopened.lookup(stem("वायु", config)) == []


class TestDeterminismAndImmutability:
    def test_same_corpus_byte_identical_segments(self, tmp_path, analyzers):
        config = analyzers.for_language("hi")

        def build(where):
            writer = IndexWriter(analyzers)
            for i in range(4):
                book = make_book(f"b{i}", [f"कमल नयन {i}", "राम वन"])
                writer.add_document(book, analyze_book(book, config))
            writer.commit(where)

        build(tmp_path / "i1")
        build(tmp_path / "i2")
        names1 = sorted(p.name for p in (tmp_path / "i1").iterdir())
        names2 = sorted(p.name for p in (tmp_path / "i2").iterdir())
        assert names1 == names2
        for name in names1:
            if name == "manifest.json":
                continue  # may carry a distinct snapshot id; segments never
            assert (tmp_path / "i1" / name).read_bytes() == \
                (tmp_path / "i2" / name).read_bytes(), name

    def test_query_storm_leaves_files_untouched(self, tmp_path, analyzers):
        config = analyzers.for_language("hi")
        writer = IndexWriter(analyzers)
        for i in range(3):
            book = make_book(f"s{i}", ["राम वन गए", "कमल नयन"])
            writer.add_document(book, analyze_book(book, config))
        snapshot = writer.commit(tmp_path / "idx")

        def digest_tree():
            out = {}
            for p in sorted((tmp_path / "idx").iterdir()):
                out[p.name] = hashlib.sha256(p.read_bytes()).hexdigest()
            return out

        before = digest_tree()
        for _ in range(200):
            snapshot.lookup(stem("राम", config))
            snapshot.phrase_docs([stem("राम", config),
                                  stem("वन", config)])
        assert digest_tree() == before


class TestWriterExclusion:
    def test_second_writer_rejected_while_locked(self, tmp_path, analyzers):
        config = analyzers.for_language("hi")
        idx = tmp_path / "idx"
        idx.mkdir()
        (idx / ".write.lock").touch()   # simulate a live writer
        writer = IndexWriter(analyzers)
        book = make_book("w", ["कमल नयन"])
        writer.add_document(book, analyze_book(book, config))
        with pytest.raises(WriterConflict):
            writer.commit(idx)
        (idx / ".write.lock").unlink()
        writer.commit(idx)              # lock released: commit succeeds
        assert (idx / "manifest.json").is_file()
        assert not (idx / ".write.lock").exists()
