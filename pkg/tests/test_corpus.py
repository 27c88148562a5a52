import json

import pytest

from pustak.corpus import load_bundle, save_bundle, validate_isbn
from pustak.errors import (EmptyBook, MalformedPage, MissingMeta,
                           UnsupportedLanguage)


def write_bundle(root, meta, pages):
    (root / "pages").mkdir(parents=True)
    (root / "meta.json").write_text(json.dumps(meta, ensure_ascii=False),
                                    encoding="utf-8")
    for page in pages:
        name = f"{page['page_no']:04d}.json"
        (root / "pages" / name).write_text(
            json.dumps(page, ensure_ascii=False), encoding="utf-8")


def line(no, text):
    return {"line_no": no, "bbox": [10, 20 + 30 * no, 200, 28], "text": text}


def test_minimal_valid_bundle(tmp_path):
    root = tmp_path / "b1"
    write_bundle(root, {"language": "hi", "title": "परीक्षा", "author": "क"},
                 [{"page_no": 1, "lines": [line(0, "राम वन गए")]}])
    book = load_bundle(root)
    assert len(book.pages) == 1
    assert len(book.pages[0].lines) == 1
    assert book.meta.title == "परीक्षा"
    assert book.meta.book_id == "b1"


def test_missing_meta(tmp_path):
    root = tmp_path / "b2"
    (root / "pages").mkdir(parents=True)
    with pytest.raises(MissingMeta):
        load_bundle(root)


def test_three_page_fixture_order(tmp_path):
    # fixture hand-checked against the bundle grammar: three pages written
    # out of order on disk must come back as [1, 2, 3]
    root = tmp_path / "b3"
    write_bundle(root, {"language": "ta", "title": "நூல்", "author": "அ"}, [
        {"page_no": 2, "lines": [line(0, "இரண்டு")]},
        {"page_no": 1, "lines": [line(0, "ஒன்று"), line(1, "வரி")]},
        {"page_no": 3, "lines": []},
    ])
    book = load_bundle(root)
    assert [p.page_no for p in book.pages] == [1, 2, 3]
    assert book.pages[0].lines[1].text == "வரி"


def test_unsupported_language(tmp_path):
    root = tmp_path / "b4"
    write_bundle(root, {"language": "en", "title": "x", "author": "y"},
                 [{"page_no": 1, "lines": []}])
    with pytest.raises(UnsupportedLanguage):
        load_bundle(root)


def test_empty_book(tmp_path):
    root = tmp_path / "b5"
    write_bundle(root, {"language": "hi", "title": "x", "author": "y"}, [])
    with pytest.raises(EmptyBook):
        load_bundle(root)


def test_malformed_page_bad_bbox(tmp_path):
    root = tmp_path / "b6"
    write_bundle(root, {"language": "hi", "title": "x", "author": "y"}, [
        {"page_no": 1,
         "lines": [{"line_no": 0, "bbox": [1, 2, 0, 5], "text": "a"}]},
    ])
    with pytest.raises(MalformedPage):
        load_bundle(root)


def test_malformed_page_duplicate_line_no(tmp_path):
    root = tmp_path / "b7"
    write_bundle(root, {"language": "hi", "title": "x", "author": "y"}, [
        {"page_no": 1, "lines": [line(0, "a"), line(0, "b")]},
    ])
    with pytest.raises(MalformedPage):
        load_bundle(root)


def test_page_numbers_must_increase(tmp_path):
    root = tmp_path / "b8"
    (root / "pages").mkdir(parents=True)
    (root / "meta.json").write_text(
        json.dumps({"language": "hi", "title": "x", "author": "y"}))
    # filename order says page 2 first, but it carries page_no 3
    (root / "pages" / "0001.json").write_text(
        json.dumps({"page_no": 3, "lines": []}))
    (root / "pages" / "0002.json").write_text(
        json.dumps({"page_no": 1, "lines": []}))
    with pytest.raises(MalformedPage):
        load_bundle(root)


def test_invalid_isbn_is_warning_not_failure(tmp_path, caplog):
    root = tmp_path / "b9"
    write_bundle(root, {"language": "hi", "title": "x", "author": "y",
                        "isbn": "1234567890"},
                 [{"page_no": 1, "lines": []}])
    book = load_bundle(root)
    assert book.meta.isbn == "1234567890"


def test_image_only_pages_load(tmp_path):
    root = tmp_path / "b10"
    write_bundle(root, {"language": "te", "title": "x", "author": "y"},
                 [{"page_no": 1, "image": "images/0001.png", "lines": []}])
    book = load_bundle(root)
    assert book.pages[0].image == "images/0001.png"
    assert book.pages[0].lines == ()


def test_load_is_deterministic(tmp_path):
    root = tmp_path / "b11"
    write_bundle(root, {"language": "hi", "title": "शीर्षक", "author": "अ"}, [
        {"page_no": 1, "lines": [line(0, "एक दो तीन"), line(1, "चार")]},
        {"page_no": 2, "lines": [line(0, "पाँच")]},
    ])
    assert load_bundle(root) == load_bundle(root)


def test_save_load_round_trip(tmp_path):
    root = tmp_path / "b12"
    write_bundle(root, {"language": "hi", "title": "शीर्षक", "author": "अ",
                        "isbn": "9780306406157", "genre": "katha",
                        "abstract": "सार"}, [
        {"page_no": 1, "image": "images/0001.png",
         "lines": [line(0, "एक दो तीन"), line(1, "चार")]},
        {"page_no": 5, "lines": [line(0, "पाँच")]},
    ])
    book = load_bundle(root)
    out = tmp_path / "b12"  # same id: directory name is the book_id
    out2 = tmp_path / "copy" / "b12"
    save_bundle(book, out2)
    assert load_bundle(out2) == book


class TestValidateIsbn:
    def test_known_isbn13(self):
        # 9780306406157: alternating 1/3 weights sum to a multiple of 10
        digits = [int(c) for c in "9780306406157"]
        checksum = sum(d * (1 if i % 2 == 0 else 3)
                       for i, d in enumerate(digits))
        assert checksum % 10 == 0
        assert validate_isbn("9780306406157") is True

    def test_perturbed_check_digit(self):
        assert validate_isbn("9780306406158") is False

    def test_empty(self):
        assert validate_isbn("") is False

    def test_isbn10(self):
        # 0306406152 is the ISBN-10 form of the example above
        assert validate_isbn("0306406152") is True
        assert validate_isbn("0306406153") is False

    def test_isbn10_x_check_digit(self):
        # weighted sum of 097522980 is 88 -> check digit 10 -> X
        assert validate_isbn("097522980X") is True

    def test_hyphen_insensitive(self):
        assert validate_isbn("978-0-306-40615-7") is True
        assert validate_isbn("0-306-40615-2") is True

    def test_garbage(self):
        assert validate_isbn("abcdefghij") is False
        assert validate_isbn("97803064061") is False
