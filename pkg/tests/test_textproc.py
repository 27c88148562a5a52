import unicodedata

import pytest
from hypothesis import given, settings, strategies as st

from pustak.corpus import Book, BookMeta, Line, Page
from pustak.textproc import (AnalyzerConfig, analyze_book, analyze_line,
                             load_analyzer, normalize, remove_stopwords,
                             stem, tokenize, Token)


def make_book(lines_by_page, lang="hi"):
    pages = []
    for page_no, texts in lines_by_page:
        lines = tuple(
            Line(line_no=i, bbox=(0, 30 * i, 100, 28), text=t)
            for i, t in enumerate(texts)
        )
        pages.append(Page(page_no=page_no, image=None, lines=lines))
    meta = BookMeta(book_id="t", title="t", author="a", language=lang)
    return Book(meta=meta, pages=tuple(pages))


class TestNormalize:
    def test_empty(self):
        assert normalize("") == ""

    def test_nukta_composition(self):
        # canonical decomposition of U+0958 is exactly ka + nukta, per the
        # published Unicode data; normalize must re-compose it
        assert unicodedata.decomposition("क़") == "0915 093C"
        assert normalize("क़") == "क़"

    def test_zwj_stripped(self):
        assert normalize("राम‍") == "राम"
        assert normalize("रा‌म") == "राम"

    def test_whitespace_collapse(self):
        assert normalize("एक   दो\t तीन\n") == "एक दो तीन"

    def test_tamil_two_part_vowel_composed(self):
        assert normalize("ொ") == "ொ"

    @given(st.text(max_size=200))
    def test_idempotent(self, text):
        once = normalize(text)
        assert normalize(once) == once


class TestTokenize:
    def test_danda_split(self):
        assert [s for s, _ in tokenize("राम वन गए।")] == ["राम", "वन", "गए"]

    def test_punctuation_only(self):
        assert tokenize("।।।") == []

    def test_latin_comma(self):
        assert [s for s, _ in tokenize("a,b")] == ["a", "b"]

    def test_digits_alone_are_not_tokens(self):
        assert tokenize("123 456") == []
        assert [s for s, _ in tokenize("a1 2b")] == ["a1", "2b"]

    def test_spans_index_input(self):
        text = normalize("राम, वन गए।")
        for surface, (start, end) in tokenize(text):
            assert text[start:end] == surface


@pytest.fixture(scope="module")
def hi_config():
    return load_analyzer("hi")


class TestStem:
    def test_shipped_rule_strips_plural(self, hi_config):
        assert stem(normalize("लड़कों"), hi_config) == normalize("लड़क")

    def test_short_word_unchanged(self, hi_config):
        assert stem("वन", hi_config) == "वन"

    def test_idempotent_on_fixture_words(self, hi_config):
        words = ["लड़कों", "किताबें", "जाता", "जाती", "रामों", "वन",
                 "खाता", "बनाएंगे", "और", "के"]
        for word in words:
            once = stem(normalize(word), hi_config)
            assert stem(once, hi_config) == once

    def test_min_stem_len_blocks_strip(self):
        config = AnalyzerConfig("hi", frozenset(), (("ा", 2),))
        assert stem("का", config) == "का"      # remainder would be 1 char
        assert stem("रामा", config) == "राम"

    def test_rules_must_be_sorted(self):
        with pytest.raises(ValueError):
            AnalyzerConfig("hi", frozenset(), (("ा", 2), ("ों", 2)))

    def test_min_len_validated(self):
        with pytest.raises(ValueError):
            AnalyzerConfig("hi", frozenset(), (("ा", 0),))


class TestStopwords:
    def test_shipped_hindi_stopword(self, hi_config):
        tokens = [
            Token(s, stem(s, hi_config), 1, 0, i, (0, 1))
            for i, s in enumerate(["राम", "और", "सीता"])
        ]
        survivors = remove_stopwords(tokens, hi_config)
        assert [t.surface for t in survivors] == ["राम", "सीता"]

    def test_empty(self, hi_config):
        assert remove_stopwords([], hi_config) == []

    def test_empty_stopword_list_is_identity(self):
        config = AnalyzerConfig("hi", frozenset(), ())
        tokens = [Token("और", "और", 1, 0, 0, (0, 2))]
        assert remove_stopwords(tokens, config) == tokens


class TestAnalyzeBook:
    def test_single_line(self, hi_config):
        book = make_book([(1, ["राम वन"])])
        tokens = analyze_book(book, hi_config)
        assert [(t.pos, t.line_no) for t in tokens] == [(0, 0), (1, 0)]

    def test_global_positions_across_pages(self, hi_config):
        book = make_book([(1, ["राम"]), (2, ["वन"])])
        tokens = analyze_book(book, hi_config)
        assert [(t.pos, t.page_no) for t in tokens] == [(0, 1), (1, 2)]

    def test_stopword_gap_closed(self, hi_config):
        # "और" is in the shipped stopword file; survivors renumber 0,1
        book = make_book([(1, ["राम और सीता"])])
        tokens = analyze_book(book, hi_config)
        assert [(t.surface, t.pos) for t in tokens] == [("राम", 0),
                                                        ("सीता", 1)]

    def test_deterministic(self, hi_config):
        book = make_book([(1, ["राम वन गए।", "सीता भी गईं।"]),
                          (2, ["लव कुश"])])
        assert analyze_book(book, hi_config) == analyze_book(book, hi_config)

    def test_char_span_reproduces_surface(self, hi_config):
        book = make_book([(1, ["  राम,   वन।", "सीता‍ और लव"])])
        for token in analyze_book(book, hi_config):
            page = book.pages[0]
            line = page.lines[token.line_no]
            norm = normalize(line.text)
            start, end = token.char_span
            assert norm[start:end] == token.surface


class TestQueryDocumentSymmetry:
    @given(st.lists(st.sampled_from(
        ["राम", "और", "सीता", "वन", "लड़कों", "गए", "की", "कथाएं"]),
        min_size=1, max_size=6))
    @settings(max_examples=60)
    def test_same_stems_both_ways(self, words, ):
        config = load_analyzer("hi")
        text = " ".join(words)
        as_doc = [lt.stem for lt in analyze_line(text, config)
                  if not lt.is_stopword]
        book = make_book([(1, [text])])
        as_indexed = [t.stem for t in analyze_book(book, config)]
        assert as_doc == as_indexed
