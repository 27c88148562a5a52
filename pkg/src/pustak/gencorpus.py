"""Seeded synthetic corpus generator.

Real NDLI-style scans cannot ship with the repository, so tests and
benchmarks run against generated trilingual corpora. Generation is fully
deterministic for a given seed, and known "plant" phrases are written at
known (book, page, line) coordinates: plant words are built from reserved
consonants the regular vocabulary never uses, which makes planted
occurrences globally unique and highlight assertions exact.

plants.json at the corpus root records every planted phrase.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from pathlib import Path

from .corpus import LANGUAGES

# per-language syllable inventory; the reserved consonants are kept out of
# vocabulary words and used only to mint plant words
_SCRIPT_PARTS = {
    "hi": {
        "consonants": list("कखगचजटडणतदनपबभमयरलवशसह"),
        "matras": ["", "ा", "ि", "ी", "ु", "ू", "े", "ै", "ो", "ौ"],
        "reserved": ("झ", "ठ"),
        "danda": "।",
    },
    "ta": {
        "consonants": list("கஙசஞடணதநபமயரலவழளறனஸ"),
        "matras": ["", "ா", "ி", "ீ", "ு", "ூ", "ெ", "ே", "ை", "ொ"],
        "reserved": ("ஶ", "ஜ"),
        "danda": ".",
    },
    "te": {
        "consonants": list("కగచజటడణతదనపబమయరలవశసహ"),
        "matras": ["", "ా", "ి", "ీ", "ు", "ూ", "ె", "ే", "ై", "ొ"],
        "reserved": ("ఝ", "ఢ"),
        "danda": ".",
    },
}

_GENRES = ["katha", "itihas", "kavya", "vigyan", "dharma"]
_SOURCES = ["desk-a", "desk-b", "desk-c"]

_STOPWORD_SAMPLE = {
    "hi": ["और", "का", "के", "में", "से", "है", "पर", "यह"],
    "ta": ["ஒரு", "அந்த", "இந்த", "என்று", "மற்றும்", "இது"],
    "te": ["మరియు", "ఒక", "ఈ", "ఆ", "అది", "కూడా"],
}


@dataclass(frozen=True)
class Plant:
    book_id: str
    page_no: int
    line_no: int
    words: tuple[str, ...]

    @property
    def phrase(self) -> str:
        return " ".join(self.words)


@dataclass(frozen=True)
class GenSummary:
    books: int
    pages: int
    plants: list[Plant]


def _make_vocab(lang: str, rng: random.Random, size: int) -> list[str]:
    parts = _SCRIPT_PARTS[lang]
    vocab = []
    seen = set()
    while len(vocab) < size:
        syllables = rng.randint(2, 4)
        word = "".join(
            rng.choice(parts["consonants"]) + rng.choice(parts["matras"])
            for _ in range(syllables)
        )
        if word not in seen:
            seen.add(word)
            vocab.append(word)
    return vocab


def _plant_word(lang: str, counter: int) -> str:
    """Unique word for plant #counter, spelled with reserved consonants at
    both ends so no vocabulary word or stem can collide with it."""
    parts = _SCRIPT_PARTS[lang]
    r1, r2 = parts["reserved"]
    consonants = parts["consonants"]
    digits = []
    value = counter
    while True:
        digits.append(consonants[value % len(consonants)])
        value //= len(consonants)
        if not value:
            break
    return r1 + "".join(digits) + r2


def _valid_isbn13(rng: random.Random) -> str:
    digits = [9, 7, 8] + [rng.randint(0, 9) for _ in range(9)]
    total = sum(d * (1 if i % 2 == 0 else 3) for i, d in enumerate(digits))
    digits.append((10 - total % 10) % 10)
    return "".join(str(d) for d in digits)


def _pick_words(vocab: list[str], cum_weights: list[float],
                rng: random.Random, count: int) -> list[str]:
    # cum_weights precomputed once: random.choices would otherwise rebuild
    # the prefix sums on every call, which dominates large generations
    return rng.choices(vocab, cum_weights=cum_weights, k=count)


def generate_corpus(out_dir: str | Path, *, books: int, pages_per_book: int,
                    lang: str = "mixed", seed: int = 0,
                    lines_per_page: int = 10, tokens_per_line: int = 10,
                    plant_every: int = 10, vocab_size: int = 6000
                    ) -> GenSummary:
    """Write `books` bundles under out_dir; returns totals and plants.

    lang is one of hi/ta/te or "mixed" (books cycle through all three).
    Every plant_every-th book gets a three-word plant phrase at a fixed,
    recorded coordinate; plant_every=0 disables planting.
    """
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)

    langs = list(LANGUAGES) if lang == "mixed" else [lang]
    vocab = {l: _make_vocab(l, random.Random(seed * 977 + i), vocab_size)
             for i, l in enumerate(langs)}
    cum_weights = list(itertools.accumulate(
        1.0 / (i + 100) for i in range(vocab_size)))

    plants: list[Plant] = []
    total_pages = 0
    for b in range(books):
        book_lang = langs[b % len(langs)]
        parts = _SCRIPT_PARTS[book_lang]
        words = vocab[book_lang]
        stopwords = _STOPWORD_SAMPLE[book_lang]
        book_id = f"{book_lang}-{seed:04d}-{b:05d}"
        book_dir = root / book_id
        (book_dir / "pages").mkdir(parents=True, exist_ok=True)

        isbn_roll = rng.random()
        meta = {
            "title": " ".join(_pick_words(words, cum_weights, rng,
                                          rng.randint(2, 4))),
            "author": " ".join(_pick_words(words, cum_weights, rng, 2)),
            "language": book_lang,
            "genre": rng.choice(_GENRES),
            "source": rng.choice(_SOURCES),
        }
        if isbn_roll < 0.7:
            meta["isbn"] = _valid_isbn13(rng)
        if rng.random() < 0.6:
            meta["abstract"] = " ".join(_pick_words(words, cum_weights, rng, 8))
        (book_dir / "meta.json").write_text(
            json.dumps(meta, ensure_ascii=False, indent=1), encoding="utf-8")

        plant = None
        if plant_every and b % plant_every == 0:
            plant_words = tuple(
                _plant_word(book_lang, len(plants) * 3 + k) for k in range(3)
            )
            plant_page = rng.randint(1, pages_per_book)
            plant_line = rng.randint(0, lines_per_page - 1)
            plant = Plant(book_id, plant_page, plant_line, plant_words)
            plants.append(plant)

        for page_no in range(1, pages_per_book + 1):
            lines = []
            y = 50
            for line_no in range(lines_per_page):
                toks = []
                for _ in range(tokens_per_line):
                    if rng.random() < 0.15:
                        toks.append(rng.choice(stopwords))
                    else:
                        toks.append(_pick_words(words, cum_weights, rng, 1)[0])
                if plant and page_no == plant.page_no \
                        and line_no == plant.line_no:
                    at = rng.randint(0, len(toks) - 3)
                    toks[at:at + 3] = list(plant.words)
                text = " ".join(toks)
                if rng.random() < 0.3:
                    text += parts["danda"]
                lines.append({
                    "line_no": line_no,
                    "bbox": [40, y, max(20, 14 * len(text)), 28],
                    "text": text,
                })
                y += 34
            page = {"page_no": page_no, "lines": lines}
            (book_dir / "pages" / f"{page_no:04d}.json").write_text(
                json.dumps(page, ensure_ascii=False), encoding="utf-8")
            total_pages += 1

    if plant_every:
        plants_path = root / "plants.json"
        existing = []
        if plants_path.is_file():
            existing = json.loads(plants_path.read_text(encoding="utf-8"))
        existing.extend(
            {"book_id": p.book_id, "page_no": p.page_no,
             "line_no": p.line_no, "words": list(p.words)}
            for p in plants
        )
        plants_path.write_text(
            json.dumps(existing, ensure_ascii=False, indent=1),
            encoding="utf-8")
    return GenSummary(books=books, pages=total_pages, plants=plants)


def load_plants(corpus_dir: str | Path) -> list[Plant]:
    path = Path(corpus_dir) / "plants.json"
    if not path.is_file():
        return []
    return [
        Plant(obj["book_id"], obj["page_no"], obj["line_no"],
              tuple(obj["words"]))
        for obj in json.loads(path.read_text(encoding="utf-8"))
    ]
