"""Phonetic cross-script mapping between Devanagari, Tamil, Telugu and Latin.

Every script table maps graphemes to a shared script-neutral phoneme
inventory (consonants carry their inherent vowel; matras, virama and the
nasal/aspiration signs are separate symbols). The Brahmic tables follow the
common ISCII-heritage block layout, so the consonant/vowel core corresponds
by code-point offset within each Unicode block; characters one script lacks
are rendered through per-script exception tables and are therefore lossy in
the reverse direction.

Unmappable characters travel through as literal symbols ("raw:<char>"), so
both directions are total.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Optional

from .textproc import default_data_dir, normalize

SCRIPTS = ("deva", "taml", "telu", "latn")

#: corpus language code -> script of its native text
LANGUAGE_SCRIPT = {"hi": "deva", "ta": "taml", "te": "telu"}
SCRIPT_LANGUAGE = {v: k for k, v in LANGUAGE_SCRIPT.items()}

_VOWELS = {"A", "AA", "I", "II", "U", "UU", "R", "RR", "L", "LL",
           "E", "EE", "AI", "O", "OO", "AU", "EC", "OC"}
_SIGNS = {"virama", "anusvara", "visarga", "cbindu", "nukta", "avagraha"}

#: independent vowel -> dependent (matra) form; A is the inherent vowel
VOWEL_TO_MATRA = {v: "-" + v.lower() for v in _VOWELS if v != "A"}
MATRA_TO_VOWEL = {m: v for v, m in VOWEL_TO_MATRA.items()}

LITERAL_PREFIX = "raw:"


def literal(ch: str) -> str:
    return LITERAL_PREFIX + ch


def kind(phoneme: str) -> str:
    if phoneme.startswith(LITERAL_PREFIX):
        return "literal"
    if phoneme.startswith("-"):
        return "matra"
    if phoneme in _VOWELS:
        return "vowel"
    if phoneme in _SIGNS:
        return "sign"
    if phoneme.isdigit():
        return "digit"
    return "consonant"


@dataclass(frozen=True)
class ScriptTable:
    script: str
    to_phoneme: dict          # grapheme -> phoneme (incl. alt spellings)
    from_phoneme: dict        # phoneme -> primary grapheme
    exceptions: dict          # phoneme -> fallback spelling in this script
    max_key_len: int

    def render(self, phoneme: str) -> Optional[str]:
        """Native grapheme, exception fallback, or None if unknown."""
        if phoneme in self.from_phoneme:
            return self.from_phoneme[phoneme]
        if phoneme in self.exceptions:
            return self.exceptions[phoneme]
        return None


def _load_tsv(path: Path) -> list[list[str]]:
    rows = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        if not raw or raw.startswith("#"):
            continue
        rows.append(raw.split("\t"))
    return rows


@lru_cache(maxsize=None)
def load_table(script: str, data_dir: Optional[str] = None) -> ScriptTable:
    if script not in SCRIPTS:
        raise ValueError(f"unknown script {script!r}")
    root = Path(data_dir) if data_dir else default_data_dir()
    to_ph = {}
    from_ph = {}
    for row in _load_tsv(root / "translit" / f"{script}.tsv"):
        grapheme, phoneme = row[0], row[1]
        is_alt = len(row) > 2 and row[2] == "alt"
        to_ph[grapheme] = phoneme
        if not is_alt and phoneme not in from_ph:
            from_ph[phoneme] = grapheme
    exceptions = {}
    exc_path = root / "translit" / f"exceptions.{script}.tsv"
    if exc_path.is_file():
        for row in _load_tsv(exc_path):
            exceptions[row[0]] = row[1] if len(row) > 1 else ""
    return ScriptTable(
        script=script,
        to_phoneme=to_ph,
        from_phoneme=from_ph,
        exceptions=exceptions,
        max_key_len=max(len(k) for k in to_ph),
    )


def _match_at(table: ScriptTable, text: str, i: int) -> tuple[Optional[str], int]:
    """Longest grapheme key of the table matching text at i."""
    for width in range(min(table.max_key_len, len(text) - i), 0, -1):
        phoneme = table.to_phoneme.get(text[i:i + width])
        if phoneme is not None:
            return phoneme, width
    return None, 1


def _latin_to_phonemes(table: ScriptTable, text: str) -> list[str]:
    # Romanized text is alphabetic: a consonant letter absorbs a following
    # vowel (inherent "a" emits nothing, others become matras) and takes a
    # virama when no vowel follows.
    out = []
    i = 0
    n = len(text)
    while i < n:
        phoneme, width = _match_at(table, text, i)
        if phoneme is None:
            out.append(literal(text[i]))
            i += 1
            continue
        i += width
        if kind(phoneme) != "consonant":
            out.append(phoneme)
            continue
        out.append(phoneme)
        v_phoneme, v_width = _match_at(table, text, i)
        if v_phoneme is not None and kind(v_phoneme) == "vowel":
            i += v_width
            if v_phoneme != "A":
                out.append(VOWEL_TO_MATRA[v_phoneme])
        else:
            out.append("virama")
    return out


def to_phonemes(text: str, script: str, data_dir: Optional[str] = None) -> list[str]:
    """Greedy longest-match decoding; unmappables become literal symbols."""
    table = load_table(script, data_dir)
    text = normalize(text)
    if script == "latn":
        return _latin_to_phonemes(table, text.lower())
    out = []
    i = 0
    while i < len(text):
        phoneme, width = _match_at(table, text, i)
        if phoneme is None:
            out.append(literal(text[i]))
            i += 1
        else:
            out.append(phoneme)
            i += width
    return out


def _render_latin(table: ScriptTable, seq: list[str]) -> str:
    out = []
    j = 0
    n = len(seq)
    while j < n:
        phoneme = seq[j]
        k = kind(phoneme)
        if k == "literal":
            out.append(phoneme[len(LITERAL_PREFIX):])
            j += 1
        elif k == "consonant":
            rendered = table.render(phoneme)
            out.append(rendered if rendered is not None else "")
            nxt = seq[j + 1] if j + 1 < n else None
            nxt_kind = kind(nxt) if nxt is not None else None
            if nxt == "virama":
                j += 2
            elif nxt_kind == "matra":
                out.append(_render_matra_latin(table, nxt))
                j += 2
            else:
                out.append("a")
                j += 1
        elif k == "matra":
            out.append(_render_matra_latin(table, phoneme))
            j += 1
        elif phoneme == "virama":
            j += 1
        else:
            rendered = table.render(phoneme)
            out.append(rendered if rendered is not None else "")
            j += 1
    return "".join(out)


def _render_matra_latin(table: ScriptTable, matra: str) -> str:
    if matra in table.exceptions:
        return table.exceptions[matra]
    vowel = MATRA_TO_VOWEL[matra]
    rendered = table.render(vowel)
    return rendered if rendered is not None else ""


def from_phonemes(seq: Iterable[str], script: str,
                  data_dir: Optional[str] = None) -> str:
    """Inverse rendering; phonemes the script lacks use exception fallbacks."""
    table = load_table(script, data_dir)
    seq = list(seq)
    if script == "latn":
        return _render_latin(table, seq)
    out = []
    for phoneme in seq:
        if kind(phoneme) == "literal":
            out.append(phoneme[len(LITERAL_PREFIX):])
            continue
        rendered = table.render(phoneme)
        if rendered is not None:
            out.append(rendered)
    return "".join(out)


def transliterate(text: str, from_script: str, to_script: str,
                  data_dir: Optional[str] = None) -> str:
    if from_script == to_script:
        return normalize(text)
    return from_phonemes(to_phonemes(text, from_script, data_dir),
                         to_script, data_dir)


def detect_script(text: str) -> str:
    """Dominant script of the text; Latin when nothing Brahmic is present."""
    counts = {"deva": 0, "taml": 0, "telu": 0}
    for ch in text:
        cp = ord(ch)
        if 0x0900 <= cp <= 0x097F:
            counts["deva"] += 1
        elif 0x0B80 <= cp <= 0x0BFF:
            counts["taml"] += 1
        elif 0x0C00 <= cp <= 0x0C7F:
            counts["telu"] += 1
    best = max(counts, key=counts.get)
    return best if counts[best] > 0 else "latn"


_ASCII_LONG = {"a": "ā", "i": "ī", "u": "ū"}


def _latin_readings(text: str, cap: int = 4) -> list[str]:
    """Interpretations of ASCII romanization where a/i/u may be long vowels.

    Readings are ordered by how many vowels were lengthened, then left to
    right, and capped to keep query fan-out bounded.
    """
    positions = [
        i for i, ch in enumerate(text)
        if ch in _ASCII_LONG and i > 0 and text[i - 1].isalpha()
    ]
    readings = [text]
    # single lengthenings first, then pairs, etc.
    from itertools import combinations
    for size in range(1, len(positions) + 1):
        for combo in combinations(positions, size):
            if len(readings) >= cap:
                return readings
            chars = list(text)
            for p in combo:
                chars[p] = _ASCII_LONG[chars[p]]
            readings.append("".join(chars))
    return readings[:cap]


def query_variants(text: str, source_script: str, targets: set[str],
                   data_dir: Optional[str] = None) -> list[tuple[str, str]]:
    """Transliterated query variants, one or more per requested target
    script, deduplicated, always starting with the original text."""
    norm = normalize(text)
    out = [(source_script, norm)]
    seen = {(source_script, norm)}
    for target in SCRIPTS:
        if target not in targets or target == source_script:
            continue
        if source_script == "latn":
            candidates = [
                transliterate(reading, "latn", target, data_dir)
                for reading in _latin_readings(norm.lower())
            ]
        else:
            candidates = [transliterate(norm, source_script, target, data_dir)]
        for candidate in candidates:
            key = (target, candidate)
            if candidate and key not in seen:
                seen.add(key)
                out.append(key)
    return out
