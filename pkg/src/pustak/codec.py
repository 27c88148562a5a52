"""Delta + varint codec for positional posting lists.

Layout of one term's payload:

    varint  doc_count
    varint* doc_id deltas        (first is absolute, later ones >= 1)
    per doc, in the same order:
        varint  occurrence_count
        per occurrence: varint pos_delta (first absolute, later >= 1),
                        varint page_no, varint line_no

Varints are unsigned LEB128: 7 payload bits per byte, high bit set on
continuation bytes. Encodings must be minimal and fit in 63 bits; decode
rejects anything truncated, overlong or non-monotone with CorruptPostings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CorruptPostings

_MAX_VARINT_BYTES = 9


@dataclass(frozen=True)
class Occurrence:
    pos: int
    page_no: int
    line_no: int


@dataclass(frozen=True)
class Posting:
    doc_id: int
    occurrences: tuple[Occurrence, ...]


def encode_varint(value: int, out: bytearray) -> None:
    if value < 0:
        raise ValueError("varints are unsigned")
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def decode_varint(data: bytes, i: int) -> tuple[int, int]:
    """Returns (value, next_index); raises CorruptPostings on bad input."""
    value = 0
    shift = 0
    start = i
    while True:
        if i >= len(data):
            raise CorruptPostings("truncated varint")
        byte = data[i]
        i += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            # reject non-minimal encodings like 0x80 0x00
            if byte == 0 and i - start > 1:
                raise CorruptPostings("overlong varint")
            return value, i
        shift += 7
        if i - start >= _MAX_VARINT_BYTES:
            raise CorruptPostings("varint exceeds 63 bits")


def encode_postings(postings: list[Posting]) -> bytes:
    """Serialize a posting list; doc_ids and positions must be strictly
    increasing (guaranteed by the writer, asserted cheaply here)."""
    out = bytearray()
    encode_varint(len(postings), out)
    prev_doc = 0
    first = True
    for posting in postings:
        delta = posting.doc_id if first else posting.doc_id - prev_doc
        if delta < 0 or (not first and delta == 0):
            raise ValueError("doc_ids must be strictly increasing")
        encode_varint(delta, out)
        prev_doc = posting.doc_id
        first = False
    for posting in postings:
        encode_varint(len(posting.occurrences), out)
        prev_pos = 0
        first_occ = True
        for occ in posting.occurrences:
            pdelta = occ.pos if first_occ else occ.pos - prev_pos
            if pdelta < 0 or (not first_occ and pdelta == 0):
                raise ValueError("positions must be strictly increasing")
            encode_varint(pdelta, out)
            encode_varint(occ.page_no, out)
            encode_varint(occ.line_no, out)
            prev_pos = occ.pos
            first_occ = False
    return bytes(out)


def decode_postings(data: bytes) -> list[Posting]:
    """Exact inverse of encode_postings; CorruptPostings on any malformed
    payload, including trailing garbage."""
    ndocs, i = decode_varint(data, 0)
    doc_ids = []
    prev = 0
    for k in range(ndocs):
        delta, i = decode_varint(data, i)
        if k > 0 and delta == 0:
            raise CorruptPostings("non-monotone doc_id delta")
        prev = delta if k == 0 else prev + delta
        doc_ids.append(prev)
    postings = []
    for doc_id in doc_ids:
        nocc, i = decode_varint(data, i)
        occs = []
        prev_pos = 0
        for k in range(nocc):
            pdelta, i = decode_varint(data, i)
            if k > 0 and pdelta == 0:
                raise CorruptPostings("non-monotone position delta")
            prev_pos = pdelta if k == 0 else prev_pos + pdelta
            page_no, i = decode_varint(data, i)
            line_no, i = decode_varint(data, i)
            occs.append(Occurrence(prev_pos, page_no, line_no))
        postings.append(Posting(doc_id, tuple(occs)))
    if i != len(data):
        raise CorruptPostings(f"{len(data) - i} trailing bytes")
    return postings
