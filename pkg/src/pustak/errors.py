"""Exception types shared across the package."""


class PustakError(Exception):
    """Base class for all package errors."""


class MissingMeta(PustakError):
    """Bundle directory has no meta.json."""


class MalformedPage(PustakError):
    """A page file failed validation."""

    def __init__(self, page_no, reason):
        self.page_no = page_no
        self.reason = reason
        super().__init__(f"page {page_no}: {reason}")


class UnsupportedLanguage(PustakError):
    """Language code outside the supported set (hi, ta, te)."""


class EmptyBook(PustakError):
    """Bundle contains no pages."""


class EmptyQuery(PustakError):
    """Query text empty after trimming."""


class BadPage(PustakError):
    """Pagination parameters outside their valid range."""


class DuplicateBookId(PustakError):
    """Same book_id added to an index writer twice."""


class EmptyIndex(PustakError):
    """Commit attempted with no documents added."""


class WriterConflict(PustakError):
    """A second writer tried to commit into a locked index directory."""


class CorruptPostings(PustakError):
    """Posting payload failed to decode (truncated, overlong, non-monotone)."""


class CorruptIndex(PustakError):
    """Index directory unreadable or digest mismatch."""


class AnalyzerMismatch(PustakError):
    """Snapshot was built with different analyzer data files."""


class DomainError(PustakError):
    """Ranking function called outside its domain."""


class UnknownBook(PustakError):
    """book_id not present in the corpus."""
