"""pustak: full-text search over OCR-digitized Hindi/Tamil/Telugu book corpora.

Subpackages cover the whole retrieval path: bundle ingestion (`corpus`),
text analysis (`textproc`), cross-script mapping (`translit`), query parsing
(`queryparse`), the positional inverted index (`index`, `codec`), scoring
(`rank`), orchestration (`search`), persistence and HTTP surface (`store`,
`service`), and operator tooling (`cli`, `gencorpus`).
"""

__version__ = "0.1.0"
