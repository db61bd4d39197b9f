"""npswatch: infoveillance engine for novel psychoactive substances.

Ingests web forums, online shop showcases, and keyword-filtered
microblog streams into one corpus, indexes the text by term, source,
section, and time bucket, and serves trend / emergence / heavy-tail
analytics over a read-only JSON API and CLI.
"""

__version__ = "0.1.0"

INDEX_MAGIC = "npswatch-index"
INDEX_VERSION = 1
