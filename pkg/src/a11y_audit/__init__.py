"""Static accessibility auditor for course-material corpora.

Parses HTML, Markdown, and slide manifests into uniform trees, runs
machine-decidable accessibility rules over them, classifies the hits into
annotated issues with stable fingerprints, and supports snapshot diffing
plus a CI gate.
"""

__version__ = "0.1.0"
