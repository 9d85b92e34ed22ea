"""Keyword-anchored corpus curation and lexical measurement toolkit."""

__version__ = "0.1.0"
