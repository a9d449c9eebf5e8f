"""Minimal internal PDF reading layer used by the document extractor."""
