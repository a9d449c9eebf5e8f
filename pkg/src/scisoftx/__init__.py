"""scisoftx: joint exploration of scientific publications and their source code."""

__version__ = "0.1.0"
