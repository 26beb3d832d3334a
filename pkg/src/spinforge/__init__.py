"""spinforge: spin-coupled state preparation circuits and subspace quantum algorithms."""

__version__ = "0.1.0"
