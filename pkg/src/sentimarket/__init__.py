"""Sentiment signals, econometric tests and SVM trend classification for market data."""

from .errors import SentimarketError

__version__ = "0.1.0"

__all__ = ["SentimarketError", "__version__"]
