"""Software model of a unified post-quantum cryptoprocessor."""

__version__ = "0.1.0"
