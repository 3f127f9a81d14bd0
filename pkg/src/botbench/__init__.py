"""Low-cost social bot detection: feature extraction and classifier benchmarking."""

__version__ = "0.1.0"
