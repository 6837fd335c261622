"""lindcert - Contraction certificates for time-dependent Lindbladians."""

__version__ = "0.1.0"
