"""opnkit: exact-arithmetic constraints on odd perfect number candidates."""

__version__ = "0.1.0"
