"""Exact computations for additive track categories over free class-2
nilpotent groups: collection, category cohomology, linear track extensions
and canonical interchange structures."""

__version__ = "0.1.0"
