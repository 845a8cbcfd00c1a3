"""Importing this package registers every suite's cases."""
from . import calderon, constants, corollary4, duality, examples, identities, realmethod, tandori  # noqa: F401
