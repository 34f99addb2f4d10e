"""Exact combinatorics of affine Weyl groups and Bruhat-Tits buildings,
with a harmonic-cochain model of the dual Steinberg representation."""

from .errors import ConsistencyError, InvalidInput, MarginError, ResourceLimitError
from .rootdata import CartanType, RootDatum, build_root_datum

__all__ = [
    "CartanType",
    "RootDatum",
    "build_root_datum",
    "InvalidInput",
    "MarginError",
    "ConsistencyError",
    "ResourceLimitError",
]
