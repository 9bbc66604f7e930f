"""Fractional Euler bookkeeping, component analysis and topology fixes."""

from .components import UnionFind, restricted_cc
from .euler import (
    MeshPayloads,
    accumulate_euler,
    accumulate_sphere,
    explicit_euler,
    global_euler,
    init_fractional_euler,
    signed_sum,
    simplex_payloads,
)
from .fixer import PinChoice, check_and_fix_topology, check_topology, find_violations

__all__ = [
    "UnionFind",
    "restricted_cc",
    "MeshPayloads",
    "accumulate_euler",
    "accumulate_sphere",
    "explicit_euler",
    "global_euler",
    "init_fractional_euler",
    "signed_sum",
    "simplex_payloads",
    "PinChoice",
    "check_and_fix_topology",
    "check_topology",
    "find_violations",
]
