"""Topology-preserving medial axis transform of tetrahedral solids."""

__version__ = "0.1.0"
