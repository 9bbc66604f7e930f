"""Feature curve and feature bookkeeping data models."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np

from .tet_mesh import FeatureKind


@dataclass
class FeaturePolyline:
    """Chain of feature edges between corners, or a closed loop."""
    vertices: List[int]
    edges: List[int]
    kind: FeatureKind
    closed: bool = False


@dataclass
class FeatureSegment:
    """Arc-length piece of a feature polyline."""
    polyline: int
    index: int
    start: np.ndarray
    end: np.ndarray
    midpoint: np.ndarray
    kind: FeatureKind
    edge: int

    @property
    def key(self) -> Tuple[int, int]:
        return (self.polyline, self.index)


@dataclass
class FeatureCoverage:
    """Which sphere owns each convex sharp-edge segment."""
    sharp_edge_segments: Dict[Tuple[int, int], int] = field(default_factory=dict)
    uncovered: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.uncovered


class SheetStatus(Enum):
    """Outcome of the internal feature check of one medial edge."""
    PENDING = "pending"
    SAME_SHEET = "same-sheet"
    CROSS_SHEET = "cross-sheet"
    CROSS_SHEET_FIXED = "cross-sheet-fixed"


@dataclass
class SheetQueueEntry:
    """Medial edge waiting for the same-sheet test."""
    edge: Tuple[int, int]
    status: SheetStatus = SheetStatus.PENDING
