"""Medial sphere data model."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Tuple

import numpy as np


class SphereKind(Enum):
    """Sphere classification by the number of surface regions it touches."""
    T2 = "T2"
    TN = "TN"
    FEATURE_EDGE = "feature_edge"
    CORNER = "corner"

    @property
    def is_feature(self) -> bool:
        return self in (SphereKind.FEATURE_EDGE, SphereKind.CORNER)


TangentPoint = Tuple[np.ndarray, np.ndarray]


@dataclass(eq=False)
class MedialSphere:
    """A vertex of the medial mesh: center, radius and classification."""
    id: int
    center: np.ndarray
    radius: float
    kind: SphereKind = SphereKind.T2
    tangent_points: List[TangentPoint] = field(default_factory=list)
    is_new: bool = True
    is_deleted: bool = False
    converged: bool = True
    n_tangent: int = 2

    def __post_init__(self):
        """Validate sphere geometry against its kind."""
        if isinstance(self.kind, str):
            self.kind = SphereKind(self.kind)
        self.center = np.asarray(self.center, dtype=float).reshape(3)
        self.radius = float(self.radius)
        if not np.all(np.isfinite(self.center)) or not np.isfinite(self.radius):
            raise ValueError("Sphere center and radius must be finite")
        if self.radius < 0:
            raise ValueError("Sphere radius cannot be negative")
        if self.kind.is_feature and self.radius != 0.0:
            raise ValueError("Feature spheres must have zero radius")
        if not self.kind.is_feature and self.radius == 0.0:
            raise ValueError("Only feature spheres may have zero radius")
        if self.kind is SphereKind.TN and self.n_tangent < 3:
            raise ValueError("TN spheres need at least 3 tangent regions")

    @property
    def is_active(self) -> bool:
        return not self.is_deleted

    @property
    def weight(self) -> float:
        """Squared radius, the weight of the power distance."""
        return self.radius * self.radius

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "id": self.id,
            "center": [float(x) for x in self.center],
            "radius": self.radius,
            "kind": self.kind.value,
            "n_tangent": self.n_tangent,
            "converged": self.converged,
            "deleted": self.is_deleted,
        }
