"""Topology bookkeeping data models."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


class Dimension(Enum):
    """Dimension of a complex element; the Euler sign is (-1)^dim."""
    VERTEX = 0
    EDGE = 1
    FACE = 2
    CELL = 3

    @property
    def sign(self) -> int:
        return -1 if self.value % 2 else 1


@dataclass(frozen=True)
class FractionalEuler:
    """Exact share of one element's Euler contribution."""
    value: Fraction
    dimension: Dimension

    def __post_init__(self):
        """Coerce to an exact rational and check the sign."""
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))
        if self.value < 0:
            raise ValueError("Payload values are unsigned shares")
        if self.dimension is Dimension.CELL and self.value.denominator != 1:
            raise ValueError("Cell payloads must be integral")

    @property
    def signed(self) -> Fraction:
        return self.value * self.dimension.sign


@dataclass
class Component:
    """Connected piece of a restricted element, as the tets it spans."""
    tets: List[int]
    surface_points: np.ndarray
    surface_triangles: np.ndarray
    centroid: np.ndarray

    @property
    def reaches_surface(self) -> bool:
        return len(self.surface_points) > 0


@dataclass
class ElementStats:
    """Euler characteristic and component count of one restricted face or edge."""
    euler: Fraction = Fraction(0)
    cc: int = 0
    measure: float = 0.0
    components: List[Component] = field(default_factory=list)

    @property
    def present(self) -> bool:
        return self.cc > 0


@dataclass
class SurfaceFragment:
    """Part of a boundary triangle inside one restricted cell."""
    tet: int
    face: int
    triangle: int
    area: float
    centroid: np.ndarray
    normal: np.ndarray


@dataclass
class RestrictedElements:
    """Per-sphere aggregation of its restricted cell, faces, edges and vertices."""
    sphere: int
    rpc_euler: Fraction = Fraction(0)
    rpc_cc: int = 0
    rpc_volume: float = 0.0
    rpf: Dict[int, ElementStats] = field(default_factory=dict)
    rpe: Dict[Tuple[int, int], ElementStats] = field(default_factory=dict)
    rpv: Dict[Tuple[int, int, int], Fraction] = field(default_factory=dict)
    surface_patch: List[SurfaceFragment] = field(default_factory=list)
    rpc_components: List[Component] = field(default_factory=list)
    own_component: int = -1

    @property
    def empty(self) -> bool:
        return self.rpc_cc == 0

    def signed_total(self) -> Fraction:
        """Inclusion-exclusion share of this sphere in the global Euler sum."""
        total = self.rpc_euler
        total -= sum((s.euler for s in self.rpf.values()), Fraction(0)) / 2
        total += sum((s.euler for s in self.rpe.values()), Fraction(0)) / 3
        total -= sum(self.rpv.values(), Fraction(0)) / 4
        return total


class ViolationKind(Enum):
    """Which topological criterion an element fails."""
    CC = "CC!=1"
    EULER = "Euler!=1"


@dataclass
class TopoViolation:
    """One restricted element that is not a topological disk/ball."""
    sphere: int
    element: str
    kind: ViolationKind
    evidence: Optional[np.ndarray] = None
    value: Any = None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "sphere": self.sphere,
            "element": self.element,
            "kind": self.kind.value,
            "evidence": None if self.evidence is None else [float(x) for x in self.evidence],
            "value": str(self.value) if self.value is not None else None,
        }


@dataclass
class TopoReport:
    """Violations found by one topology check."""
    violations: List[TopoViolation] = field(default_factory=list)
    round_index: int = 0

    @property
    def clean(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "round": self.round_index,
            "violations": [v.to_dict() for v in self.violations],
        }
