"""Data models for the medial axis pipeline."""

from .config import (
    FeatureConfig,
    GeometryConfig,
    InitStrategy,
    MeshConfig,
    MeshFormat,
    OutputConfig,
    PinStrategy,
    PipelineConfig,
    RpdConfig,
    SphereConfig,
    TopologyConfig,
)
from .features import FeatureCoverage, FeaturePolyline, FeatureSegment, SheetQueueEntry, SheetStatus
from .medial_mesh import MedialMesh, MetricsReport, TriangleMesh
from .sphere import MedialSphere, SphereKind
from .stats import PipelineStats, RoundStats, StageTimer
from .tet_mesh import FeatureEdge, FeatureKind, SampleKind, SurfaceSample, TetMesh
from .topology import (
    ElementStats,
    FractionalEuler,
    RestrictedElements,
    TopoReport,
    TopoViolation,
    ViolationKind,
)

__all__ = [
    "FeatureConfig",
    "GeometryConfig",
    "InitStrategy",
    "MeshConfig",
    "MeshFormat",
    "OutputConfig",
    "PinStrategy",
    "PipelineConfig",
    "RpdConfig",
    "SphereConfig",
    "TopologyConfig",
    "FeatureCoverage",
    "FeaturePolyline",
    "FeatureSegment",
    "SheetQueueEntry",
    "SheetStatus",
    "MedialMesh",
    "MetricsReport",
    "TriangleMesh",
    "MedialSphere",
    "SphereKind",
    "PipelineStats",
    "RoundStats",
    "StageTimer",
    "FeatureEdge",
    "FeatureKind",
    "SampleKind",
    "SurfaceSample",
    "TetMesh",
    "ElementStats",
    "FractionalEuler",
    "RestrictedElements",
    "TopoReport",
    "TopoViolation",
    "ViolationKind",
]
