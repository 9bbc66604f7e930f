"""Pipeline configuration data models."""

from dataclasses import dataclass, field, fields, asdict
from enum import Enum
from typing import Dict, Optional, Any


class MeshFormat(Enum):
    """Supported tetrahedral mesh formats."""
    MESH = "mesh"
    TET = "tet"


class InitStrategy(Enum):
    """How the initial pin points are chosen on the surface."""
    FPS = "fps"
    RANDOM = "random"


class PinStrategy(Enum):
    """How topology fixes choose their pin point inside a violating component."""
    FARTHEST = "farthest"
    RANDOM = "random"


def _section_from_dict(cls, data: Optional[Dict[str, Any]]):
    """Build a section dataclass, ignoring unknown keys."""
    if not data:
        return cls()
    known = {f.name for f in fields(cls)}
    return cls(**{k: v for k, v in data.items() if k in known})


@dataclass
class MeshConfig:
    """Input mesh settings."""
    input_path: Optional[str] = None
    format: Optional[MeshFormat] = None
    features_path: Optional[str] = None
    angle_threshold_deg: float = 30.0
    normalize: bool = True

    def __post_init__(self):
        """Validate mesh configuration."""
        if isinstance(self.format, str):
            self.format = MeshFormat(self.format)
        if not 0.0 < self.angle_threshold_deg < 180.0:
            raise ValueError("Angle threshold must be in (0, 180) degrees")


@dataclass
class SphereConfig:
    """Sphere generation settings. Ratios are fractions of the bbox diagonal."""
    n_init: int = 50
    init_strategy: InitStrategy = InitStrategy.FPS
    shrink_init_ratio: float = 0.5
    shrink_eps_ratio: float = 1e-4
    shrink_max_iters: int = 50
    tan_eps_ratio: float = 1e-3
    dup_eps_ratio: float = 1e-3

    def __post_init__(self):
        """Validate sphere configuration."""
        if isinstance(self.init_strategy, str):
            self.init_strategy = InitStrategy(self.init_strategy)
        if self.n_init < 1:
            raise ValueError("n_init must be at least 1")
        if self.shrink_max_iters < 1:
            raise ValueError("Shrink max_iters must be at least 1")
        for name in ("shrink_init_ratio", "shrink_eps_ratio", "tan_eps_ratio", "dup_eps_ratio"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class RpdConfig:
    """Restricted power diagram settings."""
    clip_eps_ratio: float = 1e-9
    threads: int = 1
    validate_neighbors: bool = False
    validate_euler: bool = False
    max_perturbations: int = 3

    def __post_init__(self):
        """Validate RPD configuration."""
        if self.threads < 1:
            raise ValueError("Thread count must be at least 1")
        if self.clip_eps_ratio <= 0:
            raise ValueError("clip_eps_ratio must be positive")
        if self.max_perturbations < 0:
            raise ValueError("max_perturbations cannot be negative")


@dataclass
class TopologyConfig:
    """Topology check-and-fix settings."""
    enabled: bool = True
    pin_strategy: PinStrategy = PinStrategy.FARTHEST

    def __post_init__(self):
        """Validate topology configuration."""
        if isinstance(self.pin_strategy, str):
            self.pin_strategy = PinStrategy(self.pin_strategy)


@dataclass
class FeatureConfig:
    """External and internal feature preservation settings."""
    enabled: bool = True
    internal_enabled: bool = True
    sheet_angle_deg: float = 30.0
    segment_ratio: float = 0.02
    min_cluster_fraction: float = 0.05

    def __post_init__(self):
        """Validate feature configuration."""
        if not 0.0 < self.sheet_angle_deg < 180.0:
            raise ValueError("Sheet angle must be in (0, 180) degrees")
        if self.segment_ratio <= 0:
            raise ValueError("segment_ratio must be positive")
        if not 0.0 <= self.min_cluster_fraction < 1.0:
            raise ValueError("min_cluster_fraction must be in [0, 1)")


@dataclass
class GeometryConfig:
    """Geometric error bound settings."""
    enabled: bool = True
    delta_eps: float = 0.6
    sample_density: Optional[float] = None
    target_samples: int = 4000
    max_insert_per_round: int = 256

    def __post_init__(self):
        """Validate geometry configuration."""
        if self.delta_eps <= 0:
            raise ValueError("delta_eps must be positive")
        if self.sample_density is not None and self.sample_density <= 0:
            raise ValueError("sample_density must be positive")
        if self.target_samples < 1:
            raise ValueError("target_samples must be at least 1")
        if self.max_insert_per_round < 1:
            raise ValueError("max_insert_per_round must be at least 1")


@dataclass
class OutputConfig:
    """Export settings."""
    out_dir: str = "out"
    export_rpd: bool = False
    export_reconstruction: bool = True
    export_features: bool = True
    export_spheres: bool = True
    report: bool = False
    reconstruction_resolution: int = 256
    hausdorff_samples: int = 20000
    denormalize: bool = True

    def __post_init__(self):
        """Validate output configuration."""
        if self.reconstruction_resolution < 8:
            raise ValueError("Reconstruction resolution must be at least 8")
        if self.hausdorff_samples < 1:
            raise ValueError("hausdorff_samples must be at least 1")

    def disable_all(self) -> None:
        """Turn every optional export off (only .ma and stats remain)."""
        self.export_rpd = False
        self.export_reconstruction = False
        self.export_features = False
        self.export_spheres = False
        self.report = False


@dataclass
class PipelineConfig:
    """Complete pipeline configuration."""
    mesh: MeshConfig = field(default_factory=MeshConfig)
    spheres: SphereConfig = field(default_factory=SphereConfig)
    rpd: RpdConfig = field(default_factory=RpdConfig)
    topology: TopologyConfig = field(default_factory=TopologyConfig)
    features: FeatureConfig = field(default_factory=FeatureConfig)
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    seed: int = 0
    max_rounds: int = 200
    log_level: str = "INFO"

    def __post_init__(self):
        """Validate pipeline configuration."""
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")
        if self.log_level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR"):
            raise ValueError(f"Unknown log level: {self.log_level}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PipelineConfig":
        """Create PipelineConfig from dictionary."""
        return cls(
            mesh=_section_from_dict(MeshConfig, data.get("mesh")),
            spheres=_section_from_dict(SphereConfig, data.get("spheres")),
            rpd=_section_from_dict(RpdConfig, data.get("rpd")),
            topology=_section_from_dict(TopologyConfig, data.get("topology")),
            features=_section_from_dict(FeatureConfig, data.get("features")),
            geometry=_section_from_dict(GeometryConfig, data.get("geometry")),
            output=_section_from_dict(OutputConfig, data.get("output")),
            seed=int(data.get("seed", 0)),
            max_rounds=int(data.get("max_rounds", 200)),
            log_level=str(data.get("log_level", "INFO")),
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        def plain(value):
            if isinstance(value, Enum):
                return value.value
            if isinstance(value, dict):
                return {k: plain(v) for k, v in value.items()}
            return value

        return plain(asdict(self))
