"""Pipeline statistics and stage timing."""

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional


STAGES = ("s_topo", "s_extf", "s_intf", "s_geo")


@dataclass
class RoundStats:
    """What one round of the insert-and-repair loop did."""
    index: int
    n_spheres: int = 0
    inserted: Dict[str, int] = field(default_factory=dict)
    violations: int = 0
    geometry_max: Optional[float] = None
    geometry_mean: Optional[float] = None
    geometry_violations: int = 0
    perturbations: int = 0

    @property
    def total_inserted(self) -> int:
        return sum(self.inserted.values())

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "round": self.index,
            "n_spheres": self.n_spheres,
            "inserted": dict(self.inserted),
            "violations": self.violations,
            "geometry_max": self.geometry_max,
            "geometry_mean": self.geometry_mean,
            "geometry_violations": self.geometry_violations,
            "perturbations": self.perturbations,
        }


@dataclass
class PipelineStats:
    """Counts and per-stage wall-clock seconds of a pipeline run."""
    n_tets: int = 0
    n_spheres: int = 0
    n_rpd_rounds: int = 0
    timings: Dict[str, float] = field(default_factory=lambda: {name: 0.0 for name in STAGES})
    total: float = 0.0
    rounds: List[RoundStats] = field(default_factory=list)
    fixpoint: bool = False

    def add_time(self, stage: str, seconds: float) -> None:
        self.timings[stage] = self.timings.get(stage, 0.0) + seconds

    def to_dict(self, include_rounds: bool = False, include_timings: bool = True) -> Dict[str, Any]:
        """The stats JSON: counts and stage timings, rounds only on request."""
        data: Dict[str, Any] = {
            "n_tets": self.n_tets,
            "n_spheres": self.n_spheres,
            "n_rpd_rounds": self.n_rpd_rounds,
        }
        for name in STAGES:
            data[name] = round(self.timings.get(name, 0.0), 6) if include_timings else 0.0
        data["total"] = round(self.total, 6) if include_timings else 0.0
        if include_rounds:
            data["rounds"] = [r.to_dict() for r in self.rounds]
        return data


class StageTimer:
    """Accumulates wall-clock time per stage into a PipelineStats."""

    def __init__(self, stats: PipelineStats):
        self.stats = stats
        self._start = time.perf_counter()

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.stats.add_time(name, time.perf_counter() - start)

    def finish(self) -> float:
        self.stats.total = time.perf_counter() - self._start
        return self.stats.total
