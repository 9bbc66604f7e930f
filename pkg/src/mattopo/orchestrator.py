"""Pipeline driver: initial spheres, then insert-and-repair rounds until nothing changes."""

import logging
from concurrent.futures import Executor, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, TypeVar

import numpy as np

from .errors import MatTopoError, SphereGenerationError, StageError
from .features import concave_edge_spheres, preserve_external_features, preserve_internal_features
from .geometry import geometry_check_and_insert
from .medial import compute_metrics, extract_dual, reconstruct_envelope, thin_medial_mesh
from .mesh import (
    apply_feature_annotations,
    detect_features,
    farthest_point_pins,
    load_tet_mesh,
    random_pins,
    read_feature_file,
    sample_density_for,
    sample_surface,
)
from .models.config import InitStrategy, PipelineConfig
from .models.features import SheetStatus
from .models.medial_mesh import MedialMesh, MetricsReport, TriangleMesh
from .models.sphere import MedialSphere
from .models.stats import PipelineStats, RoundStats, StageTimer
from .models.tet_mesh import SurfaceSample, TetMesh
from .models.topology import TopoReport
from .rpd import RpdState, compute_rpd_partial, new_rpd_state
from .spheres import ShrinkParams, SphereRegistry, sphere_shrink
from .topo import PinChoice, check_and_fix_topology


logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass
class PipelineResult:
    """Everything a finished run produced."""
    mesh: TetMesh
    medial: MedialMesh
    metrics: MetricsReport
    stats: PipelineStats
    fixpoint: bool
    registry: SphereRegistry
    state: RpdState
    reconstruction: Optional[TriangleMesh] = None
    reports: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 0 if self.fixpoint else 2


class MatPipeline:
    """Runs the medial axis pipeline for one configuration.

    A mesh may be handed in directly; otherwise it is read from
    ``config.mesh.input_path``.

    Each round updates the diagram, then runs topology, external features,
    internal features and geometry in that order. The order is strict: a
    stage is skipped when an earlier stage of the same round inserted
    spheres, and runs in the next round on the refreshed diagram instead. A
    fixpoint is a round in which every enabled stage ran and none inserted.
    """

    def __init__(self, config: PipelineConfig, mesh: Optional[TetMesh] = None):
        self.config = config
        self.mesh = mesh
        self.rng = np.random.default_rng(config.seed)
        self.stats = PipelineStats()
        self.timer = StageTimer(self.stats)
        self.registry = SphereRegistry()
        self.samples: List[SurfaceSample] = []
        self.state: Optional[RpdState] = None
        self.sheet_statuses: Dict = {}
        self.reports: List[Dict[str, Any]] = []
        self._params = ShrinkParams.from_config(config.spheres)
        self._pin_choice = PinChoice(config.topology.pin_strategy, np.random.default_rng(config.seed + 1))

    def _run_stage(self, stage: str, fn: Callable[[], T], round_index: Optional[int] = None) -> T:
        try:
            return fn()
        except StageError:
            raise
        except (MatTopoError, ValueError, OSError) as exc:
            raise StageError(stage, exc, round_index) from exc

    def load(self) -> TetMesh:
        """Read the input mesh and flag its sharp edges and corners."""
        mesh_config = self.config.mesh
        if self.mesh is None:
            if not mesh_config.input_path:
                raise StageError("load", ValueError("No input mesh given"))
            self.mesh = self._run_stage(
                "load", lambda: load_tet_mesh(mesh_config.input_path, mesh_config.format, mesh_config.normalize)
            )

        def annotate() -> TetMesh:
            if mesh_config.features_path:
                edges, corners = read_feature_file(mesh_config.features_path, self.mesh.n_vertices)
                return apply_feature_annotations(self.mesh, edges, corners, mesh_config.angle_threshold_deg)
            return detect_features(self.mesh, mesh_config.angle_threshold_deg)

        self.mesh = self._run_stage("features", annotate)
        self.stats.n_tets = self.mesh.n_tets
        self.registry.dup_eps = self.config.spheres.dup_eps_ratio * self.mesh.bbox_diag
        logger.info(
            f"Mesh '{self.mesh.name}': {self.mesh.n_tets} tets, {len(self.mesh.feature_edges)} feature edges, "
            f"{len(self.mesh.corners)} corners"
        )
        return self.mesh

    def initialize(self) -> List[MedialSphere]:
        """Surface samples, initial pins and their shrink spheres."""
        def init() -> List[MedialSphere]:
            geometry = self.config.geometry
            density = sample_density_for(self.mesh, geometry.sample_density, geometry.target_samples)
            self.samples = sample_surface(self.mesh, density, seed=self.config.seed)
            n_init = self.config.spheres.n_init
            if self.config.spheres.init_strategy is InitStrategy.FPS:
                pins = farthest_point_pins(self.mesh, self.samples, n_init, self.rng)
            else:
                pins = random_pins(self.mesh, self.samples, n_init, self.rng)

            spheres = []
            for pin in pins:
                try:
                    spheres.append(sphere_shrink(self.mesh, pin, self._params))
                except SphereGenerationError as exc:
                    logger.warning(f"Initial pin at {pin.position.tolist()} skipped: {exc}")
            if self.config.features.enabled:
                spheres.extend(concave_edge_spheres(self.mesh, self.config.features, self._params))
            added = self.registry.add_all(spheres)
            if not added:
                raise SphereGenerationError("No initial sphere could be generated")
            return added

        added = self._run_stage("init", init)
        logger.info(f"Initialized {len(added)} spheres from {len(self.samples)} surface samples")
        return added

    def _update_rpd(self, executor: Optional[Executor], round_index: int) -> RpdState:
        if self.state is None:
            self.state = new_rpd_state(self.mesh, self.config.rpd)
        new_ids = self.registry.take_new()
        return self._run_stage(
            "rpd",
            lambda: compute_rpd_partial(self.state, self.registry.active(), new_ids, executor, self.config.rpd),
            round_index,
        )

    def _insert(self, spheres: List[MedialSphere]) -> int:
        return len(self.registry.add_all(spheres))

    def run_round(self, round_index: int, executor: Optional[Executor]) -> RoundStats:
        """One pass of RPD update, topology, features and geometry.

        A stage runs only when the stages before it inserted nothing, so every
        stage sees a diagram that matches the current sphere set.
        """
        config = self.config
        perturbations_before = self.state.perturbations if self.state is not None else 0
        state = self._update_rpd(executor, round_index)
        record = RoundStats(index=round_index, perturbations=state.perturbations - perturbations_before)
        diag = self.mesh.bbox_diag

        if config.topology.enabled:
            report = TopoReport(round_index=round_index)
            with self.timer.stage("s_topo"):
                fixes = self._run_stage(
                    "topology",
                    lambda: check_and_fix_topology(
                        state, self.mesh, self._params, self.registry.dup_eps, self._pin_choice, report,
                    ),
                    round_index,
                )
                record.inserted["topology"] = self._insert(fixes)
            record.violations = len(report.violations)
            if config.output.report:
                self.reports.append(report.to_dict())

        if config.features.enabled and not record.total_inserted:
            with self.timer.stage("s_extf"):
                fixes = self._run_stage(
                    "external_features",
                    lambda: preserve_external_features(state.spheres.values(), self.mesh, config.features),
                    round_index,
                )
                record.inserted["external_features"] = self._insert(fixes)
            if config.features.internal_enabled and not record.total_inserted:
                with self.timer.stage("s_intf"):
                    fixes = self._run_stage(
                        "internal_features",
                        lambda: preserve_internal_features(
                            state, self.mesh, config.features, self.rng, self.sheet_statuses, self._params,
                            config.spheres.tan_eps_ratio * diag, executor=executor,
                        ),
                        round_index,
                    )
                    record.inserted["internal_features"] = self._insert(fixes)

        if config.geometry.enabled and not record.total_inserted:
            with self.timer.stage("s_geo"):
                def geometry() -> int:
                    medial = thin_medial_mesh(extract_dual(state))
                    fixes, geo = geometry_check_and_insert(
                        self.mesh, medial, self.samples, config.geometry.delta_eps, self._params,
                        config.geometry.max_insert_per_round,
                    )
                    record.geometry_max = geo.max_distance
                    record.geometry_mean = geo.mean_distance
                    record.geometry_violations = geo.n_violations
                    return self._insert(fixes)

                record.inserted["geometry"] = self._run_stage("geometry", geometry, round_index)

        record.n_spheres = len(self.registry)
        if config.output.report:
            self.reports.append({"round": round_index, "stats": record.to_dict()})
        logger.info(
            f"Round {round_index}: {record.n_spheres} spheres, inserted {record.inserted}, "
            f"{record.violations} topology violations"
        )
        return record

    def finish(self, fixpoint: bool) -> PipelineResult:
        """Extract, thin, reconstruct and measure the final medial mesh."""
        medial = self._run_stage("extract", lambda: thin_medial_mesh(extract_dual(self.state)))
        output = self.config.output
        reconstruction = None
        if output.export_reconstruction and medial.vertices:
            reconstruction = self._run_stage(
                "extract", lambda: reconstruct_envelope(medial, output.reconstruction_resolution)
            )
        self.stats.n_spheres = len(self.registry)
        self.stats.n_rpd_rounds = self.state.n_rounds
        self.stats.fixpoint = fixpoint
        self.timer.finish()
        metrics = self._run_stage(
            "extract",
            lambda: compute_metrics(
                self.mesh, medial, reconstruction, output.hausdorff_samples, self.config.seed,
                timings={**self.stats.timings, "total": self.stats.total},
            ),
        )
        return PipelineResult(
            mesh=self.mesh, medial=medial, metrics=metrics, stats=self.stats, fixpoint=fixpoint,
            registry=self.registry, state=self.state, reconstruction=reconstruction, reports=self.reports,
        )

    def run(self) -> PipelineResult:
        """Run to a fixpoint or ``max_rounds``."""
        self.load()
        self.initialize()
        threads = self.config.rpd.threads
        fixpoint = False
        executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
        try:
            for round_index in range(1, self.config.max_rounds + 1):
                record = self.run_round(round_index, executor)
                self.stats.rounds.append(record)
                if not record.total_inserted:
                    fixpoint = True
                    break
            if not fixpoint:
                # bring the diagram up to date with the last insertions
                self._update_rpd(executor, self.config.max_rounds + 1)
        finally:
            if executor is not None:
                executor.shutdown(wait=True)

        if fixpoint:
            logger.info(f"Fixpoint after {len(self.stats.rounds)} rounds with {len(self.registry)} spheres")
        else:
            last = self.stats.rounds[-1] if self.stats.rounds else RoundStats(index=0)
            logger.warning(
                f"No fixpoint after {self.config.max_rounds} rounds: {last.violations} topology violations, "
                f"{last.geometry_violations} geometry violations, last round inserted {last.inserted}"
            )
        return self.finish(fixpoint)


def run_pipeline(config: PipelineConfig, mesh: Optional[TetMesh] = None) -> PipelineResult:
    """Run the whole pipeline for ``config``."""
    return MatPipeline(config, mesh).run()
