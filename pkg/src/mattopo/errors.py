"""Exception types raised by the pipeline."""

from typing import Optional


class MatTopoError(Exception):
    """Base class for all pipeline errors."""


class MeshLoadError(MatTopoError, ValueError):
    """Input mesh could not be parsed or violates the solid invariants."""


class SphereGenerationError(MatTopoError, ValueError):
    """A medial sphere could not be generated from the given input."""


class RankDeficientError(MatTopoError, ValueError):
    """Tangency system has fewer than three independent plane normals."""


class ClipDegeneracyError(MatTopoError, RuntimeError):
    """Clipping produced an invalid boundary cycle even after perturbation."""


class TopologyFixError(MatTopoError, RuntimeError):
    """A topology violation has no surface point to pin a new sphere on."""


class StageError(MatTopoError):
    """Wraps an upstream error with the pipeline stage it occurred in."""

    def __init__(self, stage: str, cause: Exception, round_index: Optional[int] = None):
        self.stage = stage
        self.cause = cause
        self.round_index = round_index
        where = f"stage '{stage}'"
        if round_index is not None:
            where += f" (round {round_index})"
        super().__init__(f"{where} failed: {cause}")
