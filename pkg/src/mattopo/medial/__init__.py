"""Medial mesh extraction, thinning, reconstruction and metrics."""

from .extraction import extract_dual
from .io import feature_curves, format_ma, read_ma, write_ma, write_obj, write_polylines_obj
from .metrics import boundary_surface, compute_metrics, hausdorff
from .reconstruction import reconstruct_envelope
from .thinning import thin_medial_mesh

__all__ = [
    "extract_dual",
    "feature_curves",
    "format_ma",
    "read_ma",
    "write_ma",
    "write_obj",
    "write_polylines_obj",
    "boundary_surface",
    "compute_metrics",
    "hausdorff",
    "reconstruct_envelope",
    "thin_medial_mesh",
]
