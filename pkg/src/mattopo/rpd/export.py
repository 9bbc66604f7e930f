"""Debug export of restricted cells."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from .engine import RpdState


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def rpd_summary(state: RpdState) -> Dict[str, Dict[str, Any]]:
    """Sphere id -> volume, cell count and facet count of its restricted cell."""
    summary = {}
    for sphere_id in state.sphere_ids():
        cells = state.cells_of(sphere_id)
        summary[str(sphere_id)] = {
            "volume": float(sum(c.volume() for c in cells)),
            "n_cells": len(cells),
            "n_facets": int(sum(len(c.facet_payload) for c in cells)),
        }
    return summary


def write_cell_obj(state: RpdState, sphere_id: int, path: PathLike, world: bool = True) -> None:
    """Boundary facets of every cell of one sphere, fan-triangulated."""
    lines = [f"# restricted cell of sphere {sphere_id}"]
    offset = 1
    for cell in state.cells_of(sphere_id):
        points = state.mesh.to_world(cell.points) if world else cell.points
        lines.extend(f"v {x:.9g} {y:.9g} {z:.9g}" for x, y, z in points)
        for plane in cell.facets():
            order = cell.facet_polygon(plane)
            for k in range(1, len(order) - 1):
                a, b, c = order[0], order[k], order[k + 1]
                lines.append(f"f {a + offset} {b + offset} {c + offset}")
        offset += len(points)
    Path(path).write_text("\n".join(lines) + "\n")


def export_rpd(state: RpdState, out_dir: PathLike, world: bool = True) -> Path:
    """One OBJ per sphere plus ``summary.json`` under ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for sphere_id in state.sphere_ids():
        write_cell_obj(state, sphere_id, out / f"sphere_{sphere_id}.obj", world=world)
    summary_path = out / "summary.json"
    summary_path.write_text(json.dumps(rpd_summary(state), indent=2, sort_keys=True))
    logger.info(f"Exported RPD of {len(state.sphere_ids())} spheres to {out}")
    return summary_path
