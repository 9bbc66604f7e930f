"""Writes the artifacts of a finished pipeline run."""

import json
import logging
from pathlib import Path
from typing import Dict, Optional

from .errors import StageError
from .medial import feature_curves, write_ma, write_obj, write_polylines_obj
from .models.config import PipelineConfig
from .orchestrator import PipelineResult
from .rpd import export_rpd
from .spheres import write_sph


logger = logging.getLogger(__name__)


def output_stem(result: PipelineResult, config: PipelineConfig) -> str:
    if config.mesh.input_path:
        return Path(config.mesh.input_path).stem
    return result.mesh.name


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=False) + "\n")


def export_all(result: PipelineResult, config: PipelineConfig, out_dir: Optional[str] = None) -> Dict[str, Path]:
    """Write every enabled artifact; returns name -> path of what was written.

    The ``.ma`` file and ``stats.json`` are always written. Coordinates are
    mapped back to the input frame unless ``output.denormalize`` is off.
    """
    output = config.output
    out = Path(out_dir or output.out_dir)
    stem = output_stem(result, config)
    mesh = result.mesh
    to_world = mesh.to_world if output.denormalize else None
    scale = mesh.scale if output.denormalize else 1.0
    written: Dict[str, Path] = {}

    try:
        out.mkdir(parents=True, exist_ok=True)

        written["ma"] = out / f"{stem}.ma"
        write_ma(result.medial, written["ma"], to_world=to_world, scale=scale)

        written["stats"] = out / "stats.json"
        _write_json(written["stats"], result.stats.to_dict(include_rounds=output.report))

        if output.export_reconstruction and result.reconstruction is not None:
            written["reconstruction"] = out / f"{stem}_recon.obj"
            write_obj(result.reconstruction, written["reconstruction"], to_world=to_world)
            written["metrics"] = out / "metrics.json"
            _write_json(written["metrics"], result.metrics.to_dict())

        if output.export_features:
            external, internal = feature_curves(result.medial)
            written["features_external"] = out / f"{stem}_features_external.obj"
            write_polylines_obj(external, written["features_external"], to_world=to_world)
            written["features_internal"] = out / f"{stem}_features_internal.obj"
            write_polylines_obj(internal, written["features_internal"], to_world=to_world)

        if output.export_spheres:
            written["spheres"] = out / f"{stem}.sph"
            if output.denormalize:
                write_sph(result.registry.active(), written["spheres"], scale=mesh.scale, offset=mesh.offset)
            else:
                write_sph(result.registry.active(), written["spheres"])

        if output.export_rpd:
            written["rpd"] = export_rpd(result.state, out / "rpd", world=output.denormalize)

        if output.report:
            written["report"] = out / "report.jsonl"
            lines = [json.dumps(entry, sort_keys=True) for entry in result.reports]
            written["report"].write_text("\n".join(lines) + ("\n" if lines else ""))
    except (OSError, ValueError) as exc:
        raise StageError("export", exc) from exc

    logger.info(f"Exported {len(written)} artifacts to {out}")
    return written
