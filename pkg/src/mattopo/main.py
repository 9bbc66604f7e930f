"""Command line entry point: ``mattopo run`` and ``mattopo generate``."""

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional

from .config import apply_env_overrides, load_config, load_config_from_dict
from .errors import MatTopoError, StageError
from .exporter import export_all
from .mesh import write_tet_mesh
from .mesh.generators import SHAPES, generate
from .orchestrator import run_pipeline


logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_FIXPOINT = 2


def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stdout)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT, handlers=handlers, force=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mattopo",
        description="Topology-preserving medial axis transform of tetrahedral solids",
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=None,
        help="Set logging level",
    )
    parser.add_argument("--log-file", type=str, help="Also write the log to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Compute the medial mesh of a tet mesh")
    run.add_argument("--input", required=True, help="Path to a .mesh or .tet file")
    run.add_argument("--format", choices=["mesh", "tet"], help="Input format (default: from suffix)")
    run.add_argument("--features", dest="features_path", help="Optional .fea file with sharp edges and corners")
    run.add_argument("--config", type=str, help="Path to configuration file")
    run.add_argument("--init-spheres", type=int, dest="n_init", help="Number of initial spheres")
    run.add_argument("--init", choices=["fps", "random"], dest="init_strategy", help="Initial pin placement")
    run.add_argument("--delta-eps", type=float, help="Geometric error bound, percent of bbox diagonal")
    run.add_argument("--angle-deg", type=float, help="Sharp edge dihedral threshold in degrees")
    run.add_argument("--sample-density", type=float, help="Surface samples per unit area")
    run.add_argument("--seed", type=int, help="Random seed")
    run.add_argument("--max-rounds", type=int, help="Round limit")
    run.add_argument("--threads", type=int, help="Worker threads (MATTOPO_THREADS overrides)")
    run.add_argument("--out", dest="out_dir", help="Output directory")
    run.add_argument("--export-rpd", action="store_true", help="Write restricted cells as OBJ files")
    run.add_argument("--report", action="store_true", help="Write per-round report.jsonl and round stats")
    run.add_argument("--no-reconstruction", action="store_true", help="Skip reconstruction and Hausdorff metrics")
    run.add_argument("--no-topology", action="store_true", help="Disable topology fixes")
    run.add_argument("--no-features", action="store_true", help="Disable feature preservation")
    run.add_argument("--no-geometry", action="store_true", help="Disable geometry fixes")

    gen = sub.add_parser("generate", help="Write a fixture tet mesh")
    gen.add_argument("--shape", required=True, choices=sorted(SHAPES), help="Fixture solid")
    gen.add_argument("--out", required=True, help="Output .tet path")
    return parser


def _set(data: Dict[str, Any], section: Optional[str], key: str, value: Any) -> None:
    if value is None:
        return
    target = data if section is None else data.setdefault(section, {})
    target[key] = value


def config_from_args(args: argparse.Namespace):
    """Defaults, then config file, then flags, then environment."""
    data = load_config(args.config).to_dict()
    _set(data, "mesh", "input_path", args.input)
    _set(data, "mesh", "format", args.format)
    _set(data, "mesh", "features_path", args.features_path)
    _set(data, "mesh", "angle_threshold_deg", args.angle_deg)
    _set(data, "spheres", "n_init", args.n_init)
    _set(data, "spheres", "init_strategy", args.init_strategy)
    _set(data, "geometry", "delta_eps", args.delta_eps)
    _set(data, "geometry", "sample_density", args.sample_density)
    _set(data, None, "seed", args.seed)
    _set(data, None, "max_rounds", args.max_rounds)
    _set(data, "rpd", "threads", args.threads)
    _set(data, "output", "out_dir", args.out_dir)
    _set(data, None, "log_level", args.log_level)
    if args.export_rpd:
        _set(data, "output", "export_rpd", True)
    if args.report:
        _set(data, "output", "report", True)
    if args.no_reconstruction:
        _set(data, "output", "export_reconstruction", False)
    if args.no_topology:
        _set(data, "topology", "enabled", False)
    if args.no_features:
        _set(data, "features", "enabled", False)
    if args.no_geometry:
        _set(data, "geometry", "enabled", False)
    return load_config_from_dict(apply_env_overrides(data))


def command_run(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    logging.getLogger().setLevel(getattr(logging, config.log_level.upper()))
    logger.info(f"Running on {config.mesh.input_path} with seed {config.seed}")
    result = run_pipeline(config)
    export_all(result, config)
    if not result.fixpoint:
        logger.warning(f"Stopped at max_rounds={config.max_rounds} without a fixpoint")
    return result.exit_code


def command_generate(args: argparse.Namespace) -> int:
    mesh = generate(args.shape)
    write_tet_mesh(mesh, args.out)
    logger.info(f"Wrote '{args.shape}' to {args.out}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv`` and run a command; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level or os.getenv("MATTOPO_LOG_LEVEL", "INFO"), args.log_file)

    try:
        if args.command == "run":
            return command_run(args)
        return command_generate(args)
    except StageError as e:
        logger.error(f"Pipeline error in stage '{e.stage}': {e.cause}")
        return EXIT_ERROR
    except (MatTopoError, OSError, ValueError) as e:
        logger.error(f"Application error: {e}")
        return EXIT_ERROR


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
