import argparse
from dataclasses import asdict
import pathlib
from pathlib import Path
curr_path: Path = pathlib.Path(__file__).resolve().parents[0]
parent_path: Path = curr_path.parents[0]
import sys
sys.path.append(str(parent_path))
from mcs import McConfig
from mcs import MonteCarloSimulator
from mcs import TubeVolumeEstimate
import pandas as pd
from pursuits.pursuit_utils import EXIT_INPUT_ERROR
from pursuits.pursuit_utils import EXIT_OK
from pursuits.pursuit_utils import InputDataError
from pursuits.pursuit_utils import SCHEMA_VERSION
from pursuits.pursuit_utils import add_output_arguments
from pursuits.pursuit_utils import emit_csv
from pursuits.pursuit_utils import emit_json
from pursuits.pursuit_utils import print_error
from pursuits.pursuit_utils import print_table
from pursuits.pursuit_utils import resolve_seed
from tubes import critical_radius_constants

def get_config():
    parser = argparse.ArgumentParser(
        description="volume fraction of the tube around the index manifold: formula and Monte Carlo."
    )
    parser.add_argument("--q", type=int, default=2)
    parser.add_argument("--theta", type=float, required=True,
                        help="tube radius in (0, atan(3/4)].")
    parser.add_argument("--mc_reps", "--mc-reps", dest="mc_reps", type=int, default=20000,
                        help="number of uniform points on the sphere.")
    parser.add_argument("--seed", type=int, default=None,
                        help="root seed. Default to $MOMENT_PURSUIT_SEED or 42.")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--show_process", action="store_true")
    add_output_arguments(parser)
    return parser

def main(args) -> int:
    parser = get_config()
    all_args = parser.parse_known_args(args)[0]
    theta_c: float = critical_radius_constants().theta_c
    try:
        if not (0.0 < all_args.theta <= theta_c):
            raise InputDataError(
                f"theta must be in (0, theta_c={theta_c:.7f}]. The formula is invalid beyond the critical radius. theta={all_args.theta}"
            )
        seed: int = resolve_seed(all_args.seed)
        config: McConfig = McConfig(reps=all_args.mc_reps, seed=seed, workers=all_args.workers)
        simulator: MonteCarloSimulator = MonteCarloSimulator(config, show_process=all_args.show_process)
        estimate: TubeVolumeEstimate = simulator.tube_volume_mc(all_args.q, all_args.theta)
    except (InputDataError, ValueError) as e:
        print_error(str(e))
        return EXIT_INPUT_ERROR
    print_table(
        "tube volume",
        [
            ("formula", f"{estimate.formula:.6e}"), ("mc estimate", f"{estimate.fraction:.6e}"),
            ("se", f"{estimate.se:.3e}"), ("z-score", f"{estimate.z_score:.3f}"),
            ("flagged", estimate.flagged),
        ]
    )
    payload = {"schema_version": SCHEMA_VERSION, "seed": seed, **asdict(estimate)}
    if all_args.csv:
        emit_csv(pd.DataFrame([payload]))
    else:
        emit_json(payload)
    return EXIT_OK

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
