import argparse
from dataclasses import replace
import pathlib
from pathlib import Path
curr_path: Path = pathlib.Path(__file__).resolve().parents[0]
parent_path: Path = curr_path.parents[0]
import sys
sys.path.append(str(parent_path))
from mcs import MaxSample
from mcs import McConfig
from mcs import MonteCarloSimulator
from mcs import TailCurve
from mcs import empirical_tail
from numpy import ndarray
from pandas import DataFrame
from pursuits.pursuit_utils import EXIT_INPUT_ERROR
from pursuits.pursuit_utils import EXIT_OK
from pursuits.pursuit_utils import InputDataError
from pursuits.pursuit_utils import SCHEMA_VERSION
from pursuits.pursuit_utils import add_output_arguments
from pursuits.pursuit_utils import emit_csv
from pursuits.pursuit_utils import emit_json
from pursuits.pursuit_utils import parse_float_list
from pursuits.pursuit_utils import parse_range
from pursuits.pursuit_utils import print_error
from pursuits.pursuit_utils import print_table
from pursuits.pursuit_utils import resolve_seed
from sphere_opts import OptimizerConfig
from tubes import tail_approx

FULL_REPS: int = 10000

def get_config():
    parser = argparse.ArgumentParser(
        description="Monte Carlo tail curve of the max of the (limiting or finite-sample) moment index."
    )
    parser.add_argument("--mode", type=str, required=True, choices=["limit", "finite"])
    parser.add_argument("--q", type=int, default=2)
    parser.add_argument("--n", type=int, default=None,
                        help="sample size. Required when mode=finite.")
    parser.add_argument("--reps", type=int, default=2000)
    parser.add_argument("--full_reps", action="store_true",
                        help=f"use {FULL_REPS} replications.")
    parser.add_argument("--seed", type=int, default=None,
                        help="root seed. Default to $MOMENT_PURSUIT_SEED or 42.")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--thresholds", type=str, default=None,
                        help="comma-separated thresholds c^2.")
    parser.add_argument("--range", type=str, default="2:20:0.5",
                        help="thresholds A:B:STEP, used when --thresholds is not given.")
    parser.add_argument("--approx", action="store_true",
                        help="append the tube approximation column.")
    parser.add_argument("--estimator", type=str, default="moment", choices=["moment", "kstat"])
    parser.add_argument("--optimizer_config_json_name", type=str, default=None)
    parser.add_argument("--show_process", action="store_true")
    add_output_arguments(parser)
    return parser

def simulate_curve(
    mode: str,
    q: int,
    n: int | None,
    thresholds: ndarray,
    config: McConfig,
    estimator: str = "moment",
    approx: bool = False,
    show_process: bool = False
) -> tuple[DataFrame, MaxSample]:
    simulator: MonteCarloSimulator = MonteCarloSimulator(config, show_process=show_process)
    if mode == "limit":
        sample: MaxSample = simulator.simulate_limit_max(q)
    else:
        if n is None:
            raise InputDataError("--n is required when mode=finite.")
        sample: MaxSample = simulator.simulate_finite_max(q, n, estimator)
    curve: TailCurve = empirical_tail(sample.values, thresholds)
    df: DataFrame = curve.to_frame()
    if approx:
        df["tube"] = [tail_approx(q, float(c_squared)).value for c_squared in curve.thresholds]
    return df, sample

def main(args) -> int:
    parser = get_config()
    all_args = parser.parse_known_args(args)[0]
    try:
        reps: int = FULL_REPS if all_args.full_reps else all_args.reps
        optimizer: OptimizerConfig = OptimizerConfig() if all_args.optimizer_config_json_name is None \
            else OptimizerConfig.from_json(all_args.optimizer_config_json_name)
        seed: int = resolve_seed(all_args.seed)
        config: McConfig = McConfig(
            reps=reps, seed=seed, workers=all_args.workers,
            optimizer=replace(optimizer, seed=seed)
        )
        thresholds: ndarray = parse_float_list(all_args.thresholds) \
            if all_args.thresholds is not None else parse_range(all_args.range)
        df, sample = simulate_curve(
            all_args.mode, all_args.q, all_args.n, thresholds, config,
            all_args.estimator, all_args.approx, all_args.show_process
        )
    except (InputDataError, ValueError, TypeError, OSError) as e:
        print_error(str(e))
        return EXIT_INPUT_ERROR
    if all_args.show_process:
        print_table(
            f"simulate ({all_args.mode})",
            [
                ("q", all_args.q), ("n", all_args.n), ("reps", reps), ("seed", seed),
                ("non-converged", sample.num_non_converged), ("resampled", sample.resampled),
            ]
        )
    if all_args.json:
        emit_json({
            "schema_version": SCHEMA_VERSION, "mode": all_args.mode, "q": all_args.q,
            "n": all_args.n, "reps": reps, "seed": seed,
            "rows": df.to_dict(orient="records"),
        })
    else:
        emit_csv(df)
    return EXIT_OK

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
