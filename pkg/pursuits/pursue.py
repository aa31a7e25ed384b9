import argparse
from dataclasses import dataclass
from dataclasses import replace
import pathlib
from pathlib import Path
curr_path: Path = pathlib.Path(__file__).resolve().parents[0]
parent_path: Path = curr_path.parents[0]
import sys
sys.path.append(str(parent_path))
from cumulants import DataMatrix
from cumulants import DegenerateSampleError
import pandas as pd
from pursuits.pursuit_utils import EXIT_DEGENERATE
from pursuits.pursuit_utils import EXIT_INPUT_ERROR
from pursuits.pursuit_utils import EXIT_OK
from pursuits.pursuit_utils import InputDataError
from pursuits.pursuit_utils import SCHEMA_VERSION
from pursuits.pursuit_utils import add_output_arguments
from pursuits.pursuit_utils import emit_csv
from pursuits.pursuit_utils import emit_json
from pursuits.pursuit_utils import print_error
from pursuits.pursuit_utils import print_table
from pursuits.pursuit_utils import read_data_csv
from pursuits.pursuit_utils import resolve_seed
from sphere_opts import OptimizerConfig
from sphere_opts import OptResult
from sphere_opts import max_index_value
from tubes import PValue
from tubes import pvalue
from typing import Any
from typing import Optional

@dataclass(frozen=True)
class PursuitReport:
    """PursuitReport class.

    Most non-normal direction of the data and the tube-method p-value of its index.
    """
    h_star: list[float]
    max_index: float
    p_value: float
    clamped: bool
    raw_tail: float
    q: int
    n: int
    seed: int
    estimator: str
    method: str
    starts_used: int
    converged: bool
    best_gradient_norm: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "h_star": self.h_star,
            "max_index": self.max_index,
            "p_value": self.p_value,
            "clamped": self.clamped,
            "raw_tail": self.raw_tail,
            "q": self.q,
            "n": self.n,
            "seed": self.seed,
            "estimator": self.estimator,
            "optimizer": {
                "method": self.method,
                "starts_used": self.starts_used,
                "converged": self.converged,
                "best_gradient_norm": self.best_gradient_norm,
            },
        }

    def to_row(self) -> dict[str, Any]:
        row: dict[str, Any] = {f"h_{i+1}": value for i, value in enumerate(self.h_star)}
        row.update({
            "max_index": self.max_index, "p_value": self.p_value, "clamped": self.clamped,
            "raw_tail": self.raw_tail, "q": self.q, "n": self.n, "seed": self.seed,
            "estimator": self.estimator, "method": self.method,
            "starts_used": self.starts_used, "converged": self.converged,
            "best_gradient_norm": self.best_gradient_norm,
        })
        return row

def get_config():
    parser = argparse.ArgumentParser(
        description="find the direction maximizing the moment index and its p-value."
    )
    parser.add_argument("--data", type=str, required=True,
                        help="CSV file with one observation per row.")
    parser.add_argument("--header", action="store_true",
                        help="whether the first row of the CSV is a header.")
    parser.add_argument("--starts", type=int, default=None,
                        help="number of random optimizer starts for q >= 3.")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed of the optimizer starts. Default to $MOMENT_PURSUIT_SEED or 42.")
    parser.add_argument("--estimator", type=str, default="moment", choices=["moment", "kstat"])
    parser.add_argument("--optimizer_config_json_name", type=str, default=None,
                        help="JSON file with OptimizerConfig fields.")
    parser.add_argument("--quiet", action="store_true",
                        help="whether to suppress the summary table on standard error.")
    add_output_arguments(parser)
    return parser

def load_optimizer_config(
    config_json_name: Optional[str],
    seed: int,
    starts: Optional[int] = None
) -> OptimizerConfig:
    config: OptimizerConfig = OptimizerConfig() if config_json_name is None \
        else OptimizerConfig.from_json(config_json_name)
    config = replace(config, seed=seed)
    if starts is not None:
        config = replace(config, starts=starts)
    return config

def pursue(data: DataMatrix, config: OptimizerConfig, estimator: str = "moment") -> PursuitReport:
    result: OptResult = max_index_value(data, config, estimator)
    p: PValue = pvalue(data.q, max(result.value, 0.0))
    return PursuitReport(
        h_star=[float(value) for value in result.h_star.components],
        max_index=result.value,
        p_value=float(p.probability),
        clamped=p.clamped,
        raw_tail=p.raw,
        q=data.q,
        n=data.n,
        seed=config.seed,
        estimator=estimator,
        method="grid+brent" if data.q == 2 else "multistart",
        starts_used=result.starts_used,
        converged=result.converged,
        best_gradient_norm=result.best_gradient_norm,
    )

def main(args) -> int:
    parser = get_config()
    all_args = parser.parse_known_args(args)[0]
    try:
        seed: int = resolve_seed(all_args.seed)
        config: OptimizerConfig = load_optimizer_config(
            all_args.optimizer_config_json_name, seed, all_args.starts
        )
        data: DataMatrix = read_data_csv(all_args.data, all_args.header)
        report: PursuitReport = pursue(data, config, all_args.estimator)
    except DegenerateSampleError as e:
        print_error(str(e))
        return EXIT_DEGENERATE
    except (InputDataError, ValueError, TypeError, OSError) as e:
        print_error(str(e))
        return EXIT_INPUT_ERROR
    if not all_args.quiet:
        print_table(
            "pursuit",
            [
                ("h*", ", ".join(f"{value:.6f}" for value in report.h_star)),
                ("max index", f"{report.max_index:.6f}"),
                ("p-value", f"{report.p_value:.6g}"),
                ("clamped", report.clamped),
                ("n x q", f"{report.n} x {report.q}"),
                ("converged", report.converged),
            ]
        )
    if all_args.csv:
        emit_csv(pd.DataFrame([report.to_row()]))
    else:
        emit_json(report.to_dict())
    return EXIT_OK

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
