import argparse
import pathlib
from pathlib import Path
curr_path: Path = pathlib.Path(__file__).resolve().parents[0]
parent_path: Path = curr_path.parents[0]
import sys
sys.path.append(str(parent_path))
import numpy as np
from numpy import ndarray
import pandas as pd
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
from tubes import PValue
from tubes import TailApprox
from tubes import pvalue
from tubes import tail_approx
from tubes import tail_quantile
from typing import Any
import warnings

def get_config():
    parser = argparse.ArgumentParser(
        description="tube approximation of the tail of the max of the limiting index field."
    )
    parser.add_argument("--q", type=int, required=True)
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--c2", type=str, default=None,
                       help="comma-separated thresholds c^2.")
    group.add_argument("--range", type=str, default=None,
                       help="thresholds A:B:STEP, B included.")
    group.add_argument("--alpha", type=str, default=None,
                       help="comma-separated levels. Emit the critical c^2 of each level.")
    add_output_arguments(parser)
    return parser

def tail_table(q: int, thresholds: ndarray) -> DataFrame:
    """Rows (c2, tail, p_value, clamped, term_e0, term_e2, ...)."""
    rows: list[dict[str, Any]] = []
    for c_squared in thresholds:
        approx: TailApprox = tail_approx(q, float(c_squared))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            p: PValue = pvalue(q, float(c_squared))
        row: dict[str, Any] = {
            "c2": approx.c_squared, "tail": approx.value,
            "p_value": float(p.probability), "clamped": p.clamped,
        }
        row.update({f"term_e{e}": term for e, term in approx.terms.items()})
        rows.append(row)
    return pd.DataFrame(rows)

def quantile_table(q: int, alphas: ndarray) -> DataFrame:
    """Rows (alpha, c2) with tail_approx(q, c2) = alpha."""
    return pd.DataFrame(
        {"alpha": alphas, "c2": [tail_quantile(q, float(alpha)) for alpha in alphas]}
    )

def main(args) -> int:
    parser = get_config()
    all_args = parser.parse_known_args(args)[0]
    try:
        q: int = all_args.q
        if q < 2:
            raise InputDataError(f"q must be at least 2. q={q}")
        if all_args.alpha is not None:
            df: DataFrame = quantile_table(q, parse_float_list(all_args.alpha))
        else:
            thresholds: ndarray = parse_float_list(all_args.c2) if all_args.c2 is not None \
                else parse_range(all_args.range)
            if np.any(thresholds < 0):
                raise InputDataError("thresholds must be nonnegative.")
            df: DataFrame = tail_table(q, thresholds)
    except (InputDataError, ValueError) as e:
        print_error(str(e))
        return EXIT_INPUT_ERROR
    if all_args.json:
        emit_json({"schema_version": SCHEMA_VERSION, "q": q, "rows": df.to_dict(orient="records")})
    else:
        emit_csv(df)
    return EXIT_OK

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
