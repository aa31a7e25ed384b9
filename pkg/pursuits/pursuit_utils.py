import argparse
from cumulants import DataMatrix
import json
import math
import numpy as np
from numpy import ndarray
import os
import pandas as pd
from pandas import DataFrame
import pathlib
from pathlib import Path
from rich.console import Console
from rich.table import Table
import sys
from typing import Any
from typing import Optional
from typing import TextIO

SCHEMA_VERSION: int = 1
SEED_ENV_NAME: str = "MOMENT_PURSUIT_SEED"
DEFAULT_SEED: int = 42

EXIT_OK: int = 0
EXIT_VERIFY_FAILED: int = 1
EXIT_INPUT_ERROR: int = 2
EXIT_DEGENERATE: int = 3

console: Console = Console(stderr=True)

class InputDataError(ValueError):
    """Raised when command input (CSV or numeric arguments) cannot be used."""

def resolve_seed(seed: Optional[int]) -> int:
    """--seed if given, else MOMENT_PURSUIT_SEED, else 42."""
    if seed is not None:
        return seed
    env_seed: Optional[str] = os.environ.get(SEED_ENV_NAME)
    if env_seed is None:
        return DEFAULT_SEED
    try:
        return int(env_seed)
    except ValueError as e:
        raise InputDataError(f"{SEED_ENV_NAME} must be an integer. {SEED_ENV_NAME}={env_seed}") from e

def read_data_csv(data_path: Path | str, header: bool = False) -> DataMatrix:
    """Read an n x q data matrix from a comma-separated UTF-8 file.

    Args:
        data_path (Path | str): CSV path. One observation per row.
        header (bool): whether the first row is a header.

    Returns:
        data (DataMatrix): observations. q is the number of columns.
    """
    data_path = pathlib.Path(data_path)
    if not data_path.exists():
        raise InputDataError(f"data file does not exist. data_path={data_path}")
    try:
        df: DataFrame = pd.read_csv(
            data_path, header=0 if header else None, sep=",", encoding="utf-8",
            dtype=np.float64, decimal="."
        )
    except (ValueError, pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise InputDataError(f"data file is not a numeric CSV. data_path={data_path}: {e}") from e
    try:
        return DataMatrix(df.to_numpy())
    except ValueError as e:
        raise InputDataError(f"invalid data matrix. data_path={data_path}: {e}") from e

def parse_float_list(text: str) -> ndarray:
    """'1,2.5,9' -> array([1., 2.5, 9.])."""
    try:
        values: list[float] = [float(token) for token in text.split(",") if token.strip() != ""]
    except ValueError as e:
        raise InputDataError(f"expected comma-separated numbers. got={text}") from e
    if len(values) == 0 or not all(math.isfinite(value) for value in values):
        raise InputDataError(f"expected finite comma-separated numbers. got={text}")
    return np.array(values)

def parse_range(text: str) -> ndarray:
    """'A:B:STEP' -> A, A+STEP, ..., up to and including B."""
    tokens: list[str] = text.split(":")
    if len(tokens) != 3:
        raise InputDataError(f"range must be A:B:STEP. got={text}")
    start, stop, step = parse_float_list(",".join(tokens))
    if not (0 < step and start <= stop):
        raise InputDataError(f"range needs A <= B and STEP > 0. got={text}")
    count: int = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)

def add_output_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true", help="write a JSON document to standard output.")
    group.add_argument("--csv", action="store_true", help="write CSV to standard output.")

def emit_json(payload: dict[str, Any], stream: Optional[TextIO] = None) -> None:
    stream = sys.stdout if stream is None else stream
    stream.write(json.dumps(payload, indent=2))
    stream.write("\n")

def emit_csv(df: DataFrame, stream: Optional[TextIO] = None) -> None:
    stream = sys.stdout if stream is None else stream
    df.to_csv(stream, index=False, float_format="%.12g", lineterminator="\n")

def print_table(title: str, rows: list[tuple[str, Any]]) -> None:
    """Key-value summary on standard error."""
    table: Table = Table(title=title)
    table.add_column("item")
    table.add_column("value")
    for key, value in rows:
        table.add_row(key, str(value))
    console.print(table)

def print_error(message: str) -> None:
    console.print(f"[red]error:[/red] {message}")
