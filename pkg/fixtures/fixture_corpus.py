from dataclasses import dataclass
import json
import math
import numpy as np
from numpy import ndarray
import pandas as pd
import pathlib
from pathlib import Path
from typing import Any
from typing import Optional

MANIFEST_PATH: Path = pathlib.Path(__file__).resolve().parents[0] / "fixtures.json"
GOLDEN_RATIO_CONJUGATE: float = 0.5 * (math.sqrt(5.0) - 1.0)
SILVER_RATIO_CONJUGATE: float = math.sqrt(2.0) - 1.0
FIXTURE_FLOAT_FORMAT: str = "%.10g"

_COMPARATORS: dict[str, Any] = {
    "gt": lambda value, bound: bound < value,
    "ge": lambda value, bound: bound <= value,
    "lt": lambda value, bound: value < bound,
    "le": lambda value, bound: value <= bound,
}

@dataclass(frozen=True)
class Fixture:
    """Fixture class.

    A small CSV data matrix with the ranges its pursuit report must fall in.
    expected maps a report field to bounds such as {"gt": 0.05, "le": 1.0}.
    """
    name: str
    path: str
    kind: str
    n: int
    q: int
    description: str
    seed: int
    index: int
    expected: dict[str, dict[str, float]]

    def violations(self, report: dict[str, Any]) -> list[str]:
        """Names of the expected ranges the report falls outside of."""
        values: dict[str, Any] = dict(report)
        if "h_star" in report:
            values["h_star_1_abs"] = abs(report["h_star"][0])
        failed: list[str] = []
        for key, bounds in self.expected.items():
            for comparator, bound in bounds.items():
                if not _COMPARATORS[comparator](values[key], bound):
                    failed.append(f"{key} {comparator} {bound} (got {values[key]})")
        return failed

def load_manifest(manifest_path: Path = MANIFEST_PATH, seed: Optional[int] = None) -> list[Fixture]:
    """Fixtures listed in the manifest. seed overrides the recorded seed."""
    manifest: dict[str, Any] = json.load(fp=open(str(manifest_path), mode="r"))
    if manifest["schema_version"] != 1:
        raise ValueError(f"unsupported fixture manifest. schema_version={manifest['schema_version']}")
    seed = manifest["seed"] if seed is None else seed
    return [
        Fixture(
            name=entry["name"], path=entry["path"], kind=entry["kind"],
            n=entry["n"], q=entry["q"], description=entry["description"],
            seed=seed, index=index, expected=entry["expected"]
        ) for index, entry in enumerate(manifest["fixtures"])
    ]

def fixture_phase(seed: int, index: int) -> float:
    """Rotation of the fixture as a fraction of a full turn, in [0, 1)."""
    turn: float = (2 * seed + index + 1) * SILVER_RATIO_CONJUGATE
    return turn - math.floor(turn)

def _quasi_normal_q2(n: int, phase: float) -> list[tuple[float, float]]:
    # scalar math only; the committed CSVs are compared byte for byte
    rows: list[tuple[float, float]] = []
    for i in range(1, n + 1):
        u: float = (i - 0.5) / n
        radius: float = math.sqrt(-2.0 * math.log(1.0 - u))
        turn: float = i * GOLDEN_RATIO_CONJUGATE
        angle: float = 2.0 * math.pi * (turn - math.floor(turn) + phase)
        rows.append((radius * math.cos(angle), radius * math.sin(angle)))
    return rows

def generate_fixture(fixture: Fixture) -> ndarray:
    """n x q data matrix of the fixture.

    Both kinds start from a quasi-random bivariate standard normal sample: radial
    chi quantiles paired with golden-ratio angles and turned by fixture_phase.
    The planted kind replaces the first column by its cube.
    """
    if fixture.q != 2:
        raise ValueError(f"fixtures are available for q=2. q={fixture.q}")
    rows: list[tuple[float, float]] = _quasi_normal_q2(fixture.n, fixture_phase(fixture.seed, fixture.index))
    if fixture.kind == "null":
        return np.array(rows)
    elif fixture.kind == "planted":
        return np.array([(x * x * x, y) for x, y in rows])
    else:
        raise ValueError(f"unknown fixture kind. kind={fixture.kind}")

def write_fixture(fixture: Fixture, folder: Path) -> Path:
    fixture_path: Path = pathlib.Path(folder) / fixture.path
    fixture_path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(generate_fixture(fixture)).to_csv(
        fixture_path, header=False, index=False,
        float_format=FIXTURE_FLOAT_FORMAT, lineterminator="\n", encoding="utf-8"
    )
    return fixture_path

def regenerate_fixtures(
    seed: Optional[int] = None,
    folder: Optional[Path] = None,
    manifest_path: Path = MANIFEST_PATH
) -> list[Path]:
    """Write every fixture CSV of the manifest under folder (default: next to the manifest)."""
    folder = pathlib.Path(manifest_path).parent if folder is None else pathlib.Path(folder)
    return [write_fixture(fixture, folder) for fixture in load_manifest(manifest_path, seed)]
