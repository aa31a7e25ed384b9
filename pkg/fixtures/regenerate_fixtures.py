import argparse
import pathlib
from pathlib import Path
curr_path: Path = pathlib.Path(__file__).resolve().parents[0]
parent_path: Path = curr_path.parents[0]
import sys
sys.path.append(str(parent_path))
from fixtures.fixture_corpus import MANIFEST_PATH
from fixtures.fixture_corpus import regenerate_fixtures
from rich.console import Console

console: Console = Console(stderr=True)

def get_config():
    parser = argparse.ArgumentParser(description="write the fixture CSVs listed in fixtures.json.")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the seed recorded in the manifest.")
    parser.add_argument("--folder", type=str, default=None,
                        help="output folder. Default to the fixtures folder.")
    parser.add_argument("--manifest_path", type=str, default=str(MANIFEST_PATH))
    return parser

def main(args) -> int:
    parser = get_config()
    all_args = parser.parse_known_args(args)[0]
    fixture_paths: list[Path] = regenerate_fixtures(
        all_args.seed, all_args.folder, pathlib.Path(all_args.manifest_path)
    )
    for fixture_path in fixture_paths:
        console.print(f"wrote {fixture_path}")
    return 0

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
