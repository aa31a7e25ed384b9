import argparse
import pathlib
from pathlib import Path
curr_path: Path = pathlib.Path(__file__).resolve().parents[0]
parent_path: Path = curr_path.parents[0]
import sys
sys.path.append(str(parent_path))
from pursuits.pursuit_utils import EXIT_INPUT_ERROR
from pursuits.pursuit_utils import EXIT_OK
from pursuits.pursuit_utils import EXIT_VERIFY_FAILED
from pursuits.pursuit_utils import InputDataError
from pursuits.pursuit_utils import SCHEMA_VERSION
from pursuits.pursuit_utils import console
from pursuits.pursuit_utils import emit_json
from pursuits.pursuit_utils import print_error
from pursuits.pursuit_utils import resolve_seed
from pursuits.verify_battery import SUITES
from pursuits.verify_battery import VerifyBattery
from pursuits.verify_battery import VerifyReport
from rich.table import Table

def get_config():
    parser = argparse.ArgumentParser(
        description="run the verification battery of the moment index and its tube approximation."
    )
    parser.add_argument("--suite", type=str, default="all", choices=[*SUITES, "all"])
    parser.add_argument("--mc_reps", "--mc-reps", dest="mc_reps", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=None,
                        help="root seed. Default to $MOMENT_PURSUIT_SEED or 42.")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--show_process", action="store_true")
    return parser

def print_report(report: VerifyReport) -> None:
    table: Table = Table(title=f"verify {report.suite}")
    table.add_column("check")
    table.add_column("expected")
    table.add_column("got")
    table.add_column("pass")
    for record in report.records:
        table.add_row(
            record.name, str(record.expected), str(record.got),
            "[green]ok[/green]" if record.passed else "[red]FAIL[/red]"
        )
    console.print(table)

def main(args) -> int:
    parser = get_config()
    all_args = parser.parse_known_args(args)[0]
    try:
        if all_args.mc_reps < 100:
            raise InputDataError(f"mc_reps must be at least 100. mc_reps={all_args.mc_reps}")
        seed: int = resolve_seed(all_args.seed)
        battery: VerifyBattery = VerifyBattery(
            mc_reps=all_args.mc_reps, seed=seed,
            workers=all_args.workers, show_process=all_args.show_process
        )
    except (InputDataError, ValueError) as e:
        print_error(str(e))
        return EXIT_INPUT_ERROR
    report: VerifyReport = battery.run(all_args.suite)
    print_report(report)
    emit_json({"schema_version": SCHEMA_VERSION, "seed": seed, **report.to_dict()})
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
