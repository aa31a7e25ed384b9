import pathlib
from pathlib import Path
curr_path: Path = pathlib.Path(__file__).resolve().parents[0]
parent_path: Path = curr_path.parents[0]
import sys
sys.path.append(str(parent_path))
from pursuits import pursue
from pursuits import simulate
from pursuits import tail_table
from pursuits import tube_volume
from pursuits import verify
from pursuits.pursuit_utils import EXIT_INPUT_ERROR
from pursuits.pursuit_utils import print_error
from typing import Callable
from typing import Optional

COMMANDS: dict[str, Callable[[list[str]], int]] = {
    "pursue": pursue.main,
    "tail-table": tail_table.main,
    "simulate": simulate.main,
    "verify": verify.main,
    "tube-volume": tube_volume.main,
}

def main(args: Optional[list[str]] = None) -> int:
    """momentpursuit COMMAND [FLAGS]. Flags are passed on to the command."""
    args = sys.argv[1:] if args is None else args
    if len(args) == 0 or args[0] not in COMMANDS:
        print_error(
            f"usage: momentpursuit {{{'|'.join(COMMANDS)}}} [flags]. got={args[0] if args else None}"
        )
        return EXIT_INPUT_ERROR
    return COMMANDS[args[0]](args[1:])

if __name__ == "__main__":
    sys.exit(main())
