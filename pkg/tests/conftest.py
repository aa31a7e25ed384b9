import pathlib
from pathlib import Path
import sys

root_path: Path = pathlib.Path(__file__).resolve().parents[1]
if str(root_path) not in sys.path:
    sys.path.insert(0, str(root_path))
