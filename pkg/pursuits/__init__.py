from .pursuit_utils import InputDataError
from .pursuit_utils import read_data_csv
from .pursuit_utils import resolve_seed
from .pursue import PursuitReport
from .verify_battery import CheckRecord
from .verify_battery import VerifyBattery
from .verify_battery import VerifyReport
