from .moment_index import cumulant_coefficients
from .moment_index import CumulantSet
from .moment_index import DataMatrix
from .moment_index import DegenerateSampleError
from .moment_index import Estimator
from .moment_index import index_from_cumulants
from .moment_index import moment_index
from .moment_index import moment_index_gradient
from .moment_index import MomentTensors
from .moment_index import project
from .moment_index import ProjectedSample
from .moment_index import sample_cumulants
from .moment_index import tangent_projection
from .moment_index import UnitDirection
