from .sphere_optimizer import field_objective
from .sphere_optimizer import grid_search_q2
from .sphere_optimizer import half_circle_directions
from .sphere_optimizer import index_objective
from .sphere_optimizer import max_index_value
from .sphere_optimizer import maximize
from .sphere_optimizer import Objective
from .sphere_optimizer import OptimizerConfig
from .sphere_optimizer import OptResult
from .sphere_optimizer import SphereOptimizer
