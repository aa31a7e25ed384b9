from .special_functions import beta_upper
from .special_functions import chisq_upper
from .special_functions import elliptic_boundary
from .special_functions import elliptic_KE
from .special_functions import elliptic_moment
from .special_functions import elliptic_moment_quad
from .special_functions import EllipticBoundary
from .special_functions import HalfInt
from .special_functions import Probability
from .special_functions import recurrence_residual
from .special_functions import sphere_surface
from .special_functions import v_theta
