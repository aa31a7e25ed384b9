from .limit_field import check_theta
from .limit_field import covariance_closed_form
from .limit_field import embed
from .limit_field import eval_Z
from .limit_field import eval_Z_angle
from .limit_field import field_index_and_gradient
from .limit_field import field_index_on_grid
from .limit_field import FieldCoefficients
from .limit_field import FieldValue
from .limit_field import HALF_PI
from .limit_field import manifold_inner
from .limit_field import ManifoldPoint
from .limit_field import rotate_coefficients
from .limit_field import sample_coefficients
from .limit_field import tensor_power
