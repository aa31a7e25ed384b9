from .tube_formula import alpha_beta
from .tube_formula import critical_radius_constants
from .tube_formula import CriticalRadiusInfo
from .tube_formula import curvature_polynomial
from .tube_formula import kappa_by_quadrature
from .tube_formula import psi_term
from .tube_formula import pvalue
from .tube_formula import PValue
from .tube_formula import tail_approx
from .tube_formula import tail_approx_q2
from .tube_formula import tail_envelope
from .tube_formula import tail_local_maxima
from .tube_formula import tail_peak
from .tube_formula import tail_quantile
from .tube_formula import TailApprox
from .tube_formula import tube_volume_fraction
from .tube_formula import weyl_coefficients
from .tube_formula import WeylCoefficients
