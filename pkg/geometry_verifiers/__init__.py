from .critical_radius_verifier import critical_points_check
from .critical_radius_verifier import CriticalScanResult
from .critical_radius_verifier import fg_reduced
from .critical_radius_verifier import h_func
from .critical_radius_verifier import local_ratio
from .critical_radius_verifier import local_ratio_profile
from .critical_radius_verifier import random_pair
from .critical_radius_verifier import reduction_check
from .critical_radius_verifier import sup_fg_scan
from .critical_radius_verifier import tangent_basis
from .metric_verifier import curvature_check_q2
from .metric_verifier import CurvatureData
from .metric_verifier import manifold_volume_numeric
from .metric_verifier import metric_numeric
from .metric_verifier import MetricBlock
from .metric_verifier import sphere_chart
from .metric_verifier import weyl_invariant_numeric
from .metric_verifier import v_theta
