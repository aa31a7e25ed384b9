from .monte_carlo import CltMarginals
from .monte_carlo import empirical_tail
from .monte_carlo import MaxSample
from .monte_carlo import McConfig
from .monte_carlo import MonteCarloSimulator
from .monte_carlo import rep_generator
from .monte_carlo import TailCurve
from .monte_carlo import TubeVolumeEstimate
