from dataclasses import dataclass
from functools import lru_cache
import math
import numpy as np
from scipy import integrate
from scipy import special

class Probability(float):
    """Probability class.

    A float restricted to [0, 1]. Behaves as a plain float everywhere else.
    """
    def __new__(cls, value: float) -> "Probability":
        value = float(value)
        if not (0.0 <= value <= 1.0):
            raise ValueError(f"probability must be in [0,1]. value={value}")
        return super().__new__(cls, value)

@dataclass(frozen=True, order=True)
class HalfInt:
    """HalfInt class.

    Exact representation of an integer or half-integer k as twice_k = 2k.
    Ordering follows the ordering of k itself.
    """
    twice_k: int

    def __post_init__(self) -> None:
        if not isinstance(self.twice_k, (int, np.integer)):
            raise ValueError(f"twice_k must be an integer. twice_k={self.twice_k}")
        object.__setattr__(self, "twice_k", int(self.twice_k))

    @classmethod
    def from_value(cls, k: float) -> "HalfInt":
        """Create HalfInt from k. k must be an integer or a half-integer."""
        twice_k: float = 2.0 * float(k)
        if not twice_k == round(twice_k):
            raise ValueError(f"k must be an integer or a half-integer. k={k}")
        return cls(int(round(twice_k)))

    @property
    def value(self) -> float:
        return self.twice_k / 2

    @property
    def is_integer(self) -> bool:
        return self.twice_k % 2 == 0

    def __str__(self) -> str:
        return str(self.twice_k // 2) if self.is_integer else f"{self.twice_k}/2"

@dataclass(frozen=True)
class EllipticBoundary:
    """Complete elliptic integrals at parameter m=1/4.

    E_quarter = E(1/4), K_quarter = K(1/4) in the parameter convention, i.e.
    the integrands are sqrt(1 - m sin^2) and 1/sqrt(1 - m sin^2).
    """
    E_quarter: float
    K_quarter: float

def sphere_surface(m: int) -> float:
    """Surface area of the unit sphere in R^m, Omega_m = 2 pi^{m/2} / Gamma(m/2).

    Args:
        m (int): ambient dimension. m >= 1.

    Returns:
        omega (float): (m-1) dimensional volume of S^{m-1}.
    """
    if m < 1 or int(m) != m:
        raise ValueError(f"m must be a positive integer. m={m}")
    log_omega: float = math.log(2.0) + 0.5 * m * math.log(math.pi) - special.gammaln(0.5 * m)
    return math.exp(log_omega)

def chisq_upper(nu: int, c: float) -> Probability:
    """Upper probability of the chi-square distribution with nu degrees of freedom.

    Evaluated as the regularized upper incomplete gamma Q(nu/2, c/2).

    Args:
        nu (int): degrees of freedom. nu >= 1.
        c (float): threshold. c >= 0.

    Returns:
        prob (Probability): P(chi^2_nu >= c).
    """
    if nu < 1:
        raise ValueError(f"nu must be positive. nu={nu}")
    if not c >= 0:
        raise ValueError(f"c must be nonnegative. c={c}")
    return Probability(special.gammaincc(0.5 * nu, 0.5 * c))

def beta_upper(a: float, b: float, c: float) -> Probability:
    """Upper probability of the beta distribution with parameters (a, b).

    B_{a,b}(c) = P(Beta(a,b) >= c) = I_{1-c}(b, a). The reflected form keeps
    full relative accuracy when c is close to 1.

    Args:
        a (float): first shape parameter. a > 0.
        b (float): second shape parameter. b > 0.
        c (float): threshold in [0,1].

    Returns:
        prob (Probability): P(Beta(a,b) >= c).
    """
    if not (a > 0 and b > 0):
        raise ValueError(f"a and b must be positive. a={a} b={b}")
    if not (0.0 <= c <= 1.0):
        raise ValueError(f"c must be in [0,1]. c={c}")
    return Probability(special.betainc(b, a, 1.0 - c))

def elliptic_KE(m: float) -> tuple[float, float]:
    """Complete elliptic integrals of the first and second kind.

    Args:
        m (float): parameter in [0,1).

    Returns:
        K (float): K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt.
        E (float): E(m) = int_0^{pi/2} (1 - m sin^2 t)^{1/2} dt.
    """
    if not (0.0 <= m < 1.0):
        raise ValueError(f"m must be in [0,1). m={m}")
    return float(special.ellipk(m)), float(special.ellipe(m))

@lru_cache(maxsize=None)
def elliptic_boundary() -> EllipticBoundary:
    K_quarter, E_quarter = elliptic_KE(0.25)
    return EllipticBoundary(E_quarter=E_quarter, K_quarter=K_quarter)

def v_theta(theta: float | np.ndarray) -> float | np.ndarray:
    """v(theta) = 3 cos^2 theta + 4 sin^2 theta = 3 + sin^2 theta."""
    return 3.0 + np.sin(theta) ** 2

def elliptic_moment_quad(k: float) -> float:
    """E_k = int_{-pi/2}^{pi/2} v(theta)^k dtheta by adaptive quadrature.

    The integrand is even in theta, so twice the integral over [0, pi/2] is taken.
    """
    value, _ = integrate.quad(
        lambda theta: v_theta(theta) ** k, 0.0, 0.5 * math.pi,
        epsabs=0.0, epsrel=1e-13, limit=200
    )
    return 2.0 * value

def _boundary_moments() -> dict[int, float]:
    """E_k at k = -1, -1/2, 0, 1/2 keyed by twice_k."""
    boundary: EllipticBoundary = elliptic_boundary()
    return {
        -2: math.pi / (2.0 * math.sqrt(3.0)),
        -1: boundary.K_quarter,
        0: math.pi,
        1: 4.0 * boundary.E_quarter,
    }

@lru_cache(maxsize=None)
def _elliptic_moment_twice(twice_k: int) -> float:
    boundary_moments: dict[int, float] = _boundary_moments()
    if twice_k in boundary_moments:
        return boundary_moments[twice_k]
    is_integer: bool = twice_k % 2 == 0
    if 0 < twice_k:
        # ascend from (E_{-1}, E_0) or (E_{-1/2}, E_{1/2})
        current_twice: int = 0 if is_integer else 1
        e_prev: float = boundary_moments[current_twice - 2]
        e_curr: float = boundary_moments[current_twice]
        while current_twice < twice_k:
            current_twice += 2
            k: float = current_twice / 2
            e_next: float = 7.0 * (2.0 * k - 1.0) / (2.0 * k) * e_curr \
                - 12.0 * (k - 1.0) / k * e_prev
            e_prev, e_curr = e_curr, e_next
        return e_curr
    # descend from (E_0, E_{-1}) or (E_{1/2}, E_{-1/2})
    current_twice: int = -2 if is_integer else -1
    e_prev: float = boundary_moments[current_twice + 2]
    e_curr: float = boundary_moments[current_twice]
    while twice_k < current_twice:
        current_twice -= 2
        k: float = current_twice / 2
        e_next: float = 7.0 * (2.0 * k + 3.0) / (24.0 * (k + 1.0)) * e_curr \
            - (k + 2.0) / (12.0 * (k + 1.0)) * e_prev
        e_prev, e_curr = e_curr, e_next
    return e_curr

def elliptic_moment(k: HalfInt | float) -> float:
    """E_k for an integer or half-integer k by two-term recurrences.

    For k >= 1 the forward recurrence
        E_k = 7(2k-1)/(2k) E_{k-1} - 12(k-1)/k E_{k-2}
    is applied upward from the boundary pair, for k <= -3/2 the backward recurrence
        E_k = 7(2k+3)/(24(k+1)) E_{k+1} - (k+2)/(12(k+1)) E_{k+2}
    is applied downward. Boundary values are
        E_{1/2} = 4E(1/4), E_0 = pi, E_{-1/2} = K(1/4), E_{-1} = pi/(2 sqrt 3).
    Each direction follows the dominant solution of the recurrence.

    Args:
        k (HalfInt | float): index. Floats are converted by HalfInt.from_value.

    Returns:
        moment (float): E_k.
    """
    if not isinstance(k, HalfInt):
        k = HalfInt.from_value(k)
    return _elliptic_moment_twice(k.twice_k)

def recurrence_residual(k: HalfInt | float) -> float:
    """Relative residual of 2k E_k - 7(2k-1) E_{k-1} + 24(k-1) E_{k-2}."""
    if not isinstance(k, HalfInt):
        k = HalfInt.from_value(k)
    kv: float = k.value
    e_k: float = elliptic_moment(k)
    e_k1: float = elliptic_moment(HalfInt(k.twice_k - 2))
    e_k2: float = elliptic_moment(HalfInt(k.twice_k - 4))
    residual: float = 2.0 * kv * e_k - 7.0 * (2.0 * kv - 1.0) * e_k1 + 24.0 * (kv - 1.0) * e_k2
    scale: float = abs(2.0 * kv * e_k) + abs(7.0 * (2.0 * kv - 1.0) * e_k1) \
        + abs(24.0 * (kv - 1.0) * e_k2)
    return abs(residual) / scale
