from dataclasses import dataclass
from functools import lru_cache
import math
import numpy as np
from numpy import ndarray
from scipy import integrate
from scipy import special
from scipy.optimize import brentq
from scipy.optimize import minimize_scalar
from specfuns import HalfInt
from specfuns import Probability
from specfuns import beta_upper
from specfuns import chisq_upper
from specfuns import elliptic_boundary
from specfuns import elliptic_moment
from specfuns import sphere_surface
from specfuns import v_theta
from types import MappingProxyType
from typing import Mapping
import warnings

@dataclass(frozen=True)
class WeylCoefficients:
    """WeylCoefficients class.

    Weyl curvature invariants kappa_e of the index manifold
        M = {(cos theta h^{(x)3}, sin theta h^{(x)4})} in S^{p-1}, p = q^3 + q^4,
    for even e with 0 <= e <= q. The manifold dimension d equals q.
    """
    q: int
    d: int
    kappas: Mapping[int, float]

@dataclass(frozen=True)
class TailApprox:
    """Tube approximation of P(max_h I(h) >= c^2).

    value is an asymptotic approximation in c and may exceed 1 or be negative
    for small thresholds. terms[e] = kappa_e psi_e(c).
    """
    c_squared: float
    value: float
    terms: Mapping[int, float]

@dataclass(frozen=True)
class PValue:
    probability: Probability
    raw: float
    clamped: bool

@dataclass(frozen=True)
class CriticalRadiusInfo:
    theta_c: float
    rho_c: float

def _weyl_coefficient(q: int, e: int) -> float:
    prefactor: float = (-3.0) ** (e // 2) * math.factorial(q - 1) / math.factorial(q - e)
    total: float = 0.0
    for j in range(e // 2 + 1):
        weight: float = (q - e - 2 * j) / (math.factorial(e // 2 - j) * math.factorial(j))
        if weight == 0:
            continue
        # E index (q-1-e)/2 - j, kept exact as twice the index
        total += weight * (-2.0) ** j * elliptic_moment(HalfInt(q - 1 - e - 2 * j))
    return sphere_surface(q) * prefactor * total

@lru_cache(maxsize=None)
def weyl_coefficients(q: int) -> WeylCoefficients:
    """kappa_e for every even e in [0, q].

    kappa_e = Omega_q (-3)^{e/2} (q-1)!/(q-e)!
        sum_{j=0}^{e/2} (q-e-2j)/((e/2-j)! j!) (-2)^j E_{(q-1-e)/2-j},
    with E_k the elliptic moments of v(theta) = 3 + sin^2 theta.

    Args:
        q (int): dimension of the observations. q >= 2.

    Returns:
        coefficients (WeylCoefficients): cached and immutable.
    """
    if q < 2:
        raise ValueError(f"q must be at least 2. q={q}")
    kappas: dict[int, float] = {e: _weyl_coefficient(q, e) for e in range(0, q + 1, 2)}
    return WeylCoefficients(q=q, d=q, kappas=MappingProxyType(kappas))

def psi_term(d: int, e: int, c_squared: float) -> float:
    """psi_e(c) = Gamma((d+1-e)/2) / (2^{1+e/2} pi^{(d+1)/2}) * Gbar_{d+1-e}(c^2).

    Gbar_nu is the upper chi-square probability with nu degrees of freedom.
    """
    nu: int = d + 1 - e
    if nu <= 0:
        raise ValueError(f"degrees of freedom d+1-e must be positive. d={d} e={e}")
    if e < 0 or e % 2 != 0 or d < e:
        raise ValueError(f"e must be even with 0 <= e <= d. d={d} e={e}")
    log_coefficient: float = special.gammaln(0.5 * nu) \
        - (1.0 + 0.5 * e) * math.log(2.0) - 0.5 * (d + 1) * math.log(math.pi)
    return math.exp(log_coefficient) * float(chisq_upper(nu, c_squared))

def tail_approx(q: int, c_squared: float) -> TailApprox:
    """P(max_h I(h) >= c^2) ~ sum_{e even, 0..q} kappa_e psi_e(c) with d = q.

    Args:
        q (int): dimension. q >= 2.
        c_squared (float): threshold c^2 >= 0.

    Returns:
        approx (TailApprox): raw value with the contribution of each e.
    """
    if not c_squared >= 0:
        raise ValueError(f"c_squared must be nonnegative. c_squared={c_squared}")
    coefficients: WeylCoefficients = weyl_coefficients(q)
    terms: dict[int, float] = {
        e: kappa * psi_term(coefficients.d, e, c_squared)
        for e, kappa in coefficients.kappas.items()
    }
    return TailApprox(
        c_squared=float(c_squared), value=math.fsum(terms.values()),
        terms=MappingProxyType(terms)
    )

def tail_approx_q2(c_squared: float) -> float:
    """w sqrt(2/pi) c exp(-c^2/2) with w = 2 E(1/4)."""
    if not c_squared >= 0:
        raise ValueError(f"c_squared must be nonnegative. c_squared={c_squared}")
    w: float = 2.0 * elliptic_boundary().E_quarter
    c: float = math.sqrt(c_squared)
    return w * math.sqrt(2.0 / math.pi) * c * math.exp(-0.5 * c_squared)

@lru_cache(maxsize=None)
def critical_radius_constants() -> CriticalRadiusInfo:
    """theta_c = atan(3/4) and rho_c = 1 + tan^2 theta_c = 25/16. Both are independent of q."""
    return CriticalRadiusInfo(theta_c=math.atan(0.75), rho_c=25.0 / 16.0)

def tube_volume_fraction(q: int, theta: float) -> float:
    """Vol(tube of geodesic radius theta around M) / Omega_p.

    Vol/Omega_p = sum_e kappa_e J_e(theta) with
        J_e = Gamma((d+1-e)/2)/(2^{1+e/2} pi^{(d+1)/2}) Bbar_{(d+1-e)/2,(p-d-1+e)/2}(cos^2 theta)
    and Bbar the upper beta probability. Valid for 0 <= theta <= theta_c.
    """
    theta_c: float = critical_radius_constants().theta_c
    if not (0.0 <= theta <= theta_c):
        raise ValueError(f"theta must be in [0, theta_c={theta_c}]. theta={theta}")
    coefficients: WeylCoefficients = weyl_coefficients(q)
    d: int = coefficients.d
    p: int = q ** 3 + q ** 4
    cos2: float = math.cos(theta) ** 2
    terms: list[float] = []
    for e, kappa in coefficients.kappas.items():
        a: float = 0.5 * (d + 1 - e)
        b: float = 0.5 * (p - d - 1 + e)
        log_coefficient: float = special.gammaln(a) \
            - (1.0 + 0.5 * e) * math.log(2.0) - 0.5 * (d + 1) * math.log(math.pi)
        terms.append(kappa * math.exp(log_coefficient) * float(beta_upper(a, b, cos2)))
    return math.fsum(terms)

TAIL_GRID_MAX: float = 60.0

@lru_cache(maxsize=None)
def tail_local_maxima(q: int) -> tuple[tuple[float, float], ...]:
    """(c^2, value) of every interior local maximum of the tail approximation on
    [0, TAIL_GRID_MAX], in increasing c^2.

    For q >= 4 the approximation oscillates below c^2 of a few units and has
    more than one local maximum.
    """
    grid: ndarray = np.linspace(0.0, TAIL_GRID_MAX, 6001)
    values: ndarray = np.array([tail_approx(q, c2).value for c2 in grid])
    maxima: list[tuple[float, float]] = []
    for i in range(1, len(grid) - 1):
        if values[i] < values[i - 1] or values[i] < values[i + 1]:
            continue
        result = minimize_scalar(
            lambda c2: -tail_approx(q, c2).value, bounds=(grid[i - 1], grid[i + 1]),
            method="bounded", options={"xatol": 1e-10}
        )
        if values[i] < -result.fun:
            maxima.append((float(result.x), float(-result.fun)))
        else:
            maxima.append((float(grid[i]), float(values[i])))
    return tuple(maxima)

@lru_cache(maxsize=None)
def tail_peak(q: int) -> tuple[float, float]:
    """(c^2, value) at the global maximum of the tail approximation over c^2 >= 0."""
    candidates: list[tuple[float, float]] = [(0.0, float(tail_approx(q, 0.0).value))]
    candidates.extend(tail_local_maxima(q))
    return max(candidates, key=lambda candidate: candidate[1])

def tail_envelope(q: int, c_squared: float) -> float:
    """Smallest nonincreasing majorant of the tail approximation:
    sup of the approximation over c'^2 >= c_squared.

    It equals the approximation wherever that already decreases to the right.
    """
    if not c_squared >= 0:
        raise ValueError(f"c_squared must be nonnegative. c_squared={c_squared}")
    envelope: float = float(tail_approx(q, c_squared).value)
    for peak_c_squared, peak_value in tail_local_maxima(q):
        if c_squared <= peak_c_squared:
            envelope = max(envelope, peak_value)
    return envelope

def pvalue(q: int, observed_max: float) -> PValue:
    """Tube-method p-value of the observed max_h I_n(h).

    The tail approximation is replaced by its nonincreasing envelope
    (tail_envelope) and clamped to [0,1]. A p-value that differs from the raw
    approximation means the threshold lies outside the asymptotic regime and is
    flagged with a warning.
    """
    if not observed_max >= 0:
        raise ValueError(f"observed_max must be nonnegative. observed_max={observed_max}")
    raw: float = float(tail_approx(q, observed_max).value)
    clamped_value: float = min(max(tail_envelope(q, observed_max), 0.0), 1.0)
    clamped: bool = bool(clamped_value != raw)
    if clamped:
        warnings.warn(
            f"tail approximation {raw:.6g} clamped to [0,1]. observed_max={observed_max} is outside the asymptotic regime."
        )
    return PValue(probability=Probability(clamped_value), raw=raw, clamped=clamped)

def tail_quantile(q: int, alpha: float, c_squared_max: float = 400.0) -> float:
    """Critical value c^2 at which the tail approximation equals alpha.

    The approximation decreases beyond its last local maximum, so the root is bracketed
    on a grid by the last grid point where the approximation is >= alpha and
    refined by Brent's method.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0,1). alpha={alpha}")
    grid: ndarray = np.linspace(0.0, c_squared_max, 4001)
    values: ndarray = np.array([tail_approx(q, c2).value for c2 in grid])
    above: ndarray = np.flatnonzero(alpha <= values)
    if len(above) == 0:
        raise ValueError(f"tail approximation never reaches alpha. q={q} alpha={alpha}")
    i: int = int(above[-1])
    if i == len(grid) - 1:
        raise ValueError(
            f"alpha is too small for c_squared_max. alpha={alpha} c_squared_max={c_squared_max}"
        )
    return float(
        brentq(lambda c2: tail_approx(q, c2).value - alpha, grid[i], grid[i + 1], xtol=1e-12)
    )

def alpha_beta(theta: float | ndarray) -> tuple[float | ndarray, float | ndarray]:
    """Curvature functions alpha = -6/v + 12/v^2 and beta = -12/v^2 of M."""
    v = v_theta(theta)
    return -6.0 / v + 12.0 / v ** 2, -12.0 / v ** 2

def _pairings(n: int, pairs: int) -> float:
    """Number of ways to form `pairs` unordered pairs from n distinct objects."""
    if n < 2 * pairs:
        return 0.0
    return math.factorial(n) / (math.factorial(n - 2 * pairs) * 2 ** pairs * math.factorial(pairs))

def curvature_polynomial(q: int, e: int, theta: float | ndarray) -> float | ndarray:
    """H_e(theta) assembled from the curvature tensor H^{kl}_{ij}.

    Index sets that avoid the theta direction contribute alpha^{e/2} per pairing
    of the q-1 sphere directions. Sets that pair theta with one sphere direction
    contribute beta alpha^{e/2-1} per choice of that direction and pairing of
    the rest.
    """
    if e < 0 or e % 2 != 0 or q < e:
        raise ValueError(f"e must be even with 0 <= e <= q. q={q} e={e}")
    alpha, beta = alpha_beta(theta)
    half: int = e // 2
    value = _pairings(q - 1, half) * alpha ** half
    if 0 < half:
        value = value + (q - 1) * _pairings(q - 2, half - 1) * beta * alpha ** (half - 1)
    return value

def kappa_by_quadrature(q: int, e: int) -> float:
    """kappa_e = Omega_q int_{-pi/2}^{pi/2} H_e(theta) v(theta)^{(q-1)/2} dtheta."""
    value, _ = integrate.quad(
        lambda theta: curvature_polynomial(q, e, theta) * v_theta(theta) ** (0.5 * (q - 1)),
        0.0, 0.5 * math.pi, epsabs=0.0, epsrel=1e-13, limit=200
    )
    return 2.0 * sphere_surface(q) * value
