from dataclasses import dataclass
from fields import tensor_power
import math
import numpy as np
from numpy import ndarray
from scipy import integrate
from specfuns import elliptic_moment_quad
from specfuns import sphere_surface
from specfuns import v_theta
from tubes import alpha_beta
from tubes import curvature_polynomial
from typing import Callable

@dataclass(frozen=True)
class MetricBlock:
    """MetricBlock class.

    Induced metric of M at one chart point in the coordinates (t^1..t^{q-1}, theta).

    Attributes:
        chart_point (ndarray): (t^1..t^{q-1}, theta).
        theta (float): theta coordinate.
        v (float): v(theta) = 3 + sin^2 theta.
        gbar (ndarray): (q-1)x(q-1) metric of S^{q-1} in the chart.
        full (ndarray): qxq Gram matrix of the numerical tangent vectors.
    """
    chart_point: ndarray
    theta: float
    v: float
    gbar: ndarray
    full: ndarray

    def block_deviation(self) -> float:
        """Max deviation of full from blockdiag(v gbar, 1)."""
        expected: ndarray = np.zeros_like(self.full)
        dim: int = self.gbar.shape[0]
        expected[:dim, :dim] = self.v * self.gbar
        expected[dim, dim] = 1.0
        return float(np.max(np.abs(self.full - expected)))

@dataclass(frozen=True)
class CurvatureData:
    theta: float
    alpha: float
    beta: float
    H2_closed: float
    gauss_curv_fd: float

def _raw_embedding(h: ndarray, theta: float) -> ndarray:
    """(cos theta h^{(x)3}, sin theta h^{(x)4}) without range checks, for finite differences."""
    return np.concatenate([
        math.cos(theta) * tensor_power(h, 3),
        math.sin(theta) * tensor_power(h, 4),
    ])

def sphere_chart(q: int, t: ndarray) -> tuple[ndarray, ndarray]:
    """Point of S^{q-1} and the sphere metric gbar at chart coordinates t.

    q=2: h = (cos t1, sin t1), gbar = [[1]].
    q=3: h = (sin t1 cos t2, sin t1 sin t2, cos t1), gbar = diag(1, sin^2 t1).
    """
    if q == 2:
        return np.array([math.cos(t[0]), math.sin(t[0])]), np.eye(1)
    elif q == 3:
        if abs(math.sin(t[0])) < 1e-3:
            raise ValueError(f"chart point is too close to a pole. t1={t[0]}")
        h: ndarray = np.array([
            math.sin(t[0]) * math.cos(t[1]),
            math.sin(t[0]) * math.sin(t[1]),
            math.cos(t[0]),
        ])
        return h, np.diag([1.0, math.sin(t[0]) ** 2])
    else:
        raise ValueError(f"charts are available for q=2 and q=3. q={q}")

def _chart_embedding(q: int) -> Callable[[ndarray], ndarray]:
    def embedding(chart_point: ndarray) -> ndarray:
        h, _ = sphere_chart(q, chart_point[:-1])
        return _raw_embedding(h, chart_point[-1])
    return embedding

def _tangents(
    embedding: Callable[[ndarray], ndarray],
    chart_point: ndarray,
    step: float,
    five_point: bool = False
) -> ndarray:
    """Columns d x / d coordinate by central differences."""
    columns: list[ndarray] = []
    for i in range(len(chart_point)):
        shift: ndarray = np.zeros_like(chart_point)
        shift[i] = step
        if five_point:
            column: ndarray = (
                -embedding(chart_point + 2 * shift) + 8 * embedding(chart_point + shift)
                - 8 * embedding(chart_point - shift) + embedding(chart_point - 2 * shift)
            ) / (12.0 * step)
        else:
            column: ndarray = (
                embedding(chart_point + shift) - embedding(chart_point - shift)
            ) / (2.0 * step)
        columns.append(column)
    return np.stack(columns, axis=1)

def metric_numeric(q: int, chart_point: ndarray | list[float], step: float = 1e-5) -> MetricBlock:
    """Gram matrix of finite-difference tangent vectors of M.

    Args:
        q (int): 2 or 3.
        chart_point (ndarray): (t^1..t^{q-1}, theta).
        step (float): central difference step.

    Returns:
        block (MetricBlock): numerical metric and the closed-form pieces it should match.
    """
    chart_point = np.asarray(chart_point, dtype=np.float64)
    if len(chart_point) != q:
        raise ValueError(f"chart point needs q coordinates. q={q} len={len(chart_point)}")
    _, gbar = sphere_chart(q, chart_point[:-1])
    tangents: ndarray = _tangents(_chart_embedding(q), chart_point, step)
    theta: float = float(chart_point[-1])
    return MetricBlock(
        chart_point=chart_point, theta=theta, v=float(v_theta(theta)),
        gbar=gbar, full=tangents.T @ tangents
    )

def manifold_volume_numeric(q: int) -> float:
    """Omega_q int_{-pi/2}^{pi/2} v(theta)^{(q-1)/2} dtheta."""
    if q not in (2, 3, 4):
        raise ValueError(f"q must be 2, 3 or 4. q={q}")
    return sphere_surface(q) * elliptic_moment_quad(0.5 * (q - 1))

def _brioschi(
    metric: Callable[[float, float], tuple[float, float, float]],
    u: float,
    v: float,
    step: float
) -> float:
    """Gauss curvature from the first fundamental form (E, F, G) alone."""
    E, F, G = metric(u, v)
    Eu_p, Fu_p, Gu_p = metric(u + step, v)
    Eu_m, Fu_m, Gu_m = metric(u - step, v)
    Ev_p, Fv_p, Gv_p = metric(u, v + step)
    Ev_m, Fv_m, Gv_m = metric(u, v - step)
    F_pp = metric(u + step, v + step)[1]
    F_pm = metric(u + step, v - step)[1]
    F_mp = metric(u - step, v + step)[1]
    F_mm = metric(u - step, v - step)[1]
    E_u: float = (Eu_p - Eu_m) / (2 * step)
    E_v: float = (Ev_p - Ev_m) / (2 * step)
    F_u: float = (Fu_p - Fu_m) / (2 * step)
    F_v: float = (Fv_p - Fv_m) / (2 * step)
    G_u: float = (Gu_p - Gu_m) / (2 * step)
    G_v: float = (Gv_p - Gv_m) / (2 * step)
    E_vv: float = (Ev_p - 2 * E + Ev_m) / step ** 2
    G_uu: float = (Gu_p - 2 * G + Gu_m) / step ** 2
    F_uv: float = (F_pp - F_pm - F_mp + F_mm) / (4 * step ** 2)
    A: ndarray = np.array([
        [-0.5 * E_vv + F_uv - 0.5 * G_uu, 0.5 * E_u, F_u - 0.5 * E_v],
        [F_v - 0.5 * G_u, E, F],
        [0.5 * G_v, F, G],
    ])
    B: ndarray = np.array([
        [0.0, 0.5 * E_v, 0.5 * G_u],
        [0.5 * E_v, E, F],
        [0.5 * G_u, F, G],
    ])
    return float((np.linalg.det(A) - np.linalg.det(B)) / (E * G - F ** 2) ** 2)

def curvature_check_q2(theta: float, phi: float = 0.3, step: float = 1e-3) -> CurvatureData:
    """Gauss curvature of M at q=2 by the Brioschi formula on a numerical metric.

    The metric is built from five-point tangent differences (step 1e-3) and
    differentiated with central differences of size step.
    For the 2-dimensional M, K - 1 should equal H_2 = beta(theta).
    """
    embedding: Callable[[ndarray], ndarray] = _chart_embedding(2)

    def metric(u: float, v: float) -> tuple[float, float, float]:
        tangents: ndarray = _tangents(embedding, np.array([u, v]), 1e-3, five_point=True)
        gram: ndarray = tangents.T @ tangents
        return gram[0, 0], gram[0, 1], gram[1, 1]

    gauss_curvature: float = _brioschi(metric, phi, theta, step)
    if not math.isfinite(gauss_curvature):
        raise ValueError(f"finite-difference curvature is not finite. theta={theta}")
    alpha, beta = alpha_beta(theta)
    return CurvatureData(
        theta=float(theta), alpha=float(alpha), beta=float(beta),
        H2_closed=float(curvature_polynomial(2, 2, theta)),
        gauss_curv_fd=gauss_curvature
    )

def weyl_invariant_numeric(q: int, e: int) -> float:
    """kappa_e by quadrature of H_e v^{(q-1)/2} for e in {0, 2}.

    H_2 = C(q-1, 2) alpha + (q-1) beta: one alpha per pair of sphere
    directions and one beta per pairing of theta with a sphere direction.
    """
    if q not in (2, 3):
        raise ValueError(f"q must be 2 or 3. q={q}")
    if e == 0:
        return manifold_volume_numeric(q)
    if e != 2:
        raise ValueError(f"only e=0 and e=2 are verified numerically. e={e}")

    def integrand(theta: float) -> float:
        alpha, beta = alpha_beta(theta)
        h2: float = math.comb(q - 1, 2) * alpha + (q - 1) * beta
        return h2 * v_theta(theta) ** (0.5 * (q - 1))

    value, _ = integrate.quad(integrand, 0.0, 0.5 * math.pi, epsabs=0.0, epsrel=1e-13, limit=200)
    return 2.0 * sphere_surface(q) * value
