from cumulants import UnitDirection
from dataclasses import dataclass
from fields import ManifoldPoint
from fields import covariance_closed_form
from fields import embed
from fields import manifold_inner
from functools import reduce
import math
import numpy as np
from numpy import ndarray
from numpy.random import Generator
from rich.console import Console
from scipy.linalg import null_space
from scipy.optimize import least_squares
from scipy.optimize import minimize
from specfuns import v_theta
from tqdm import tqdm

console: Console = Console(stderr=True)

@dataclass(frozen=True)
class CriticalScanResult:
    """CriticalScanResult class.

    Attributes:
        sup_fg (float): sup of f/g over pairs of distinct points of M.
        attained_at (tuple): (psi, theta, theta~, k) of the supremum. psi = 0 marks the
            coincidence limit, where k = (delta/psi)^2 with delta = theta~ - theta.
        critical_values (list): (r, half-angle) of the critical points of r(x,y).
        theta_c (float): min(acot(sqrt(sup_fg)), min half-angle).
        global_sup (float): sup of f/g on the grid outside the coincidence neighborhood.
        local_sup (float): max of the local ratio over (u, k).
    """
    sup_fg: float
    attained_at: tuple[float, float, float, float]
    critical_values: list[tuple[float, float]]
    theta_c: float
    global_sup: float
    local_sup: float

def _kron(*vectors: ndarray) -> ndarray:
    return reduce(np.kron, vectors)

def tangent_basis(x: ManifoldPoint) -> ndarray:
    """p x q matrix of tangent vectors of M at x: q-1 sphere directions and d/dtheta."""
    h: ndarray = x.h.components
    theta: float = x.theta
    sphere_tangents: ndarray = null_space(h[None, :])
    columns: list[ndarray] = []
    for u in sphere_tangents.T:
        d3: ndarray = _kron(u, h, h) + _kron(h, u, h) + _kron(h, h, u)
        d4: ndarray = _kron(u, h, h, h) + _kron(h, u, h, h) \
            + _kron(h, h, u, h) + _kron(h, h, h, u)
        columns.append(np.concatenate([math.cos(theta) * d3, math.sin(theta) * d4]))
    columns.append(np.concatenate([
        -math.sin(theta) * _kron(h, h, h), math.cos(theta) * _kron(h, h, h, h)
    ]))
    return np.stack(columns, axis=1)

def h_func(x: ManifoldPoint, y: ManifoldPoint) -> float:
    """h(x, y) = (1 - <y, P_x y>) / (1 - <x, y>)^2.

    P_x is the orthogonal projection onto span{x, T_x M}.
    """
    inner: float = manifold_inner(x, y)
    if not inner < 1.0 - 1e-12:
        raise ValueError(f"points are (nearly) coincident. <x,y>={inner}")
    basis: ndarray = np.column_stack([x.embedding, tangent_basis(x)])
    orthonormal, _ = np.linalg.qr(basis)
    residual: ndarray = y.embedding - orthonormal @ (orthonormal.T @ y.embedding)
    return float(residual @ residual) / (1.0 - inner) ** 2

def fg_reduced(
    psi: float | ndarray,
    theta: float | ndarray,
    theta_tilde: float | ndarray
) -> tuple[float | ndarray, float | ndarray]:
    """f and g with h(x, y) = f/g, for cos psi = <h, h~>.

    f = 1 - cos^6 psi cos^2 theta~ - cos^8 psi sin^2 theta~
        - (3 cos^2 psi cos theta~ cos theta + 4 cos^3 psi sin theta~ sin theta)^2 / v(theta) sin^2 psi
    g = (1 - cos^3 psi cos theta~ cos theta - cos^4 psi sin theta~ sin theta)^2
    """
    cos_psi = np.cos(psi)
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    cos_tt, sin_tt = np.cos(theta_tilde), np.sin(theta_tilde)
    cross = 3.0 * cos_psi ** 2 * cos_tt * cos_t + 4.0 * cos_psi ** 3 * sin_tt * sin_t
    f = 1.0 - cos_psi ** 6 * cos_tt ** 2 - cos_psi ** 8 * sin_tt ** 2 \
        - cross ** 2 / v_theta(theta) * np.sin(psi) ** 2
    g = (1.0 - covariance_closed_form(psi, theta, theta_tilde)) ** 2
    return f, g

def local_ratio(u: float | ndarray, k: float | ndarray) -> float | ndarray:
    """Limit of f/g as psi -> 0 with u = sin^2 theta and k = (delta/psi)^2.

    12 ((1+u)(3+u) + 4k) / ((3+u)(k+3+u)^2)
    """
    return 12.0 * ((1.0 + u) * (3.0 + u) + 4.0 * k) / ((3.0 + u) * (k + 3.0 + u) ** 2)

def local_ratio_profile(u: float | ndarray) -> tuple[float | ndarray, float | ndarray]:
    """argmax_k and max_k of local_ratio(u, k): k = (3+u)(1-u)/2, value 48/((3+u)^2 (3-u))."""
    return 0.5 * (3.0 + u) * (1.0 - u), 48.0 / ((3.0 + u) ** 2 * (3.0 - u))

def random_pair(q: int, rng: Generator) -> tuple[ManifoldPoint, ManifoldPoint]:
    """Two points of M with uniform directions and uniform angles in (-pi/2, pi/2)."""
    h: UnitDirection = UnitDirection.from_vector(rng.standard_normal(q))
    h_tilde: UnitDirection = UnitDirection.from_vector(rng.standard_normal(q))
    theta, theta_tilde = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size=2)
    return embed(h, float(theta)), embed(h_tilde, float(theta_tilde))

def reduction_check(q: int, num_pairs: int, seed: int) -> float:
    """Max relative difference between h_func and f/g on random pairs of points of M."""
    prng: Generator = np.random.default_rng(seed)
    max_error: float = 0.0
    for _ in range(num_pairs):
        x, y = random_pair(q, prng)
        if 1.0 - manifold_inner(x, y) < 1e-6:
            continue
        psi: float = math.acos(min(1.0, max(-1.0, float(x.h.components @ y.h.components))))
        f, g = fg_reduced(psi, x.theta, y.theta)
        reduced: float = f / g
        error: float = abs(h_func(x, y) - reduced) / max(abs(reduced), 1e-12)
        max_error = max(max_error, error)
    return max_error

def _r_gradient(point: ndarray) -> ndarray:
    """Gradient of r(psi, theta, theta~) = cos theta cos theta~ cos^3 psi + sin theta sin theta~ cos^4 psi."""
    psi, theta, theta_tilde = point
    c, s = math.cos(psi), math.sin(psi)
    ct, st = math.cos(theta), math.sin(theta)
    ctt, stt = math.cos(theta_tilde), math.sin(theta_tilde)
    return np.array([
        -3.0 * c ** 2 * s * ct * ctt - 4.0 * c ** 3 * s * st * stt,
        -st * ctt * c ** 3 + ct * stt * c ** 4,
        -ct * stt * c ** 3 + st * ctt * c ** 4,
    ])

def critical_points_check(
    gradient_tol: float = 1e-8,
    show_process: bool = False
) -> list[tuple[float, float]]:
    """Critical values of r(x, y) over pairs of distinct points of M.

    The stationarity system dr/dpsi = dr/dtheta = dr/dtheta~ = 0 is solved by
    least squares from a grid of starts over psi in [0, pi], theta, theta~ in
    [-pi/2, pi/2]. Solutions with r = 1 are the coincident pairs and are dropped.
    The remaining solutions are grouped by r.

    Returns:
        critical_values (list): (r, half-angle acos(r)/2) per family, sorted by decreasing r.
            Any family other than r = 0 and r = -1 is a spurious critical point.
    """
    lower: ndarray = np.array([0.0, -0.5 * math.pi, -0.5 * math.pi])
    upper: ndarray = np.array([math.pi, 0.5 * math.pi, 0.5 * math.pi])
    psi_starts: ndarray = np.append(np.linspace(0.2, math.pi - 0.2, 6), math.pi - 0.05)
    theta_starts: ndarray = np.linspace(-1.3, 1.3, 5)
    starts: list[ndarray] = [
        np.array([psi, theta, theta_tilde])
        for psi in psi_starts for theta in theta_starts for theta_tilde in theta_starts
    ]
    families: dict[float, tuple[float, float]] = {}
    if show_process:
        console.print("[green]==solve stationarity system of r(x,y)==[green]")
    for start in tqdm(starts, disable=not show_process):
        result = least_squares(
            _r_gradient, start, bounds=(lower, upper), xtol=1e-15, ftol=1e-15, gtol=1e-15
        )
        if gradient_tol < np.linalg.norm(result.fun):
            continue
        psi, theta, theta_tilde = result.x
        r: float = float(covariance_closed_form(psi, theta, theta_tilde))
        if 1.0 - 1e-6 < r:
            continue
        key: float = round(r, 6) + 0.0
        if key not in families:
            families[key] = (r, 0.5 * math.acos(min(1.0, max(-1.0, r))))
    return [families[key] for key in sorted(families, reverse=True)]

def _local_sup() -> tuple[float, float, float]:
    """max of local_ratio over u in [0,1], k >= 0. Returns (value, u, k)."""
    best: tuple[float, float, float] = (-np.inf, 0.0, 0.0)
    for u0, k0 in [(0.5, 1.0), (0.1, 0.5), (0.9, 3.0), (0.0, 2.0)]:
        result = minimize(
            lambda x: -local_ratio(x[0], x[1]), np.array([u0, k0]),
            method="L-BFGS-B", bounds=[(0.0, 1.0), (0.0, None)],
            options={"ftol": 1e-15, "gtol": 1e-12}
        )
        if best[0] < -result.fun:
            best = (float(-result.fun), float(result.x[0]), float(result.x[1]))
    return best

def sup_fg_scan(
    resolution: int = 64,
    epsilon: float = 1e-2,
    show_process: bool = False
) -> CriticalScanResult:
    """Critical radius of M from the sup of f/g.

    The global part scans f/g on a resolution^3 grid of (psi, theta, theta~) and
    excludes the coincidence neighborhood: the ball of radius epsilon in
    (psi, delta) and the pairs with 1 - r < epsilon^2/2 (M is two-to-one at
    theta = pi/2). The coincidence limit is covered by the local ratio
    maximized over (u, k).

    Args:
        resolution (int): grid points per axis. resolution >= 64.
        epsilon (float): coincidence exclusion radius.
        show_process (bool): whether to show progress over psi tiles.

    Returns:
        scan (CriticalScanResult): sup of f/g, where it is attained, and theta_c.
    """
    if resolution < 64:
        raise ValueError(f"resolution must be at least 64. resolution={resolution}")
    psis: ndarray = np.linspace(0.0, math.pi, resolution)
    thetas: ndarray = -0.5 * math.pi + math.pi * np.arange(1, resolution + 1) / resolution
    theta_grid, theta_tilde_grid = np.meshgrid(thetas, thetas, indexing="ij")
    global_sup: float = -np.inf
    global_at: tuple[float, float, float, float] = (np.nan, np.nan, np.nan, np.nan)
    if show_process:
        console.print("[green]==scan f/g outside the coincidence neighborhood==[green]")
    for psi in tqdm(psis, disable=not show_process):
        f, g = fg_reduced(psi, theta_grid, theta_tilde_grid)
        r: ndarray = covariance_closed_form(psi, theta_grid, theta_tilde_grid)
        delta: ndarray = theta_tilde_grid - theta_grid
        valid: ndarray = (epsilon <= np.hypot(psi, delta)) & (0.5 * epsilon ** 2 <= 1.0 - r)
        if not np.any(valid):
            continue
        ratio: ndarray = np.where(valid, f / np.where(valid, g, 1.0), -np.inf)
        i, j = np.unravel_index(np.argmax(ratio), ratio.shape)
        if global_sup < ratio[i, j]:
            global_sup = float(ratio[i, j])
            global_at = (
                float(psi), float(theta_grid[i, j]), float(theta_tilde_grid[i, j]), float("nan")
            )
    local_sup, u_star, k_star = _local_sup()
    critical_values: list[tuple[float, float]] = critical_points_check(show_process=show_process)
    if global_sup <= local_sup:
        theta_star: float = math.asin(math.sqrt(u_star))
        sup_fg: float = local_sup
        attained_at: tuple[float, float, float, float] = (0.0, theta_star, theta_star, k_star)
    else:
        sup_fg = global_sup
        attained_at = global_at
    theta_c: float = math.atan(1.0 / math.sqrt(sup_fg))
    if 0 < len(critical_values):
        theta_c = min(theta_c, min(half_angle for _, half_angle in critical_values))
    return CriticalScanResult(
        sup_fg=sup_fg, attained_at=attained_at, critical_values=critical_values,
        theta_c=theta_c, global_sup=global_sup, local_sup=local_sup
    )
