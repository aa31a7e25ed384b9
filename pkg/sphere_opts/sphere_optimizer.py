from cumulants import DataMatrix
from cumulants import Estimator
from cumulants import MomentTensors
from cumulants import UnitDirection
from cumulants import tangent_projection
from dataclasses import asdict
from dataclasses import dataclass
from fields import FieldCoefficients
from fields import field_index_and_gradient
from fields import field_index_on_grid
import json
import math
import numpy as np
from numpy import ndarray
from numpy.random import Generator
from pathlib import Path
from scipy.optimize import minimize_scalar
from typing import Any
from typing import Callable
from typing import Optional
import warnings

@dataclass(frozen=True)
class Objective:
    """Objective class.

    A smooth function on S^{q-1} that is even, eval(h) = eval(-h).

    Attributes:
        q (int): dimension.
        eval (Callable): UnitDirection -> float.
        grad (Callable, optional): UnitDirection -> tangent gradient (length q).
        grid_eval (Callable, optional): (G x q) array of directions -> G values.
            Used for vectorized grid search.
    """
    q: int
    eval: Callable[[UnitDirection], float]
    grad: Optional[Callable[[UnitDirection], ndarray]] = None
    grid_eval: Optional[Callable[[ndarray], ndarray]] = None

@dataclass(frozen=True)
class OptResult:
    h_star: UnitDirection
    value: float
    starts_used: int
    converged: bool
    best_gradient_norm: float

@dataclass(frozen=True)
class OptimizerConfig:
    """OptimizerConfig class.

    Attributes:
        starts (int): number of random starts for q >= 3. Coordinate axes are added.
        seed (int): seed for the random starts.
        tol (float): tangent-gradient norm at which a start is converged.
        max_iter (int): maximum number of ascent iterations per start.
        grid_resolution (int): number of grid angles on the half circle for q = 2.
        refine (bool): whether to refine the q = 2 grid maximum by bounded Brent search.
        grid_tol (float): tangent-gradient norm at which a refined q = 2 maximum is converged.
    """
    starts: int = 32
    seed: int = 42
    tol: float = 1e-10
    max_iter: int = 500
    grid_resolution: int = 4096
    refine: bool = True
    grid_tol: float = 1e-6

    @classmethod
    def from_json(cls, config_path: Path | str) -> "OptimizerConfig":
        config: dict[str, Any] = json.load(fp=open(str(config_path), mode="r"))
        return cls(**config)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

def index_objective(
    data: DataMatrix,
    estimator: Estimator = "moment"
) -> Objective:
    """I_n(h) on the data through its moment tensors."""
    tensors: MomentTensors = MomentTensors.from_data(data, estimator)
    return Objective(
        q=data.q,
        eval=tensors.index,
        grad=lambda h: tensors.index_and_gradient(h)[1],
        grid_eval=tensors.index_on_grid,
    )

def field_objective(coeffs: FieldCoefficients) -> Objective:
    """I(h) = Z1(h)^2 + Z2(h)^2 for one draw of the limiting field."""
    return Objective(
        q=coeffs.q,
        eval=lambda h: field_index_and_gradient(coeffs, h)[0],
        grad=lambda h: field_index_and_gradient(coeffs, h)[1],
        grid_eval=lambda directions: field_index_on_grid(coeffs, directions),
    )

def half_circle_directions(resolution: int) -> tuple[ndarray, ndarray]:
    """Angles pi i / resolution, i = 0..resolution-1, and the directions (cos, sin)."""
    angles: ndarray = math.pi * np.arange(resolution) / resolution
    return angles, np.stack([np.cos(angles), np.sin(angles)], axis=1)

def _is_better(
    value: float,
    h: ndarray,
    best_value: float,
    best_h: Optional[ndarray]
) -> bool:
    """Compare by value, then by the lexicographic order of canonical directions."""
    if best_h is None:
        return True
    tie_tol: float = 1e-12 * max(1.0, abs(best_value))
    if tie_tol < value - best_value:
        return True
    if value - best_value < -tie_tol:
        return False
    return tuple(h) < tuple(best_h)

class SphereOptimizer:
    """SphereOptimizer class.

    SphereOptimizer maximizes an even objective over S^{q-1}.
        - q = 2: exhaustive grid on the half circle followed by a bounded Brent
          refinement around the best grid angle.
        - q >= 3: multi-start projected gradient ascent with backtracking.
    Results are reported with a canonical sign (first nonzero component positive).
    """
    def __init__(self, config: Optional[OptimizerConfig] = None) -> None:
        self.config: OptimizerConfig = OptimizerConfig() if config is None else config

    def _gradient(self, obj: Objective, h: UnitDirection) -> ndarray:
        if obj.grad is not None:
            return np.asarray(obj.grad(h), dtype=np.float64)
        return self._numeric_gradient(obj, h)

    def _numeric_gradient(
        self,
        obj: Objective,
        h: UnitDirection,
        step: float = 1e-6
    ) -> ndarray:
        """Central differences along geodesics in the directions of an orthonormal tangent basis."""
        hc: ndarray = h.components
        basis: ndarray = np.linalg.svd(np.eye(obj.q) - np.outer(hc, hc))[0][:, :obj.q - 1]
        grad: ndarray = np.zeros(obj.q)
        for i in range(obj.q - 1):
            u: ndarray = basis[:, i]
            f_plus: float = obj.eval(UnitDirection.from_vector(math.cos(step) * hc + math.sin(step) * u))
            f_minus: float = obj.eval(UnitDirection.from_vector(math.cos(step) * hc - math.sin(step) * u))
            grad += (f_plus - f_minus) / (2.0 * step) * u
        return grad

    def grid_search_q2(self, obj: Objective, resolution: int) -> OptResult:
        """Evaluate obj on pi i / resolution, i = 0..resolution-1, and return the best point.

        The half circle suffices because obj(h) = obj(-h). No local refinement.
        """
        if obj.q != 2:
            raise ValueError(f"grid search is for q=2 only. q={obj.q}")
        if resolution < 8:
            raise ValueError(f"resolution must be at least 8. resolution={resolution}")
        _, directions = half_circle_directions(resolution)
        if obj.grid_eval is not None:
            values: ndarray = np.asarray(obj.grid_eval(directions), dtype=np.float64)
        else:
            values: ndarray = np.array([obj.eval(UnitDirection(d)) for d in directions])
        best_value: float = -np.inf
        best_h: Optional[ndarray] = None
        max_value: float = float(np.max(values))
        for i in np.flatnonzero(max_value - values <= 1e-12 * max(1.0, abs(max_value))):
            h: ndarray = UnitDirection(directions[i]).canonical().components
            if _is_better(float(values[i]), h, best_value, best_h):
                best_value, best_h = float(values[i]), h
        h_star: UnitDirection = UnitDirection(best_h)
        grad_norm: float = float(np.linalg.norm(self._gradient(obj, h_star)))
        return OptResult(
            h_star=h_star, value=best_value, starts_used=resolution,
            converged=grad_norm <= self.config.grid_tol, best_gradient_norm=grad_norm
        )

    def refine_q2(self, obj: Objective, grid_result: OptResult, resolution: int) -> OptResult:
        """Bounded Brent search within one grid spacing of the grid maximum."""
        h0: ndarray = grid_result.h_star.components
        phi0: float = math.atan2(h0[1], h0[0])
        spacing: float = math.pi / resolution

        def negative_objective(phi: float) -> float:
            return -obj.eval(UnitDirection(np.array([math.cos(phi), math.sin(phi)])))

        res = minimize_scalar(
            negative_objective, bounds=(phi0 - spacing, phi0 + spacing),
            method="bounded", options={"xatol": 1e-12}
        )
        if not -res.fun > grid_result.value:
            return grid_result
        h_star: UnitDirection = UnitDirection(
            np.array([math.cos(res.x), math.sin(res.x)])
        ).canonical()
        grad_norm: float = float(np.linalg.norm(self._gradient(obj, h_star)))
        return OptResult(
            h_star=h_star, value=float(-res.fun), starts_used=grid_result.starts_used,
            converged=grad_norm <= self.config.grid_tol, best_gradient_norm=grad_norm
        )

    def _initial_points(self, q: int, starts: int, seed: int) -> list[UnitDirection]:
        prng: Generator = np.random.default_rng(seed)
        points: list[UnitDirection] = [UnitDirection(row) for row in np.eye(q)]
        for _ in range(starts):
            points.append(UnitDirection.from_vector(prng.standard_normal(q)))
        return points

    def _ascend(
        self,
        obj: Objective,
        h: UnitDirection,
        tol: float
    ) -> Optional[tuple[float, UnitDirection, bool, float]]:
        """Projected gradient ascent from h with backtracking step control.

        A step h <- normalize(h + s g) is accepted when it satisfies the Armijo
        condition up to rounding in the objective. The step grows by 2 after each acceptance and
        halves on each rejection. The start stops at gradient norm <= tol, at step
        collapse, or after max_iter iterations.

        Returns:
            None if the objective became non-finite, otherwise
            (best value, best point, converged, gradient norm at the best point).
        """
        f: float = obj.eval(h)
        if not math.isfinite(f):
            return None
        g: ndarray = self._gradient(obj, h)
        g_norm: float = float(np.linalg.norm(g))
        best: tuple[float, UnitDirection, float] = (f, h, g_norm)
        step: float = 1.0 / max(g_norm, 1.0)
        for _ in range(self.config.max_iter):
            if g_norm <= tol:
                break
            step = min(step, 1.0 / g_norm)
            rounding: float = 4e-16 * max(1.0, abs(f))
            accepted: bool = False
            while 1e-16 < step * g_norm:
                h_new: UnitDirection = UnitDirection.from_vector(h.components + step * g)
                f_new: float = obj.eval(h_new)
                if not math.isfinite(f_new):
                    return None
                if f + 1e-4 * step * g_norm ** 2 - rounding <= f_new:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
            h, f = h_new, f_new
            g = self._gradient(obj, h)
            g_norm = float(np.linalg.norm(g))
            if best[0] <= f:
                best = (f, h, g_norm)
            step *= 2.0
        f_best, h_best, g_best = best
        return f_best, h_best, g_best <= tol, g_best

    def maximize(
        self,
        obj: Objective,
        starts: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None
    ) -> OptResult:
        """Multi-start projected gradient ascent on S^{q-1}.

        Starts are the q coordinate axes followed by `starts` points drawn
        uniformly on the sphere from `seed`. The best local maximum wins; ties in
        value are broken by the lexicographic order of canonical directions.

        Args:
            obj (Objective): objective.
            starts (int, optional): number of random starts. Default to config.starts.
            seed (int, optional): seed for random starts. Default to config.seed.
            tol (float, optional): gradient tolerance. Default to config.tol.

        Returns:
            result (OptResult): best point, value, and convergence diagnostics.
        """
        starts = self.config.starts if starts is None else starts
        seed = self.config.seed if seed is None else seed
        tol = self.config.tol if tol is None else tol
        if starts < 1:
            raise ValueError(f"starts must be positive. starts={starts}")
        if not tol > 0:
            raise ValueError(f"tol must be positive. tol={tol}")
        initial_points: list[UnitDirection] = self._initial_points(obj.q, starts, seed)
        best_value: float = -np.inf
        best_h: Optional[ndarray] = None
        best_converged: bool = False
        best_grad_norm: float = np.inf
        num_aborted: int = 0
        for h0 in initial_points:
            outcome = self._ascend(obj, h0, tol)
            if outcome is None:
                num_aborted += 1
                continue
            value, h, converged, grad_norm = outcome
            h_canonical: ndarray = h.canonical().components
            if _is_better(value, h_canonical, best_value, best_h):
                best_value, best_h = value, h_canonical
                best_converged, best_grad_norm = converged, grad_norm
        if best_h is None:
            raise ValueError("objective was non-finite at every start.")
        if 0 < num_aborted:
            warnings.warn(f"{num_aborted} starts aborted by non-finite objective values.")
        return OptResult(
            h_star=UnitDirection(best_h), value=best_value,
            starts_used=len(initial_points), converged=best_converged,
            best_gradient_norm=best_grad_norm
        )

    def optimize(self, obj: Objective) -> OptResult:
        """Dispatch to the q = 2 grid (plus refinement) or to multi-start ascent."""
        if obj.q == 2:
            resolution: int = self.config.grid_resolution
            result: OptResult = self.grid_search_q2(obj, resolution)
            if self.config.refine:
                result = self.refine_q2(obj, result, resolution)
            return result
        return self.maximize(obj)

def grid_search_q2(obj: Objective, resolution: int) -> OptResult:
    return SphereOptimizer().grid_search_q2(obj, resolution)

def maximize(
    obj: Objective,
    starts: int,
    seed: int,
    tol: float = 1e-10
) -> OptResult:
    return SphereOptimizer().maximize(obj, starts=starts, seed=seed, tol=tol)

def max_index_value(
    data: DataMatrix,
    config: Optional[OptimizerConfig] = None,
    estimator: Estimator = "moment"
) -> OptResult:
    """max_h I_n(h) over S^{q-1} and the maximizing direction."""
    optimizer: SphereOptimizer = SphereOptimizer(config)
    return optimizer.optimize(index_objective(data, estimator))
