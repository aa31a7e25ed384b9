from cumulants import DataMatrix
from cumulants import UnitDirection
from cumulants import moment_index
from fields import FieldCoefficients
from fields import sample_coefficients
import json
import math
import numpy as np
from numpy import ndarray
import pytest
from scipy.stats import special_ortho_group
from sphere_opts import Objective
from sphere_opts import OptimizerConfig
from sphere_opts import OptResult
from sphere_opts import SphereOptimizer
from sphere_opts import field_objective
from sphere_opts import grid_search_q2
from sphere_opts import index_objective
from sphere_opts import max_index_value
from sphere_opts import maximize

def _rayleigh_objective(a: ndarray) -> Objective:
    def grad(h: UnitDirection) -> ndarray:
        inner: float = float(h.components @ a)
        return 2.0 * inner * (a - inner * h.components)
    return Objective(q=len(a), eval=lambda h: float(h.components @ a) ** 2, grad=grad)

def _planted_data(n: int, q: int, seed: int) -> DataMatrix:
    values: ndarray = np.random.default_rng(seed).standard_normal((n, q))
    values[:, 0] = values[:, 0] ** 3
    return DataMatrix(values)

def test_grid_search_on_squared_first_coordinate():
    obj: Objective = Objective(q=2, eval=lambda h: float(h.components[0] ** 2))
    result: OptResult = grid_search_q2(obj, 16)
    assert np.allclose(result.h_star.components, [1.0, 0.0])
    assert result.value == 1.0
    assert result.starts_used == 16

def test_grid_search_on_constant_objective():
    obj: Objective = Objective(q=2, eval=lambda h: 2.5)
    result: OptResult = grid_search_q2(obj, 8)
    assert result.value == 2.5
    assert result.h_star.components[0] >= 0.0

def test_grid_search_on_field_with_single_coefficient():
    xi1: ndarray = np.zeros(8)
    xi1[0] = 1.0
    coeffs: FieldCoefficients = FieldCoefficients(q=2, xi1=xi1, xi2=np.zeros(16))
    result: OptResult = grid_search_q2(field_objective(coeffs), 64)
    assert np.allclose(result.h_star.components, [1.0, 0.0])
    assert result.value == pytest.approx(1.0)

def test_grid_search_validation():
    with pytest.raises(ValueError):
        grid_search_q2(_rayleigh_objective(np.array([1.0, 2.0, 3.0])), 64)
    with pytest.raises(ValueError):
        grid_search_q2(Objective(q=2, eval=lambda h: 1.0), 4)

def test_maximize_rayleigh_quotient():
    a: ndarray = np.array([0.5, -2.0, 1.0])
    result: OptResult = maximize(_rayleigh_objective(a), starts=8, seed=1)
    assert result.value == pytest.approx(float(a @ a), rel=1e-10)
    assert np.allclose(result.h_star.components, UnitDirection.from_vector(a).canonical().components, atol=1e-8)
    assert result.converged
    assert result.best_gradient_norm <= 1e-10
    assert result.starts_used == 3 + 8

def test_maximize_validation():
    obj: Objective = _rayleigh_objective(np.array([1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        maximize(obj, starts=0, seed=0)
    with pytest.raises(ValueError):
        maximize(obj, starts=4, seed=0, tol=0.0)

def test_maximize_is_deterministic():
    coeffs: FieldCoefficients = sample_coefficients(3, np.random.default_rng(2))
    first: OptResult = maximize(field_objective(coeffs), starts=6, seed=9)
    second: OptResult = maximize(field_objective(coeffs), starts=6, seed=9)
    assert first.value == second.value
    assert np.array_equal(first.h_star.components, second.h_star.components)

def test_maximize_dominates_every_start():
    coeffs: FieldCoefficients = sample_coefficients(3, np.random.default_rng(3))
    obj: Objective = field_objective(coeffs)
    optimizer: SphereOptimizer = SphereOptimizer(OptimizerConfig(starts=10, seed=4))
    result: OptResult = optimizer.maximize(obj)
    for h0 in optimizer._initial_points(3, 10, 4):
        assert obj.eval(h0) <= result.value

def test_maximize_without_gradient_uses_geodesic_differences():
    a: ndarray = np.array([1.0, 1.0, -1.0])
    obj: Objective = Objective(q=3, eval=lambda h: float(h.components @ a) ** 2)
    result: OptResult = maximize(obj, starts=4, seed=0, tol=1e-6)
    assert result.value == pytest.approx(3.0, rel=1e-8)

def test_non_finite_start_is_skipped_with_warning():
    a: ndarray = np.array([1.0, 2.0, 0.5])

    def eval_or_nan(h: UnitDirection) -> float:
        if 0.999 < abs(h.components[2]):
            return float("nan")
        return float(h.components @ a) ** 2
    obj: Objective = Objective(q=3, eval=eval_or_nan, grad=_rayleigh_objective(a).grad)
    with pytest.warns(UserWarning):
        result: OptResult = maximize(obj, starts=4, seed=0)
    assert result.value == pytest.approx(float(a @ a), rel=1e-10)

def test_all_starts_non_finite_raises():
    obj: Objective = Objective(q=3, eval=lambda h: float("nan"), grad=lambda h: np.zeros(3))
    with pytest.raises(ValueError):
        maximize(obj, starts=2, seed=0)

@pytest.mark.parametrize("seed", range(10))
def test_multistart_agrees_with_refined_grid_for_q2(seed):
    obj: Objective = field_objective(sample_coefficients(2, np.random.default_rng(seed)))
    refined: OptResult = SphereOptimizer().optimize(obj)
    ascended: OptResult = SphereOptimizer().maximize(obj)
    assert ascended.value == pytest.approx(refined.value, rel=1e-8)
    dense: OptResult = grid_search_q2(obj, 100000)
    assert dense.value <= refined.value + 1e-12 * max(1.0, refined.value)
    assert refined.value - dense.value <= 1e-6 * max(1.0, refined.value)

def test_max_index_value_on_null_data():
    data: DataMatrix = DataMatrix(np.random.default_rng(5).standard_normal((200, 2)))
    result: OptResult = max_index_value(data)
    assert 0.0 < result.value < math.inf
    assert result.value == pytest.approx(moment_index(data, result.h_star), rel=1e-10)

@pytest.mark.parametrize("q", [2, 3])
def test_max_index_value_finds_planted_direction(q):
    result: OptResult = max_index_value(_planted_data(500, q, 6), OptimizerConfig(starts=8))
    assert abs(result.h_star.components[0]) > 0.9

def test_max_index_value_is_rotation_equivariant():
    data: DataMatrix = _planted_data(300, 2, 7)
    rotation: ndarray = special_ortho_group.rvs(2, random_state=8)
    result: OptResult = max_index_value(data)
    rotated: OptResult = max_index_value(DataMatrix(data.values @ rotation.T))
    assert rotated.value == pytest.approx(result.value, rel=1e-6)
    assert abs(float(rotated.h_star.components @ (rotation @ result.h_star.components))) > 1.0 - 1e-6

def test_index_objective_grid_matches_pointwise():
    data: DataMatrix = _planted_data(100, 2, 9)
    obj: Objective = index_objective(data)
    directions: ndarray = np.array([[1.0, 0.0], [0.6, 0.8]])
    values: ndarray = obj.grid_eval(directions)
    assert values[1] == pytest.approx(moment_index(data, UnitDirection(directions[1])), rel=1e-10)

def test_optimizer_config_from_json(tmp_path):
    config_path = tmp_path / "optimizer.json"
    config_path.write_text(json.dumps({"starts": 5, "tol": 1e-8, "grid_resolution": 512}))
    config: OptimizerConfig = OptimizerConfig.from_json(config_path)
    assert (config.starts, config.tol, config.grid_resolution, config.seed) == (5, 1e-8, 512, 42)
    assert config.to_dict()["refine"] is True
