from cumulants import DataMatrix
from cumulants import DegenerateSampleError
from cumulants import MomentTensors
from cumulants import ProjectedSample
from cumulants import UnitDirection
from cumulants import index_from_cumulants
from cumulants import moment_index
from cumulants import moment_index_gradient
from cumulants import project
from cumulants import sample_cumulants
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st
import math
import numpy as np
from numpy import ndarray
import pytest
from scipy import stats
from scipy.stats import special_ortho_group

def _random_data(n: int, q: int, seed: int) -> DataMatrix:
    prng = np.random.default_rng(seed)
    return DataMatrix(prng.standard_exponential((n, q)) + prng.standard_normal((n, q)))

def _numeric_tangent_gradient(data: DataMatrix, h: UnitDirection, step: float = 1e-5) -> ndarray:
    grad: ndarray = np.zeros(h.q)
    for i in range(h.q):
        shift: ndarray = np.zeros(h.q)
        shift[i] = step
        # I_n is scale invariant in h, so unnormalized perturbations are fine
        plus: float = moment_index(data, UnitDirection.from_vector(h.components + shift))
        minus: float = moment_index(data, UnitDirection.from_vector(h.components - shift))
        grad[i] = (plus - minus) / (2.0 * step)
    return grad - np.dot(grad, h.components) * h.components

def test_data_matrix_validation():
    with pytest.raises(ValueError):
        DataMatrix(np.ones((4, 2)))
    with pytest.raises(ValueError):
        DataMatrix(np.ones((10, 1)))
    values: ndarray = np.ones((10, 2))
    values[3, 1] = np.nan
    with pytest.raises(ValueError):
        DataMatrix(values)

def test_unit_direction_validation_and_canonical():
    with pytest.raises(ValueError):
        UnitDirection(np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        UnitDirection.from_vector([0.0, 0.0])
    h: UnitDirection = UnitDirection.from_vector([0.0, -3.0, 4.0])
    assert np.allclose(h.canonical().components, [0.0, 0.6, -0.8])

def test_project_hand_examples():
    data: DataMatrix = DataMatrix(np.array([[1.0, 1.0], [-1.0, 1.0], [2.0, 0.0], [0.0, 3.0], [5.0, -1.0]]))
    z: ProjectedSample = project(data, UnitDirection.from_vector([1.0, 1.0]))
    assert z.z[:2] == pytest.approx([math.sqrt(2.0), 0.0], abs=1e-15)
    assert np.array_equal(project(data, UnitDirection(np.array([0.0, 1.0]))).z, data.values[:, 1])

def test_project_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        project(_random_data(10, 2, 0), UnitDirection(np.array([1.0, 0.0, 0.0])))

def test_sample_cumulants_three_points():
    cumulants = sample_cumulants(ProjectedSample(np.array([-1.0, 0.0, 1.0])))
    assert cumulants.k2 == pytest.approx(2.0 / 3.0)
    assert cumulants.k3 == pytest.approx(0.0)
    assert cumulants.k4 == pytest.approx(-2.0 / 3.0)
    assert cumulants.b1 == pytest.approx(0.0)
    assert cumulants.b2 == pytest.approx(-1.5)
    assert index_from_cumulants(3, cumulants) == pytest.approx(0.28125)

def test_sample_cumulants_rejects_constant_sample():
    with pytest.raises(DegenerateSampleError):
        sample_cumulants(ProjectedSample(np.full(10, 2.5)))

def test_kstat_matches_scipy():
    z: ndarray = np.random.default_rng(3).standard_gamma(2.0, 40)
    cumulants = sample_cumulants(ProjectedSample(z), "kstat")
    assert cumulants.k2 == pytest.approx(stats.kstat(z, 2), rel=1e-10)
    assert cumulants.k3 == pytest.approx(stats.kstat(z, 3), rel=1e-10)
    assert cumulants.k4 == pytest.approx(stats.kstat(z, 4), rel=1e-10)

def test_moment_estimator_matches_scipy_skew_and_kurtosis():
    z: ndarray = np.random.default_rng(4).standard_gamma(3.0, 200)
    cumulants = sample_cumulants(ProjectedSample(z))
    assert cumulants.b1 == pytest.approx(stats.skew(z), rel=1e-10)
    assert cumulants.b2 == pytest.approx(stats.kurtosis(z), rel=1e-10)

@settings(max_examples=50, deadline=None)
@given(
    shift=st.floats(min_value=-1e3, max_value=1e3),
    scale=st.floats(min_value=1e-2, max_value=1e2),
    seed=st.integers(min_value=0, max_value=2 ** 16),
)
def test_standardized_cumulants_are_affine_invariant(shift, scale, seed):
    z: ndarray = np.random.default_rng(seed).standard_normal(30) ** 2
    base = sample_cumulants(ProjectedSample(z))
    moved = sample_cumulants(ProjectedSample(scale * z + shift))
    assert moved.b1 == pytest.approx(base.b1, rel=1e-6, abs=1e-9)
    assert moved.b2 == pytest.approx(base.b2, rel=1e-6, abs=1e-9)
    assert moved.k2 == pytest.approx(scale ** 2 * base.k2, rel=1e-6)

def test_moment_index_two_point_data():
    values: ndarray = np.column_stack([np.tile([1.0, -1.0], 5), np.arange(10.0)])
    data: DataMatrix = DataMatrix(values)
    assert moment_index(data, UnitDirection(np.array([1.0, 0.0]))) == pytest.approx(5.0 / 3.0)

@settings(max_examples=30, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2 ** 16))
def test_moment_index_is_even_and_rotation_invariant(seed):
    prng = np.random.default_rng(seed)
    data: DataMatrix = _random_data(25, 3, seed)
    h: UnitDirection = UnitDirection.from_vector(prng.standard_normal(3))
    rotation: ndarray = special_ortho_group.rvs(3, random_state=seed)
    value: float = moment_index(data, h)
    assert 0.0 <= value
    assert moment_index(data, UnitDirection(-h.components)) == pytest.approx(value, rel=1e-12)
    rotated: DataMatrix = DataMatrix(data.values @ rotation.T)
    rotated_h: UnitDirection = UnitDirection.from_vector(rotation @ h.components)
    assert moment_index(rotated, rotated_h) == pytest.approx(value, rel=1e-10)

@pytest.mark.parametrize("seed", range(10))
def test_gradient_matches_finite_differences(seed):
    data: DataMatrix = _random_data(50, 3, seed)
    h: UnitDirection = UnitDirection.from_vector(np.random.default_rng(100 + seed).standard_normal(3))
    analytic: ndarray = moment_index_gradient(data, h)
    numeric: ndarray = _numeric_tangent_gradient(data, h)
    assert np.linalg.norm(analytic - numeric) <= 1e-5 * max(1.0, np.linalg.norm(numeric))
    assert abs(np.dot(analytic, h.components)) < 1e-10

def test_gradient_is_odd_in_h():
    data: DataMatrix = _random_data(40, 4, 7)
    h: UnitDirection = UnitDirection.from_vector([0.3, -0.2, 0.9, 0.1])
    assert np.allclose(
        moment_index_gradient(data, UnitDirection(-h.components)),
        -moment_index_gradient(data, h), atol=1e-12
    )

@pytest.mark.parametrize("estimator", ["moment", "kstat"])
def test_moment_tensors_agree_with_data_path(estimator):
    data: DataMatrix = _random_data(60, 3, 11)
    tensors: MomentTensors = MomentTensors.from_data(data, estimator)
    prng = np.random.default_rng(12)
    for _ in range(5):
        h: UnitDirection = UnitDirection.from_vector(prng.standard_normal(3))
        value, grad = tensors.index_and_gradient(h)
        assert value == pytest.approx(moment_index(data, h, estimator), rel=1e-10)
        assert tensors.index(h) == pytest.approx(value, rel=1e-10)
        assert np.allclose(grad, moment_index_gradient(data, h, estimator), rtol=1e-8, atol=1e-10)

def test_moment_tensors_detect_degenerate_direction():
    values: ndarray = np.column_stack([np.zeros(10), np.arange(10.0)])
    tensors: MomentTensors = MomentTensors.from_data(DataMatrix(values))
    with pytest.raises(DegenerateSampleError):
        tensors.index_on_grid(np.array([[1.0, 0.0], [0.0, 1.0]]))

def test_normal_data_has_small_skewness_and_kurtosis():
    n: int = 100000
    z: ndarray = np.random.default_rng(5).standard_normal(n)
    cumulants = sample_cumulants(ProjectedSample(z))
    assert abs(cumulants.b1) < 3.0 * math.sqrt(6.0 / n)
    assert abs(cumulants.b2) < 3.0 * math.sqrt(24.0 / n)
