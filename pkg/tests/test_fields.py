from cumulants import UnitDirection
from fields import FieldCoefficients
from fields import covariance_closed_form
from fields import embed
from fields import eval_Z
from fields import eval_Z_angle
from fields import field_index_and_gradient
from fields import field_index_on_grid
from fields import manifold_inner
from fields import rotate_coefficients
from fields import sample_coefficients
import math
import numpy as np
from numpy import ndarray
import pytest
from scipy.stats import ks_2samp
from scipy.stats import special_ortho_group
from sphere_opts import OptimizerConfig
from sphere_opts import SphereOptimizer
from sphere_opts import field_objective

def _indicator(q: int, order: int, index: tuple[int, ...]) -> ndarray:
    tensor: ndarray = np.zeros((q,) * order)
    tensor[index] = 1.0
    return tensor.ravel()

def _random_direction(q: int, prng) -> UnitDirection:
    return UnitDirection.from_vector(prng.standard_normal(q))

def test_sample_coefficients_length_and_determinism():
    first: FieldCoefficients = sample_coefficients(2, np.random.default_rng(1))
    second: FieldCoefficients = sample_coefficients(2, np.random.default_rng(1))
    assert first.vector.shape == (24,)
    assert np.array_equal(first.vector, second.vector)
    with pytest.raises(ValueError):
        sample_coefficients(1, np.random.default_rng(1))

def test_sample_coefficients_are_standard_normal():
    prng = np.random.default_rng(2)
    draws: ndarray = np.concatenate([sample_coefficients(3, prng).vector for _ in range(1000)])
    n: int = len(draws)
    assert abs(np.mean(draws)) < 3.0 / math.sqrt(n)
    assert abs(np.var(draws) - 1.0) < 3.0 * math.sqrt(2.0 / n)

def test_coefficients_reject_wrong_lengths():
    with pytest.raises(ValueError):
        FieldCoefficients(q=2, xi1=np.zeros(8), xi2=np.zeros(15))

def test_eval_Z_basis_contractions():
    coeffs: FieldCoefficients = FieldCoefficients(q=2, xi1=_indicator(2, 3, (0, 0, 0)), xi2=np.zeros(16))
    value = eval_Z(coeffs, UnitDirection(np.array([1.0, 0.0])))
    assert (value.z1, value.z2, value.i_value) == (1.0, 0.0, 1.0)
    diagonal = eval_Z(coeffs, UnitDirection.from_vector([1.0, 1.0]))
    assert diagonal.z1 == pytest.approx(2.0 ** -1.5, rel=1e-14)
    zero = eval_Z(FieldCoefficients(q=2, xi1=np.zeros(8), xi2=np.zeros(16)), UnitDirection.from_vector([1.0, 2.0]))
    assert (zero.z1, zero.z2, zero.i_value) == (0.0, 0.0, 0.0)

def test_eval_Z_rejects_dimension_mismatch():
    coeffs: FieldCoefficients = sample_coefficients(2, np.random.default_rng(0))
    with pytest.raises(ValueError):
        eval_Z(coeffs, UnitDirection(np.array([1.0, 0.0, 0.0])))

def test_eval_Z_angle_endpoints_and_maximum():
    prng = np.random.default_rng(3)
    coeffs: FieldCoefficients = sample_coefficients(3, prng)
    h: UnitDirection = _random_direction(3, prng)
    value = eval_Z(coeffs, h)
    assert eval_Z_angle(coeffs, h, 0.0) == pytest.approx(value.z1)
    assert eval_Z_angle(coeffs, h, 0.5 * math.pi) == pytest.approx(value.z2)
    # extremal angle of the half-range, signed by z1
    z1, z2 = abs(value.z1), value.z2 if 0 < value.z1 else -value.z2
    theta_star: float = math.atan2(z2, z1)
    signed: float = eval_Z_angle(coeffs, h, theta_star)
    assert abs(signed) == pytest.approx(math.sqrt(value.i_value), rel=1e-12)
    with pytest.raises(ValueError):
        eval_Z_angle(coeffs, h, -0.5 * math.pi)

def test_field_symmetry_under_antipodal_map():
    prng = np.random.default_rng(4)
    coeffs: FieldCoefficients = sample_coefficients(3, prng)
    h: UnitDirection = _random_direction(3, prng)
    value = eval_Z(coeffs, h)
    flipped = eval_Z(coeffs, UnitDirection(-h.components))
    assert flipped.z1 == pytest.approx(-value.z1, rel=1e-12)
    assert flipped.z2 == pytest.approx(value.z2, rel=1e-12)
    assert flipped.i_value == pytest.approx(value.i_value, rel=1e-12)

def test_embedding_is_unit_and_matches_field():
    prng = np.random.default_rng(5)
    for _ in range(1000):
        q: int = int(prng.integers(2, 5))
        h: UnitDirection = _random_direction(q, prng)
        theta: float = float(prng.uniform(-0.5 * math.pi + 1e-9, 0.5 * math.pi))
        point = embed(h, theta)
        assert abs(np.linalg.norm(point.embedding) - 1.0) < 1e-12
    coeffs: FieldCoefficients = sample_coefficients(3, prng)
    h = _random_direction(3, prng)
    assert float(embed(h, 0.4).embedding @ coeffs.vector) == pytest.approx(eval_Z_angle(coeffs, h, 0.4), abs=1e-12)

def test_embed_first_basis_point():
    point = embed(UnitDirection(np.array([1.0, 0.0])), 0.0)
    assert point.embedding.shape == (24,)
    assert point.embedding[0] == 1.0
    assert np.count_nonzero(point.embedding) == 1

def test_manifold_inner_cases():
    prng = np.random.default_rng(6)
    h: UnitDirection = _random_direction(3, prng)
    orthogonal: UnitDirection = UnitDirection.from_vector(np.cross(h.components, prng.standard_normal(3)))
    assert manifold_inner(embed(h, 0.3), embed(h, 0.3)) == pytest.approx(1.0)
    assert manifold_inner(embed(h, 0.3), embed(orthogonal, -1.1)) == pytest.approx(0.0, abs=1e-15)
    assert manifold_inner(embed(h, 0.3), embed(UnitDirection(-h.components), -0.3)) == pytest.approx(-1.0)

def test_manifold_inner_matches_closed_form():
    prng = np.random.default_rng(7)
    for _ in range(50):
        h: UnitDirection = _random_direction(4, prng)
        h_tilde: UnitDirection = _random_direction(4, prng)
        theta, theta_tilde = prng.uniform(-1.5, 1.5, 2)
        psi: float = math.acos(float(np.clip(h.components @ h_tilde.components, -1.0, 1.0)))
        assert manifold_inner(embed(h, theta), embed(h_tilde, theta_tilde)) == pytest.approx(
            covariance_closed_form(psi, theta, theta_tilde), abs=1e-12
        )

def test_empirical_covariance_matches_manifold_inner():
    prng = np.random.default_rng(8)
    x = embed(UnitDirection.from_vector([1.0, 0.5]), 0.3)
    y = embed(UnitDirection.from_vector([0.2, 1.0]), -0.7)
    draws: ndarray = prng.standard_normal((100000, 24))
    products: ndarray = (draws @ x.embedding) * (draws @ y.embedding)
    se: float = float(np.std(products) / math.sqrt(len(products)))
    assert abs(np.mean(products) - manifold_inner(x, y)) < 3.0 * se

def test_index_gradient_matches_finite_differences():
    prng = np.random.default_rng(9)
    coeffs: FieldCoefficients = sample_coefficients(3, prng)
    h: UnitDirection = _random_direction(3, prng)
    _, grad = field_index_and_gradient(coeffs, h)
    numeric: ndarray = np.zeros(3)
    step: float = 1e-6
    for i in range(3):
        shift: ndarray = np.zeros(3)
        shift[i] = step
        # normalizing the perturbed point gives the tangent gradient directly
        plus: float = eval_Z(coeffs, UnitDirection.from_vector(h.components + shift)).i_value
        minus: float = eval_Z(coeffs, UnitDirection.from_vector(h.components - shift)).i_value
        numeric[i] = (plus - minus) / (2.0 * step)
    numeric -= np.dot(numeric, h.components) * h.components
    assert np.allclose(grad, numeric, atol=1e-6)

def test_index_on_grid_matches_pointwise():
    prng = np.random.default_rng(10)
    coeffs: FieldCoefficients = sample_coefficients(2, prng)
    angles: ndarray = np.linspace(0.0, math.pi, 17)
    directions: ndarray = np.column_stack([np.cos(angles), np.sin(angles)])
    grid: ndarray = field_index_on_grid(coeffs, directions)
    pointwise: list[float] = [eval_Z(coeffs, UnitDirection(direction)).i_value for direction in directions]
    assert np.allclose(grid, pointwise, rtol=1e-12, atol=1e-14)

def test_rotated_coefficients_move_the_field():
    prng = np.random.default_rng(11)
    coeffs: FieldCoefficients = sample_coefficients(3, prng)
    rotation: ndarray = special_ortho_group.rvs(3, random_state=12)
    rotated: FieldCoefficients = rotate_coefficients(coeffs, rotation)
    h: UnitDirection = _random_direction(3, prng)
    moved = eval_Z(rotated, UnitDirection.from_vector(rotation @ h.components))
    original = eval_Z(coeffs, h)
    assert moved.z1 == pytest.approx(original.z1, rel=1e-10)
    assert moved.z2 == pytest.approx(original.z2, rel=1e-10)

@pytest.mark.slow
@pytest.mark.parametrize("q", [2, 3])
def test_max_index_distribution_is_rotation_invariant(q):
    reps: int = 400 if q == 2 else 150
    rotation: ndarray = special_ortho_group.rvs(q, random_state=21)
    optimizer: SphereOptimizer = SphereOptimizer(OptimizerConfig(seed=3))
    plain_prng = np.random.default_rng(31)
    rotated_prng = np.random.default_rng(32)
    plain: list[float] = [
        optimizer.optimize(field_objective(sample_coefficients(q, plain_prng))).value for _ in range(reps)
    ]
    rotated: list[float] = [
        optimizer.optimize(
            field_objective(rotate_coefficients(sample_coefficients(q, rotated_prng), rotation))
        ).value for _ in range(reps)
    ]
    assert ks_2samp(plain, rotated).pvalue > 0.01

@pytest.mark.slow
def test_index_at_fixed_direction_is_rotation_invariant():
    reps: int = 2000
    rotation: ndarray = special_ortho_group.rvs(3, random_state=22)
    h: UnitDirection = UnitDirection(np.array([1.0, 0.0, 0.0]))
    plain_prng = np.random.default_rng(41)
    rotated_prng = np.random.default_rng(42)
    plain: list[float] = [eval_Z(sample_coefficients(3, plain_prng), h).i_value for _ in range(reps)]
    rotated: list[float] = [
        eval_Z(rotate_coefficients(sample_coefficients(3, rotated_prng), rotation), h).i_value
        for _ in range(reps)
    ]
    assert ks_2samp(plain, rotated).pvalue > 0.01
