from cumulants import UnitDirection
from cumulants import tangent_projection
from dataclasses import dataclass
import math
import numpy as np
from numpy import ndarray
from numpy.random import Generator

HALF_PI: float = 0.5 * math.pi

@dataclass(frozen=True)
class FieldCoefficients:
    """FieldCoefficients class.

    One draw (xi1, xi2) of the limiting Gaussian field.
    xi1 has length q^3 and xi2 has length q^4. Both are laid out row-major
    lexicographic over (i,j,k) and (i,j,k,l), the same layout np.kron produces
    for h (x) h (x) h.
    """
    q: int
    xi1: ndarray
    xi2: ndarray

    def __post_init__(self) -> None:
        xi1: ndarray = np.array(self.xi1, dtype=np.float64).ravel()
        xi2: ndarray = np.array(self.xi2, dtype=np.float64).ravel()
        if xi1.shape[0] != self.q ** 3 or xi2.shape[0] != self.q ** 4:
            raise ValueError(
                f"coefficient lengths must be q^3 and q^4. q={self.q} len(xi1)={len(xi1)} len(xi2)={len(xi2)}"
            )
        if not (np.all(np.isfinite(xi1)) and np.all(np.isfinite(xi2))):
            raise ValueError("coefficients contain non-finite entries.")
        xi1.setflags(write=False)
        xi2.setflags(write=False)
        object.__setattr__(self, "xi1", xi1)
        object.__setattr__(self, "xi2", xi2)

    @property
    def tensor1(self) -> ndarray:
        return self.xi1.reshape((self.q,) * 3)

    @property
    def tensor2(self) -> ndarray:
        return self.xi2.reshape((self.q,) * 4)

    @property
    def vector(self) -> ndarray:
        """(xi1, xi2) as one length p = q^3 + q^4 vector."""
        return np.concatenate([self.xi1, self.xi2])

@dataclass(frozen=True)
class FieldValue:
    z1: float
    z2: float
    i_value: float

@dataclass(frozen=True)
class ManifoldPoint:
    """Point (cos theta h^{(x)3}, sin theta h^{(x)4}) of the index manifold M in R^p."""
    h: UnitDirection
    theta: float
    embedding: ndarray

def tensor_power(h: ndarray, order: int) -> ndarray:
    """h (x) h (x) ... (x) h with order factors, flattened row-major."""
    power: ndarray = h
    for _ in range(order - 1):
        power = np.kron(power, h)
    return power

def check_theta(theta: float) -> None:
    if not (-HALF_PI < theta <= HALF_PI):
        raise ValueError(f"theta must be in (-pi/2, pi/2]. theta={theta}")

def sample_coefficients(q: int, rng: Generator) -> FieldCoefficients:
    """Draw q^3 + q^4 iid standard normals.

    The first q^3 draws are xi1 and the following q^4 draws are xi2.
    """
    if q < 2:
        raise ValueError(f"q must be at least 2. q={q}")
    draws: ndarray = rng.standard_normal(q ** 3 + q ** 4)
    return FieldCoefficients(q=q, xi1=draws[:q ** 3], xi2=draws[q ** 3:])

def _check_dimension(coeffs: FieldCoefficients, h: UnitDirection) -> None:
    if coeffs.q != h.q:
        raise ValueError(f"dimension mismatch. coeffs.q={coeffs.q} h.q={h.q}")

def eval_Z(coeffs: FieldCoefficients, h: UnitDirection) -> FieldValue:
    """Z1(h) = <h^{(x)3}, xi1>, Z2(h) = <h^{(x)4}, xi2>, I(h) = Z1^2 + Z2^2."""
    _check_dimension(coeffs, h)
    hc: ndarray = h.components
    z1: float = float(np.einsum("ijk,i,j,k->", coeffs.tensor1, hc, hc, hc))
    z2: float = float(np.einsum("ijkl,i,j,k,l->", coeffs.tensor2, hc, hc, hc, hc))
    return FieldValue(z1=z1, z2=z2, i_value=z1 ** 2 + z2 ** 2)

def eval_Z_angle(coeffs: FieldCoefficients, h: UnitDirection, theta: float) -> float:
    """Z(h, theta) = cos theta Z1(h) + sin theta Z2(h)."""
    check_theta(theta)
    value: FieldValue = eval_Z(coeffs, h)
    return math.cos(theta) * value.z1 + math.sin(theta) * value.z2

def field_index_and_gradient(
    coeffs: FieldCoefficients,
    h: UnitDirection
) -> tuple[float, ndarray]:
    """I(h) and its gradient projected onto the tangent space at h.

    The coefficient tensors are not symmetric, so the derivative of a
    contraction collects one term per tensor slot.
    """
    _check_dimension(coeffs, h)
    hc: ndarray = h.components
    t1: ndarray = coeffs.tensor1
    t2: ndarray = coeffs.tensor2
    z1: float = float(np.einsum("ijk,i,j,k->", t1, hc, hc, hc))
    z2: float = float(np.einsum("ijkl,i,j,k,l->", t2, hc, hc, hc, hc))
    dz1: ndarray = np.einsum("ijk,j,k->i", t1, hc, hc) \
        + np.einsum("ijk,i,k->j", t1, hc, hc) \
        + np.einsum("ijk,i,j->k", t1, hc, hc)
    dz2: ndarray = np.einsum("ijkl,j,k,l->i", t2, hc, hc, hc) \
        + np.einsum("ijkl,i,k,l->j", t2, hc, hc, hc) \
        + np.einsum("ijkl,i,j,l->k", t2, hc, hc, hc) \
        + np.einsum("ijkl,i,j,k->l", t2, hc, hc, hc)
    grad: ndarray = 2.0 * z1 * dz1 + 2.0 * z2 * dz2
    return z1 ** 2 + z2 ** 2, tangent_projection(hc, grad)

def field_index_on_grid(coeffs: FieldCoefficients, directions: ndarray) -> ndarray:
    """I(h) for each row of directions (G x q)."""
    z1: ndarray = np.einsum(
        "ijk,gi,gj,gk->g", coeffs.tensor1, directions, directions, directions, optimize=True
    )
    z2: ndarray = np.einsum(
        "ijkl,gi,gj,gk,gl->g", coeffs.tensor2, directions, directions, directions, directions,
        optimize=True
    )
    return z1 ** 2 + z2 ** 2

def embed(h: UnitDirection, theta: float) -> ManifoldPoint:
    """Embedding (h, theta) -> (cos theta h^{(x)3}, sin theta h^{(x)4}) into R^{q^3+q^4}."""
    check_theta(theta)
    hc: ndarray = h.components
    embedding: ndarray = np.concatenate([
        math.cos(theta) * tensor_power(hc, 3),
        math.sin(theta) * tensor_power(hc, 4),
    ])
    embedding.setflags(write=False)
    return ManifoldPoint(h=h, theta=float(theta), embedding=embedding)

def manifold_inner(p1: ManifoldPoint, p2: ManifoldPoint) -> float:
    """<x, x~> in R^p."""
    if p1.h.q != p2.h.q:
        raise ValueError(f"dimension mismatch. q1={p1.h.q} q2={p2.h.q}")
    return float(p1.embedding @ p2.embedding)

def covariance_closed_form(
    psi: float | ndarray,
    theta: float | ndarray,
    theta_tilde: float | ndarray
) -> float | ndarray:
    """r(psi, theta, theta~) = cos theta cos theta~ cos^3 psi + sin theta sin theta~ cos^4 psi."""
    cos_psi = np.cos(psi)
    return np.cos(theta) * np.cos(theta_tilde) * cos_psi ** 3 \
        + np.sin(theta) * np.sin(theta_tilde) * cos_psi ** 4

def rotate_coefficients(coeffs: FieldCoefficients, rotation: ndarray) -> FieldCoefficients:
    """Coefficients of the field h -> I(Q'h) for an orthogonal matrix Q.

    Every tensor slot is multiplied by Q, so that eval_Z on the rotated
    coefficients at Qh equals eval_Z on the original coefficients at h.
    """
    q: int = coeffs.q
    if rotation.shape != (q, q):
        raise ValueError(f"rotation must be {q}x{q}. shape={rotation.shape}")
    t1: ndarray = np.einsum("ai,bj,ck,ijk->abc", rotation, rotation, rotation, coeffs.tensor1)
    t2: ndarray = np.einsum(
        "ai,bj,ck,dl,ijkl->abcd", rotation, rotation, rotation, rotation, coeffs.tensor2,
        optimize=True
    )
    return FieldCoefficients(q=q, xi1=t1.ravel(), xi2=t2.ravel())
