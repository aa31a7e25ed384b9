from dataclasses import dataclass
from dataclasses import field
import numpy as np
from numpy import ndarray
from typing import Literal

Estimator = Literal["moment", "kstat"]

class DegenerateSampleError(ValueError):
    """Raised when the projected sample has zero variance."""

@dataclass(frozen=True)
class DataMatrix:
    """DataMatrix class.

    n x q observations. Row t is the observation x_t.
    """
    values: ndarray

    def __post_init__(self) -> None:
        values: ndarray = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError(f"data matrix must be 2 dimensional. shape={values.shape}")
        n, q = values.shape
        if n < 5:
            raise ValueError(f"data matrix needs at least 5 rows. n={n}")
        if q < 2:
            raise ValueError(f"data matrix needs at least 2 columns. q={q}")
        if not np.all(np.isfinite(values)):
            raise ValueError("data matrix contains non-finite entries.")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def q(self) -> int:
        return self.values.shape[1]

@dataclass(frozen=True)
class UnitDirection:
    """UnitDirection class.

    A point h of S^{q-1}. ||h|| = 1 within 1e-12.
    """
    components: ndarray

    def __post_init__(self) -> None:
        components: ndarray = np.array(self.components, dtype=np.float64).ravel()
        norm: float = float(np.linalg.norm(components))
        if not abs(norm - 1.0) <= 1e-12:
            raise ValueError(f"direction must have unit norm. norm={norm}")
        components.setflags(write=False)
        object.__setattr__(self, "components", components)

    @classmethod
    def from_vector(cls, vector: ndarray | list[float]) -> "UnitDirection":
        """Normalize a nonzero vector onto the sphere."""
        vector = np.asarray(vector, dtype=np.float64).ravel()
        norm: float = float(np.linalg.norm(vector))
        if not norm > 0:
            raise ValueError("cannot normalize the zero vector.")
        return cls(vector / norm)

    @property
    def q(self) -> int:
        return self.components.shape[0]

    def canonical(self) -> "UnitDirection":
        """Representative of {h, -h} whose first nonzero component is positive."""
        nonzero: ndarray = np.flatnonzero(self.components)
        if 0 < len(nonzero) and self.components[nonzero[0]] < 0:
            return UnitDirection(-self.components)
        return self

@dataclass(frozen=True)
class ProjectedSample:
    """Projected sample z_t = <x_t, h>."""
    z: ndarray

    def __post_init__(self) -> None:
        z: ndarray = np.array(self.z, dtype=np.float64).ravel()
        z.setflags(write=False)
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return self.z.shape[0]

@dataclass(frozen=True)
class CumulantSet:
    """Second to fourth sample cumulants with standardized skewness b1 and kurtosis b2."""
    k2: float
    k3: float
    k4: float
    b1: float
    b2: float

def project(data: DataMatrix, h: UnitDirection) -> ProjectedSample:
    """z_t = sum_j data[t][j] h[j]."""
    if data.q != h.q:
        raise ValueError(f"dimension mismatch. data.q={data.q} h.q={h.q}")
    return ProjectedSample(data.values @ h.components)

def cumulant_coefficients(
    n: int,
    estimator: Estimator = "moment"
) -> tuple[float, float, float, float]:
    """Coefficients (a2, a3, a4, c4) with k2 = a2 m2, k3 = a3 m3, k4 = a4 m4 + c4 m2^2.

    "moment" is the plug-in estimator k2=m2, k3=m3, k4=m4-3m2^2.
    "kstat" gives the unbiased k-statistics.
    """
    if estimator == "moment":
        if n < 3:
            raise ValueError(f"at least 3 observations are needed. n={n}")
        return 1.0, 1.0, 1.0, -3.0
    elif estimator == "kstat":
        if n < 4:
            raise ValueError(f"k-statistics need at least 4 observations. n={n}")
        a2: float = n / (n - 1)
        a3: float = n ** 2 / ((n - 1) * (n - 2))
        a4: float = n ** 2 * (n + 1) / ((n - 1) * (n - 2) * (n - 3))
        c4: float = -3.0 * n ** 2 / ((n - 2) * (n - 3))
        return a2, a3, a4, c4
    else:
        raise ValueError(f"unknown estimator. estimator={estimator}")

def _check_variance(m2: float, scale: float) -> None:
    if not m2 > (1e-12 * scale) ** 2:
        raise DegenerateSampleError(
            f"projected sample has zero variance. m2={m2}"
        )

def _cumulants_from_moments(
    m2: float,
    m3: float,
    m4: float,
    coefficients: tuple[float, float, float, float]
) -> CumulantSet:
    a2, a3, a4, c4 = coefficients
    k2: float = a2 * m2
    k3: float = a3 * m3
    k4: float = a4 * m4 + c4 * m2 ** 2
    return CumulantSet(
        k2=k2, k3=k3, k4=k4, b1=k3 / k2 ** 1.5, b2=k4 / k2 ** 2
    )

def sample_cumulants(
    z: ProjectedSample,
    estimator: Estimator = "moment"
) -> CumulantSet:
    """Sample cumulants of a projected sample.

    Central moments are m_r = (1/n) sum (z_t - mean(z))^r.

    Args:
        z (ProjectedSample): projected sample.
        estimator (str): "moment" or "kstat".

    Returns:
        cumulants (CumulantSet): k2, k3, k4, b1 = k3/k2^{3/2}, b2 = k4/k2^2.
    """
    coefficients = cumulant_coefficients(z.n, estimator)
    centered: ndarray = z.z - np.mean(z.z)
    m2: float = float(np.mean(centered ** 2))
    _check_variance(m2, float(np.max(np.abs(z.z))))
    m3: float = float(np.mean(centered ** 3))
    m4: float = float(np.mean(centered ** 4))
    return _cumulants_from_moments(m2, m3, m4, coefficients)

def index_from_cumulants(n: int, cumulants: CumulantSet) -> float:
    """I_n = (n/6) b1^2 + (n/24) b2^2."""
    return n / 6.0 * cumulants.b1 ** 2 + n / 24.0 * cumulants.b2 ** 2

def moment_index(
    data: DataMatrix,
    h: UnitDirection,
    estimator: Estimator = "moment"
) -> float:
    """Moment index I_n(h) of the data projected onto h."""
    z: ProjectedSample = project(data, h)
    return index_from_cumulants(data.n, sample_cumulants(z, estimator))

def _index_gradient_from_moments(
    n: int,
    moments: tuple[float, float, float],
    moment_grads: tuple[ndarray, ndarray, ndarray],
    coefficients: tuple[float, float, float, float]
) -> tuple[float, ndarray]:
    """Chain rule from (m2, m3, m4) and their Euclidean gradients to I_n and its gradient."""
    m2, m3, m4 = moments
    dm2, dm3, dm4 = moment_grads
    a2, a3, a4, c4 = coefficients
    cumulants: CumulantSet = _cumulants_from_moments(m2, m3, m4, coefficients)
    k2, k3, k4 = cumulants.k2, cumulants.k3, cumulants.k4
    dk2: ndarray = a2 * dm2
    dk3: ndarray = a3 * dm3
    dk4: ndarray = a4 * dm4 + 2.0 * c4 * m2 * dm2
    db1: ndarray = dk3 / k2 ** 1.5 - 1.5 * k3 * dk2 / k2 ** 2.5
    db2: ndarray = dk4 / k2 ** 2 - 2.0 * k4 * dk2 / k2 ** 3
    value: float = index_from_cumulants(n, cumulants)
    grad: ndarray = n / 3.0 * cumulants.b1 * db1 + n / 12.0 * cumulants.b2 * db2
    return value, grad

def tangent_projection(h: ndarray, vector: ndarray) -> ndarray:
    """(I - hh') vector."""
    return vector - np.dot(h, vector) * h

def moment_index_gradient(
    data: DataMatrix,
    h: UnitDirection,
    estimator: Estimator = "moment"
) -> ndarray:
    """Gradient of I_n at h projected onto the tangent space of S^{q-1}.

    m_r(h) = (1/n) sum_t (c_t' h)^r with centered rows c_t, so
    grad m_r = (r/n) sum_t (c_t' h)^{r-1} c_t.

    Args:
        data (DataMatrix): observations.
        h (UnitDirection): direction.
        estimator (str): "moment" or "kstat".

    Returns:
        grad (ndarray): length-q tangent gradient (I - hh') grad I_n(h).
    """
    if data.q != h.q:
        raise ValueError(f"dimension mismatch. data.q={data.q} h.q={h.q}")
    coefficients = cumulant_coefficients(data.n, estimator)
    centered: ndarray = data.values - np.mean(data.values, axis=0)
    z: ndarray = centered @ h.components
    m2: float = float(np.mean(z ** 2))
    _check_variance(m2, float(np.max(np.abs(data.values @ h.components))))
    moments: tuple[float, float, float] = (m2, float(np.mean(z ** 3)), float(np.mean(z ** 4)))
    moment_grads: tuple[ndarray, ndarray, ndarray] = (
        2.0 * centered.T @ z / data.n,
        3.0 * centered.T @ z ** 2 / data.n,
        4.0 * centered.T @ z ** 3 / data.n,
    )
    _, grad = _index_gradient_from_moments(data.n, moments, moment_grads, coefficients)
    return tangent_projection(h.components, grad)

@dataclass(frozen=True)
class MomentTensors:
    """MomentTensors class.

    Central moment tensors of the data so that for any direction h
        m2(h) = M2(h,h), m3(h) = M3(h,h,h), m4(h) = M4(h,h,h,h).
    Evaluation costs O(q^4) per direction independently of n.
    """
    n: int
    M2: ndarray
    M3: ndarray
    M4: ndarray
    estimator: Estimator = "moment"
    scale: float = field(default=1.0)

    @classmethod
    def from_data(
        cls,
        data: DataMatrix,
        estimator: Estimator = "moment"
    ) -> "MomentTensors":
        cumulant_coefficients(data.n, estimator)
        centered: ndarray = data.values - np.mean(data.values, axis=0)
        n: int = data.n
        M2: ndarray = np.einsum("ti,tj->ij", centered, centered) / n
        M3: ndarray = np.einsum("ti,tj,tk->ijk", centered, centered, centered) / n
        M4: ndarray = np.einsum(
            "ti,tj,tk,tl->ijkl", centered, centered, centered, centered, optimize=True
        ) / n
        scale: float = float(np.max(np.linalg.norm(data.values, axis=1)))
        return cls(n=n, M2=M2, M3=M3, M4=M4, estimator=estimator, scale=scale)

    @property
    def q(self) -> int:
        return self.M2.shape[0]

    def moments_on_grid(self, directions: ndarray) -> tuple[ndarray, ndarray, ndarray]:
        """(m2, m3, m4) for each row of directions (G x q)."""
        m2: ndarray = np.einsum("gi,ij,gj->g", directions, self.M2, directions)
        m3: ndarray = np.einsum(
            "gi,gj,gk,ijk->g", directions, directions, directions, self.M3, optimize=True
        )
        m4: ndarray = np.einsum(
            "gi,gj,gk,gl,ijkl->g", directions, directions, directions, directions, self.M4,
            optimize=True
        )
        return m2, m3, m4

    def index_on_grid(self, directions: ndarray) -> ndarray:
        """I_n for each row of directions (G x q). Rows need not be unit vectors."""
        a2, a3, a4, c4 = cumulant_coefficients(self.n, self.estimator)
        m2, m3, m4 = self.moments_on_grid(directions)
        norms2: ndarray = np.sum(directions ** 2, axis=1)
        if np.any(m2 <= (1e-12 * self.scale) ** 2 * norms2):
            raise DegenerateSampleError("projected sample has zero variance on the grid.")
        k2: ndarray = a2 * m2
        b1: ndarray = a3 * m3 / k2 ** 1.5
        b2: ndarray = (a4 * m4 + c4 * m2 ** 2) / k2 ** 2
        return self.n / 6.0 * b1 ** 2 + self.n / 24.0 * b2 ** 2

    def index(self, h: UnitDirection) -> float:
        return float(self.index_on_grid(h.components[None, :])[0])

    def index_and_gradient(self, h: UnitDirection) -> tuple[float, ndarray]:
        """I_n(h) and its tangent gradient."""
        hc: ndarray = h.components
        m2: float = float(hc @ self.M2 @ hc)
        _check_variance(m2, self.scale)
        m3: float = float(np.einsum("ijk,i,j,k->", self.M3, hc, hc, hc))
        m4: float = float(np.einsum("ijkl,i,j,k,l->", self.M4, hc, hc, hc, hc))
        moment_grads: tuple[ndarray, ndarray, ndarray] = (
            2.0 * self.M2 @ hc,
            3.0 * np.einsum("ijk,j,k->i", self.M3, hc, hc),
            4.0 * np.einsum("ijkl,j,k,l->i", self.M4, hc, hc, hc),
        )
        value, grad = _index_gradient_from_moments(
            self.n, (m2, m3, m4), moment_grads,
            cumulant_coefficients(self.n, self.estimator)
        )
        return value, tangent_projection(hc, grad)
