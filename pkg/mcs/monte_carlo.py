from cumulants import CumulantSet
from cumulants import DataMatrix
from cumulants import DegenerateSampleError
from cumulants import ProjectedSample
from cumulants import UnitDirection
from cumulants import sample_cumulants
from dataclasses import dataclass
from dataclasses import field
from fields import FieldCoefficients
from fields import field_index_on_grid
from fields import sample_coefficients
import math
from multiprocessing import Pool
import numpy as np
from numpy import ndarray
from numpy.random import Generator
from numpy.random import SeedSequence
import pandas as pd
from pandas import DataFrame
from rich.console import Console
from sphere_opts import OptimizerConfig
from sphere_opts import OptResult
from sphere_opts import SphereOptimizer
from sphere_opts import field_objective
from sphere_opts import half_circle_directions
from sphere_opts import index_objective
from tqdm import tqdm
from tubes import critical_radius_constants
from tubes import tube_volume_fraction
from typing import Any
from typing import Callable
import warnings

console: Console = Console(stderr=True)

@dataclass(frozen=True)
class McConfig:
    """McConfig class.

    Attributes:
        reps (int): number of replications.
        seed (int): root seed. Replication r uses the stream SeedSequence(seed, spawn_key=(r,)).
        workers (int): number of worker processes. Results do not depend on it.
        optimizer (OptimizerConfig): passed to the sphere optimizer of each replication.
        block_size (int): replications per work item. Blocks are aligned to replication indices.
    """
    reps: int = 10000
    seed: int = 42
    workers: int = 1
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    block_size: int = 256

    def __post_init__(self) -> None:
        if self.reps < 1:
            raise ValueError(f"reps must be positive. reps={self.reps}")
        if self.workers < 1:
            raise ValueError(f"workers must be positive. workers={self.workers}")
        if self.block_size < 1:
            raise ValueError(f"block_size must be positive. block_size={self.block_size}")
        if not (0 <= self.seed < 2 ** 64):
            raise ValueError(f"seed must be a 64-bit unsigned integer. seed={self.seed}")

@dataclass(frozen=True)
class TailCurve:
    """Empirical tail probabilities p(c) = #{samples >= c} / reps with binomial standard errors."""
    thresholds: ndarray
    probabilities: ndarray
    reps: int
    se: ndarray

    def to_frame(self) -> DataFrame:
        return pd.DataFrame(
            {"threshold": self.thresholds, "p_hat": self.probabilities, "se": self.se}
        )

@dataclass(frozen=True)
class MaxSample:
    """Per-replication maxima, indexed by replication.

    Attributes:
        values (ndarray): max of the index for each replication.
        converged (ndarray): whether the optimizer converged in each replication.
        resampled (int): number of degenerate samples that were redrawn.
    """
    values: ndarray
    converged: ndarray
    resampled: int = 0

    @property
    def num_non_converged(self) -> int:
        return int(np.sum(~self.converged))

@dataclass(frozen=True)
class TubeVolumeEstimate:
    """Monte Carlo tube volume fraction with the formula value.

    z_score uses the binomial standard error at the formula value, so it stays
    defined when no sampled point falls inside a very thin tube.
    """
    q: int
    theta: float
    fraction: float
    se: float
    formula: float
    z_score: float
    reps: int
    flagged: int

@dataclass(frozen=True)
class CltMarginals:
    var_b1_scaled: float
    var_b2_scaled: float
    mean_b1_scaled: float
    mean_b2_scaled: float
    reps: int

def rep_generator(seed: int, rep_index: int) -> Generator:
    """Random stream of one replication, independent of scheduling."""
    return np.random.default_rng(SeedSequence(entropy=seed, spawn_key=(rep_index,)))

def _limit_rep(rng: Generator, params: dict[str, Any]) -> tuple[float, bool, int]:
    coeffs: FieldCoefficients = sample_coefficients(params["q"], rng)
    result: OptResult = SphereOptimizer(params["optimizer"]).optimize(field_objective(coeffs))
    return result.value, result.converged, 0

def _finite_rep(rng: Generator, params: dict[str, Any]) -> tuple[float, bool, int]:
    resampled: int = 0
    while True:
        data: ndarray = rng.standard_normal((params["n"], params["q"]))
        try:
            result: OptResult = SphereOptimizer(params["optimizer"]).optimize(
                index_objective(DataMatrix(data), params["estimator"])
            )
        except DegenerateSampleError:
            resampled += 1
            continue
        return result.value, result.converged, resampled

def _tube_rep(rng: Generator, params: dict[str, Any]) -> tuple[float, bool, int]:
    """Whether a uniform point y of S^{p-1} lies in the tube of radius theta around M.

    With y read as field coefficients, max over (h, theta') of <y, embed(h, theta')>
    is sqrt(max_h I_y(h)), so y is inside iff max_h I_y(h) >= cos^2 theta.
    q = 2 decides on a 1024-point half-circle grid and refines only points near
    the boundary. Returns (inside, converged, 0).
    """
    q: int = params["q"]
    y: ndarray = rng.standard_normal(q ** 3 + q ** 4)
    y /= np.linalg.norm(y)
    coeffs: FieldCoefficients = FieldCoefficients(q=q, xi1=y[:q ** 3], xi2=y[q ** 3:])
    threshold: float = params["cos2_theta"]
    optimizer: SphereOptimizer = SphereOptimizer(params["optimizer"])
    if q == 2:
        _, directions = half_circle_directions(1024)
        grid_max: float = float(np.max(field_index_on_grid(coeffs, directions)))
        if grid_max < threshold * (1.0 - 1e-3):
            return 0.0, True, 0
        result: OptResult = optimizer.refine_q2(
            field_objective(coeffs), optimizer.grid_search_q2(field_objective(coeffs), 1024), 1024
        )
    else:
        result: OptResult = optimizer.maximize(field_objective(coeffs))
    return float(threshold <= result.value), result.converged, 0

def _clt_rep(rng: Generator, params: dict[str, Any]) -> tuple[float, float, int]:
    data: ndarray = rng.standard_normal((params["n"], params["q"]))
    cumulants: CumulantSet = sample_cumulants(ProjectedSample(data @ params["h"]))
    sqrt_n: float = math.sqrt(params["n"])
    return sqrt_n * cumulants.b1, sqrt_n * cumulants.b2, 0

_KERNELS: dict[str, Callable[[Generator, dict[str, Any]], tuple[Any, Any, int]]] = {
    "limit": _limit_rep,
    "finite": _finite_rep,
    "tube": _tube_rep,
    "clt": _clt_rep,
}

def _run_block(task: tuple[str, dict[str, Any], int, int, int]) -> list[tuple[Any, Any, int]]:
    """Run replications [start, stop) of one kernel. Module level so that worker processes can import it."""
    kind, params, seed, start, stop = task
    kernel = _KERNELS[kind]
    return [kernel(rep_generator(seed, rep_index), params) for rep_index in range(start, stop)]

def empirical_tail(samples: ndarray, thresholds: ndarray | list[float]) -> TailCurve:
    """Empirical tail curve of samples at the given thresholds.

    Args:
        samples (ndarray): nonempty sample vector.
        thresholds (ndarray): thresholds c. Sorted in ascending order on output.

    Returns:
        curve (TailCurve): p(c) = #{samples >= c}/reps with se = sqrt(p(1-p)/reps).
    """
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if len(samples) == 0:
        raise ValueError("samples must be nonempty.")
    thresholds = np.sort(np.asarray(thresholds, dtype=np.float64).ravel())
    reps: int = len(samples)
    sorted_samples: ndarray = np.sort(samples)
    counts: ndarray = reps - np.searchsorted(sorted_samples, thresholds, side="left")
    probabilities: ndarray = counts / reps
    se: ndarray = np.sqrt(probabilities * (1.0 - probabilities) / reps)
    return TailCurve(thresholds=thresholds, probabilities=probabilities, reps=reps, se=se)

class MonteCarloSimulator:
    """MonteCarloSimulator class.

    MonteCarloSimulator runs replications of
        - the max of the limiting index field I(h),
        - the max of the sample index I_n(h) under Gaussian data,
        - uniform points on S^{p-1} tested against the tube around M,
        - the scaled sample skewness and kurtosis along a fixed direction.
    Replications are split into blocks aligned to replication indices and merged
    by block index, so outputs are identical for any number of workers.
    """
    def __init__(self, config: McConfig, show_process: bool = False) -> None:
        """initialization.

        Args:
            config (McConfig): Monte Carlo configuration.
            show_process (bool): whether to print process.
        """
        self.config: McConfig = config
        self.show_process: bool = show_process

    def _blocks(self, kind: str, params: dict[str, Any]) -> list[tuple[str, dict[str, Any], int, int, int]]:
        size: int = self.config.block_size
        return [
            (kind, params, self.config.seed, start, min(start + size, self.config.reps))
            for start in range(0, self.config.reps, size)
        ]

    def _run(self, kind: str, params: dict[str, Any]) -> list[tuple[Any, Any, int]]:
        tasks = self._blocks(kind, params)
        if self.show_process:
            console.print(f"[green]=={kind} replications==[green]")
            console.print(
                f"reps-> {self.config.reps} seed-> {self.config.seed} workers-> {self.config.workers}"
            )
        outputs: list[tuple[Any, Any, int]] = []
        if self.config.workers == 1:
            for task in tqdm(tasks, disable=not self.show_process):
                outputs.extend(_run_block(task))
        else:
            with Pool(processes=self.config.workers) as pool:
                for block in tqdm(
                    pool.imap(_run_block, tasks), total=len(tasks), disable=not self.show_process
                ):
                    outputs.extend(block)
        return outputs

    def _max_sample(self, outputs: list[tuple[Any, Any, int]], label: str) -> MaxSample:
        sample: MaxSample = MaxSample(
            values=np.array([value for value, _, _ in outputs], dtype=np.float64),
            converged=np.array([converged for _, converged, _ in outputs], dtype=bool),
            resampled=sum(resampled for _, _, resampled in outputs),
        )
        if 0 < sample.num_non_converged:
            warnings.warn(
                f"{label}: optimizer did not converge in {sample.num_non_converged} replications."
            )
        if 0 < sample.resampled:
            warnings.warn(f"{label}: {sample.resampled} degenerate samples were redrawn.")
        return sample

    def simulate_limit_max(self, q: int) -> MaxSample:
        """max_h I(h) for independent draws of the limiting field."""
        if q < 2:
            raise ValueError(f"q must be at least 2. q={q}")
        params: dict[str, Any] = {"q": q, "optimizer": self.config.optimizer}
        return self._max_sample(self._run("limit", params), "limit")

    def simulate_finite_max(self, q: int, n: int, estimator: str = "moment") -> MaxSample:
        """max_h I_n(h) for independent N_q(0, I) samples of size n."""
        if q < 2:
            raise ValueError(f"q must be at least 2. q={q}")
        if n < 5:
            raise ValueError(f"n must be at least 5. n={n}")
        params: dict[str, Any] = {
            "q": q, "n": n, "estimator": estimator, "optimizer": self.config.optimizer
        }
        return self._max_sample(self._run("finite", params), "finite")

    def empirical_tail(self, samples: ndarray, thresholds: ndarray | list[float]) -> TailCurve:
        return empirical_tail(samples, thresholds)

    def tube_volume_mc(self, q: int, theta: float) -> TubeVolumeEstimate:
        """Fraction of uniform points of S^{p-1} within geodesic distance theta of M.

        Args:
            q (int): dimension. p = q^3 + q^4.
            theta (float): tube radius in (0, theta_c].

        Returns:
            estimate (TubeVolumeEstimate): fraction, its standard error, the formula value,
                and the z-score of their difference.
        """
        theta_c: float = critical_radius_constants().theta_c
        if not (0.0 < theta <= theta_c):
            raise ValueError(f"theta must be in (0, theta_c={theta_c}]. theta={theta}")
        params: dict[str, Any] = {
            "q": q, "cos2_theta": math.cos(theta) ** 2, "optimizer": self.config.optimizer
        }
        outputs: list[tuple[Any, Any, int]] = self._run("tube", params)
        inside: ndarray = np.array([value for value, _, _ in outputs], dtype=np.float64)
        flagged: int = int(sum(not converged for _, converged, _ in outputs))
        if 0 < flagged:
            warnings.warn(
                f"tube: inner maximization did not converge for {flagged} points. counts may be conservative."
            )
        reps: int = len(inside)
        fraction: float = float(np.mean(inside))
        formula: float = tube_volume_fraction(q, theta)
        se: float = math.sqrt(fraction * (1.0 - fraction) / reps)
        formula_se: float = math.sqrt(formula * (1.0 - formula) / reps)
        z_score: float = (fraction - formula) / formula_se if 0 < formula_se else 0.0
        return TubeVolumeEstimate(
            q=q, theta=float(theta), fraction=fraction, se=se, formula=formula,
            z_score=z_score, reps=reps, flagged=flagged
        )

    def clt_marginal_check(self, q: int, h: UnitDirection, n: int) -> CltMarginals:
        """Sample variances of sqrt(n) b1 and sqrt(n) b2 along h. Targets are 3! = 6 and 4! = 24."""
        if h.q != q:
            raise ValueError(f"dimension mismatch. q={q} h.q={h.q}")
        if n < 5:
            raise ValueError(f"n must be at least 5. n={n}")
        params: dict[str, Any] = {"q": q, "n": n, "h": h.components}
        outputs: list[tuple[Any, Any, int]] = self._run("clt", params)
        b1: ndarray = np.array([b1 for b1, _, _ in outputs])
        b2: ndarray = np.array([b2 for _, b2, _ in outputs])
        return CltMarginals(
            var_b1_scaled=float(np.var(b1, ddof=1)), var_b2_scaled=float(np.var(b2, ddof=1)),
            mean_b1_scaled=float(np.mean(b1)), mean_b2_scaled=float(np.mean(b2)),
            reps=len(b1)
        )
