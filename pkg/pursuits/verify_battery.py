from cumulants import UnitDirection
from dataclasses import dataclass
from dataclasses import field
from geometry_verifiers import CriticalScanResult
from geometry_verifiers import curvature_check_q2
from geometry_verifiers import manifold_volume_numeric
from geometry_verifiers import metric_numeric
from geometry_verifiers import reduction_check
from geometry_verifiers import sup_fg_scan
from geometry_verifiers import weyl_invariant_numeric
import math
from mcs import McConfig
from mcs import MonteCarloSimulator
from mcs import empirical_tail
import numpy as np
from numpy import ndarray
from numpy.random import Generator
from rich.console import Console
from specfuns import HalfInt
from specfuns import chisq_upper
from specfuns import elliptic_boundary
from specfuns import elliptic_moment
from specfuns import elliptic_moment_quad
from specfuns import recurrence_residual
from specfuns import sphere_surface
from tubes import critical_radius_constants
from tubes import kappa_by_quadrature
from tubes import tail_approx
from tubes import tail_approx_q2
from tubes import tail_envelope
from tubes import tube_volume_fraction
from tubes import weyl_coefficients
from typing import Any
from typing import Callable

console: Console = Console(stderr=True)

SUITES: tuple[str, ...] = ("specfun", "geometry", "tube", "mc")

@dataclass(frozen=True)
class CheckRecord:
    name: str
    expected: Any
    got: Any
    tolerance: float
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name, "expected": self.expected, "got": self.got,
            "tolerance": self.tolerance, "pass": self.passed,
        }

@dataclass
class VerifyReport:
    """VerifyReport class.

    Per-check records of the verification battery. The report passes iff every record passes.
    """
    suite: str
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    def close(self, name: str, expected: float, got: float, tolerance: float, relative: bool = False) -> None:
        """Record |got - expected| <= tolerance (times |expected| if relative)."""
        scale: float = abs(expected) if relative else 1.0
        passed: bool = math.isfinite(got) and abs(got - expected) <= tolerance * scale
        self.records.append(CheckRecord(name, float(expected), float(got), tolerance, passed))

    def at_most(self, name: str, bound: float, got: float, tolerance: float = 0.0) -> None:
        passed: bool = math.isfinite(got) and got <= bound + tolerance
        self.records.append(CheckRecord(name, f"<= {bound}", float(got), tolerance, passed))

    def holds(self, name: str, condition: bool, got: Any) -> None:
        self.records.append(CheckRecord(name, True, got, 0.0, bool(condition)))

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "pass": self.passed,
            "num_checks": len(self.records),
            "num_failed": sum(not record.passed for record in self.records),
            "records": [record.to_dict() for record in self.records],
        }

class VerifyBattery:
    """VerifyBattery class.

    VerifyBattery runs the invariant checks of
        - specfun: elliptic moments, boundary values and special functions.
        - geometry: metric, curvature, Weyl invariants and critical radius of the index manifold.
        - tube: Weyl coefficients, tail approximation and tube volume formula.
        - mc: Monte Carlo agreement with the tail approximation and the CLT marginals.
    """
    def __init__(
        self,
        mc_reps: int = 2000,
        seed: int = 42,
        workers: int = 1,
        show_process: bool = False
    ) -> None:
        """initialization.

        Args:
            mc_reps (int): replications of each Monte Carlo check.
            seed (int): root seed of the Monte Carlo checks.
            workers (int): worker processes of the Monte Carlo checks.
            show_process (bool): whether to print process.
        """
        self.mc_reps: int = mc_reps
        self.seed: int = seed
        self.workers: int = workers
        self.show_process: bool = show_process

    def run(self, suite: str) -> VerifyReport:
        runners: dict[str, Callable[[VerifyReport], None]] = {
            "specfun": self.check_specfun,
            "geometry": self.check_geometry,
            "tube": self.check_tube,
            "mc": self.check_mc,
        }
        if suite != "all" and suite not in runners:
            raise ValueError(f"unknown suite. suite={suite}")
        report: VerifyReport = VerifyReport(suite=suite)
        for name in SUITES if suite == "all" else (suite,):
            if self.show_process:
                console.print(f"[green]==verify {name}==[green]")
            runners[name](report)
        return report

    def check_specfun(self, report: VerifyReport) -> None:
        boundary = elliptic_boundary()
        report.close("E_{1/2}/4 = 1.46746", 1.46746, elliptic_moment(0.5) / 4.0, 5e-6)
        report.close("E_{-1/2} = 1.68575", 1.68575, elliptic_moment(-0.5), 5e-6)
        report.close("E_{1/2} = 4E(1/4)", 4.0 * boundary.E_quarter, elliptic_moment(0.5), 1e-14, True)
        report.close("E_1 = 7pi/2", 3.5 * math.pi, elliptic_moment(1), 1e-14, True)
        report.close("E_2 = 99pi/8", 99.0 * math.pi / 8.0, elliptic_moment(2), 1e-14, True)
        for twice_k in range(-8, 17):
            k: HalfInt = HalfInt(twice_k)
            report.close(
                f"E_{k} recurrence vs quadrature", elliptic_moment_quad(k.value),
                elliptic_moment(k), 1e-9, True
            )
        for twice_k in range(2, 17):
            report.at_most(f"recurrence residual at k={HalfInt(twice_k)}", 1e-12, recurrence_residual(HalfInt(twice_k)))
        report.close("Gbar_3(9)", 0.0292908, float(chisq_upper(3, 9.0)), 1e-6)
        report.close("Omega_3 = 4pi", 4.0 * math.pi, sphere_surface(3), 1e-14, True)

    def check_geometry(self, report: VerifyReport) -> None:
        prng: Generator = np.random.default_rng(0)
        for q in (2, 3):
            deviations: list[float] = []
            for _ in range(100):
                theta: float = prng.uniform(-1.5, 1.5)
                if q == 2:
                    point: ndarray = np.array([prng.uniform(0.0, 2.0 * math.pi), theta])
                else:
                    point: ndarray = np.array([prng.uniform(0.2, math.pi - 0.2), prng.uniform(0.0, 2.0 * math.pi), theta])
                deviations.append(metric_numeric(q, point).block_deviation())
            report.at_most(f"metric block structure q={q}", 1e-6, max(deviations))
        for q in (2, 3, 4):
            report.close(
                f"manifold volume = kappa_0 q={q}", weyl_coefficients(q).kappas[0],
                manifold_volume_numeric(q), 1e-6, True
            )
        for theta in (0.0, 0.5, 0.5 * math.pi):
            curvature = curvature_check_q2(theta)
            report.close(f"K - 1 = beta at theta={theta:.4f}", curvature.beta, curvature.gauss_curv_fd - 1.0, 1e-3)
        for q, e in ((2, 0), (2, 2), (3, 0), (3, 2)):
            report.close(
                f"numeric kappa_{e} q={q}", weyl_coefficients(q).kappas[e],
                weyl_invariant_numeric(q, e), 1e-6, True
            )
        for q in (2, 3):
            report.at_most(f"h(x,y) = f/g q={q}", 1e-8, reduction_check(q, 1000, self.seed))
        scan: CriticalScanResult = sup_fg_scan(show_process=self.show_process)
        report.close("local sup of f/g = 16/9", 16.0 / 9.0, scan.local_sup, 1e-8)
        report.close("local argmax k = 3/2", 1.5, scan.attained_at[3], 1e-3)
        report.at_most("global grid sup of f/g", 16.0 / 9.0, scan.global_sup, 1e-3)
        report.close("theta_c = atan(3/4)", math.atan(0.75), scan.theta_c, 1e-6)
        families: list[tuple[float, float]] = scan.critical_values
        report.holds("two critical families", len(families) == 2, len(families))
        if len(families) == 2:
            (r0, half0), (r1, half1) = families
            report.close("critical r = 0", 0.0, r0, 1e-6)
            report.close("half-angle pi/4", 0.25 * math.pi, half0, 1e-6)
            report.close("critical r = -1", -1.0, r1, 1e-6)
            report.close("half-angle pi/2", 0.5 * math.pi, half1, 2e-3)
            report.holds("half-angles exceed theta_c", min(half0, half1) > math.atan(0.75), min(half0, half1))

    def check_tube(self, report: VerifyReport) -> None:
        boundary = elliptic_boundary()
        for q in range(2, 7):
            report.close(
                f"kappa_0 = Omega_q E_((q-1)/2) q={q}",
                sphere_surface(q) * elliptic_moment(0.5 * (q - 1)),
                weyl_coefficients(q).kappas[0], 1e-12, True
            )
        kappas = weyl_coefficients(2).kappas
        report.close("kappa_0(q=2) = 8pi E(1/4)", 8.0 * math.pi * boundary.E_quarter, kappas[0], 1e-12, True)
        report.close("kappa_2(q=2) = -kappa_0(q=2)", -kappas[0], kappas[2], 1e-12, True)
        report.close(
            "kappa_2(q=3) = -24pi^2(1+1/sqrt3)", -24.0 * math.pi ** 2 * (1.0 + 1.0 / math.sqrt(3.0)),
            weyl_coefficients(3).kappas[2], 1e-12, True
        )
        for q in range(2, 6):
            for e, kappa in weyl_coefficients(q).kappas.items():
                report.close(f"kappa_{e} by curvature quadrature q={q}", kappa, kappa_by_quadrature(q, e), 1e-8, True)
        for c in range(1, 7):
            report.close(
                f"tail_approx(2, {c}^2) = closed form", tail_approx_q2(c ** 2),
                tail_approx(2, c ** 2).value, 1e-12, True
            )
        report.close("tail_approx(2, 9)", 0.078043, tail_approx(2, 9.0).value, 1e-6)
        for q in range(2, 6):
            values: ndarray = np.array([tail_approx(q, c2).value for c2 in np.linspace(8.0, 40.0, 65)])
            report.holds(f"tail nonincreasing on [8,40] q={q}", bool(np.all(np.diff(values) <= 0)), float(np.max(np.diff(values))))
            envelope: ndarray = np.array([tail_envelope(q, c2) for c2 in np.linspace(0.0, 40.0, 81)])
            report.holds(f"tail envelope nonincreasing on [0,40] q={q}", bool(np.all(np.diff(envelope) <= 1e-12)), float(np.max(np.diff(envelope))))
        constants = critical_radius_constants()
        report.close("rho_c = 1 + tan^2 theta_c", 1.0 + math.tan(constants.theta_c) ** 2, constants.rho_c, 1e-14)
        for q in range(2, 5):
            report.at_most(f"tube volume at theta_c q={q}", 1.0, tube_volume_fraction(q, constants.theta_c))

    def check_mc(self, report: VerifyReport) -> None:
        config: McConfig = McConfig(reps=self.mc_reps, seed=self.seed, workers=self.workers)
        simulator: MonteCarloSimulator = MonteCarloSimulator(config, show_process=self.show_process)
        limit_values: ndarray = simulator.simulate_limit_max(2).values
        p0: float = tail_approx(2, 9.0).value
        p_hat: float = float(empirical_tail(limit_values, [9.0]).probabilities[0])
        report.close("limit tail at 9 vs tube approximation", p0, p_hat, 3.0 * math.sqrt(p0 * (1.0 - p0) / self.mc_reps))
        limit_c_squared: float = float(np.quantile(limit_values, 0.95))
        finite_tolerance: float = max(0.02, 3.0 * math.sqrt(2.0 * 0.05 * 0.95 / self.mc_reps))
        limit_p: float = float(empirical_tail(limit_values, [limit_c_squared]).probabilities[0])
        for n, tolerance in [(300, 2.0 * finite_tolerance), (3000, finite_tolerance)]:
            finite_values: ndarray = simulator.simulate_finite_max(2, n).values
            report.close(
                f"finite tail n={n} at the limiting 0.05 threshold", limit_p,
                float(empirical_tail(finite_values, [limit_c_squared]).probabilities[0]), tolerance
            )
        theta_c: float = critical_radius_constants().theta_c
        volume = simulator.tube_volume_mc(2, theta_c)
        report.at_most("|z| of tube volume at theta_c q=2", 4.0, abs(volume.z_score))
        marginals = simulator.clt_marginal_check(2, UnitDirection(np.array([1.0, 0.0])), 2000)
        report.close("Var(sqrt(n) b1) = 6", 6.0, marginals.var_b1_scaled, 0.5)
        report.close("Var(sqrt(n) b2) = 24", 24.0, marginals.var_b2_scaled, 2.5)
        small: McConfig = McConfig(reps=48, seed=self.seed, workers=1, block_size=16)
        parallel: McConfig = McConfig(reps=48, seed=self.seed, workers=2, block_size=16)
        first: ndarray = MonteCarloSimulator(small).simulate_limit_max(2).values
        second: ndarray = MonteCarloSimulator(parallel).simulate_limit_max(2).values
        report.holds("identical maxima for 1 and 2 workers", bool(np.array_equal(first, second)), float(np.max(np.abs(first - second))))
