"""Parameter-sweep engine with deterministic CSV output.

Grid points are evaluated independently (optionally by a process pool) and
always emitted in row-major grid order over (epsilon_tau, theta_over_pi,
chi, kT_over_omega), so the CSV bytes do not depend on the worker count.
Floats are written with 12 significant digits and a '.' decimal separator.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import ParameterError
from .extraction import MeasurementSpec, analyze, contracted_map
from .model import ModelParams

SWEEP_COLUMNS = (
    "epsilon_tau",
    "theta_over_pi",
    "chi",
    "kT_over_omega",
    "purity",
    "lambda0_abs",
    "lambda1_abs",
    "log_ratio",
    "degenerate",
)

TRAJECTORY_COLUMNS = ("n", "success_probability", "purity", "underflow")


@dataclass(frozen=True)
class Axis:
    """One sweep axis: ``steps`` evenly spaced values from start to stop."""

    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise ParameterError(f"axis needs at least one step, got {self.steps}")

    @classmethod
    def fixed(cls, value: float) -> "Axis":
        return cls(value, value, 1)

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SweepGrid:
    epsilon_tau: Axis
    theta_over_pi: Axis
    chi: Axis
    kt_over_omega: Axis

    def points(self) -> list[tuple[float, float, float, float]]:
        return list(
            product(
                self.epsilon_tau.values(),
                self.theta_over_pi.values(),
                self.chi.values(),
                self.kt_over_omega.values(),
            )
        )


@dataclass(frozen=True)
class ModelRatios:
    """Dimensionless model inputs; ``ideal`` switches off both decay rates."""

    omega_over_epsilon: float = 10.0
    gamma2_over_epsilon: float = 0.1
    gamma1_over_gamma2: float = 0.95
    ideal: bool = False

    def params(self, kt_over_omega: float) -> ModelParams:
        gamma2 = 0.0 if self.ideal else self.gamma2_over_epsilon
        gamma1_ratio = 0.0 if self.ideal else self.gamma1_over_gamma2
        return ModelParams.from_ratios(
            omega_over_epsilon=self.omega_over_epsilon,
            gamma2_over_epsilon=gamma2,
            gamma1_over_gamma2=gamma1_ratio,
            kt_over_omega=kt_over_omega,
        )


def evaluate_point(
    ratios: ModelRatios,
    epsilon_tau: float,
    theta_over_pi: float,
    chi: float,
    kt_over_omega: float,
) -> tuple:
    """Analyze one grid point; returns a row in SWEEP_COLUMNS order."""
    params = ratios.params(kt_over_omega)
    spec = MeasurementSpec(theta=theta_over_pi * math.pi, chi=chi, tau=epsilon_tau)
    result = analyze(contracted_map(params, spec))
    moduli = np.abs(result.spectrum.eigenvalues)
    return (
        epsilon_tau,
        theta_over_pi,
        chi,
        kt_over_omega,
        result.purity,
        float(moduli[0]),
        float(moduli[1]),
        result.log_ratio,
        int(result.degenerate),
    )


def _tagged_point(job: tuple) -> tuple:
    """Worker wrapper: never raises, so failures can name their grid point."""
    ratios, point = job
    try:
        return ("ok", evaluate_point(ratios, *point))
    except Exception as exc:  # noqa: BLE001 - reported with the grid point
        return ("error", f"{type(exc).__name__}: {exc}")


def evaluate_grid(
    ratios: ModelRatios, grid: SweepGrid, workers: int = 1
) -> list[tuple]:
    """Evaluate every grid point, in grid order, failing fast with context."""
    points = grid.points()
    jobs = [(ratios, point) for point in points]
    if workers <= 1:
        outcomes = map(_tagged_point, jobs)
    else:
        executor = ProcessPoolExecutor(max_workers=workers)
        try:
            outcomes = list(executor.map(_tagged_point, jobs, chunksize=32))
        finally:
            executor.shutdown()
    rows = []
    for point, outcome in zip(points, outcomes):
        tag, payload = outcome
        if tag == "error":
            et, top, chi, kt = point
            raise RuntimeError(
                "sweep aborted at grid point "
                f"epsilon_tau={et:g}, theta_over_pi={top:g}, chi={chi:g}, "
                f"kT_over_omega={kt:g}: {payload}"
            )
        rows.append(payload)
    return rows


def format_value(value) -> str:
    """Locale-independent cell formatting: 12 significant digits for floats."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.12g" % value


def render_csv(columns: tuple[str, ...], rows: list[tuple]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path: str, columns: tuple[str, ...], rows: list[tuple]) -> None:
    with open(path, "w", encoding="ascii", newline="") as handle:
        handle.write(render_csv(columns, rows))
