"""Command-line front end.

Commands
--------
extract          spectral report for a single parameter point
sweep-purity     purity over a (epsilon_tau, theta, chi, kT) grid -> CSV
sweep-efficiency spectral-gap payload over the same grid -> CSV
trajectory       purity and success probability vs measurement count -> CSV
validate         run the acceptance criteria and report pass/fail

Configuration is "key = value" lines with '#' comments; grid axes live in a
[sweep] section as either a single number or "start : stop : steps".
Command-line flags override file values.  All physical inputs are the
dimensionless ratios omega/epsilon, gamma2/epsilon, gamma1/gamma2,
kT/(hbar*omega), epsilon*tau and the angles theta/pi and chi (epsilon = 1
internally).  Exit codes: 0 success, 1 validation failure, 2 config error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from . import validation
from .errors import ConfigError, PurexError
from .extraction import (
    MeasurementSpec,
    PureStateSpec,
    analyze,
    contracted_map,
    estimate_measurements,
    trajectory,
)
from .sweep import (
    SWEEP_COLUMNS,
    TRAJECTORY_COLUMNS,
    Axis,
    ModelRatios,
    SweepGrid,
    evaluate_grid,
    format_value,
    write_csv,
)

_SCALAR_KEYS = {
    "omega_over_epsilon": float,
    "gamma2_over_epsilon": float,
    "gamma1_over_gamma2": float,
    "kt_over_omega": float,
    "theta_over_pi": float,
    "chi": float,
    "epsilon_tau": float,
    "initial_eta": float,
    "initial_xi": float,
    "workers": int,
    "n_max": int,
    "ideal": bool,
    "out": str,
}

_SWEEP_KEYS = ("epsilon_tau", "theta_over_pi", "chi", "kt_over_omega")


@dataclass
class RunConfig:
    """Merged configuration: defaults, then config file, then flags."""

    omega_over_epsilon: float = 10.0
    gamma2_over_epsilon: float = 0.1
    gamma1_over_gamma2: float = 0.95
    kt_over_omega: float = 0.01
    theta_over_pi: float = 0.75
    chi: float = 0.0
    epsilon_tau: float = 1.0
    ideal: bool = False
    workers: int = 1
    n_max: int = 50
    out: str | None = None
    initial_eta: float | None = None
    initial_xi: float | None = None
    sweep_axes: dict = field(default_factory=dict)

    def ratios(self) -> ModelRatios:
        return ModelRatios(
            omega_over_epsilon=self.omega_over_epsilon,
            gamma2_over_epsilon=self.gamma2_over_epsilon,
            gamma1_over_gamma2=self.gamma1_over_gamma2,
            ideal=self.ideal,
        )

    def measurement(self) -> MeasurementSpec:
        return MeasurementSpec(
            theta=self.theta_over_pi * math.pi, chi=self.chi, tau=self.epsilon_tau
        )

    def grid(self) -> SweepGrid:
        axes = dict(self.sweep_axes)
        return SweepGrid(
            epsilon_tau=axes.get("epsilon_tau", Axis(0.2, 10.0, 50)),
            theta_over_pi=axes.get("theta_over_pi", Axis(0.0, 1.0, 50)),
            chi=axes.get("chi", Axis.fixed(self.chi)),
            kt_over_omega=axes.get("kt_over_omega", Axis.fixed(self.kt_over_omega)),
        )

    def initial_state(self) -> np.ndarray:
        if self.initial_eta is None:
            return np.eye(2, dtype=complex) / 2.0
        pure = PureStateSpec(eta=self.initial_eta, xi=self.initial_xi or 0.0).state()
        return np.outer(pure, pure.conj())


def _parse_scalar(key: str, text: str, lineno: int):
    kind = _SCALAR_KEYS[key]
    try:
        if kind is bool:
            lowered = text.lower()
            if lowered in ("true", "yes", "1"):
                return True
            if lowered in ("false", "no", "0"):
                return False
            raise ValueError(text)
        return kind(text)
    except ValueError as exc:
        raise ConfigError(
            f"line {lineno}: cannot parse value {text!r} for key {key!r}"
        ) from exc


def _parse_axis(text: str, lineno: int) -> Axis:
    parts = [p.strip() for p in text.split(":")]
    try:
        if len(parts) == 1:
            return Axis.fixed(float(parts[0]))
        if len(parts) == 3:
            start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
            if steps < 1:
                raise ConfigError(f"line {lineno}: axis needs steps >= 1, got {steps}")
            return Axis(start, stop, steps)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: cannot parse axis {text!r}") from exc
    raise ConfigError(
        f"line {lineno}: axis must be 'value' or 'start : stop : steps', got {text!r}"
    )


def parse_config_file(path: str) -> dict:
    """Parse a config file into {'scalars': ..., 'sweep': ...}."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw_lines = handle.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc

    scalars: dict = {}
    axes: dict = {}
    section = None
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section != "sweep":
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if section == "sweep":
            if key not in _SWEEP_KEYS:
                raise ConfigError(f"line {lineno}: unknown sweep axis {key!r}")
            axes[key] = _parse_axis(value, lineno)
        else:
            if key not in _SCALAR_KEYS:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            scalars[key] = _parse_scalar(key, value, lineno)
    return {"scalars": scalars, "sweep": axes}


_FLAG_KEYS = (
    "omega_over_epsilon",
    "gamma2_over_epsilon",
    "gamma1_over_gamma2",
    "kt_over_omega",
    "theta_over_pi",
    "chi",
    "epsilon_tau",
)


def build_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if args.config:
        parsed = parse_config_file(args.config)
        config = replace(config, **parsed["scalars"])
        config.sweep_axes = parsed["sweep"]
    for key in _FLAG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            config = replace(config, **{key: value})
            # A scalar override collapses the matching sweep axis.
            if key in config.sweep_axes:
                config.sweep_axes[key] = Axis.fixed(value)
    if getattr(args, "ideal", False):
        config.ideal = True
    if getattr(args, "workers", None) is not None:
        config.workers = args.workers
    if getattr(args, "n_max", None) is not None:
        config.n_max = args.n_max
    if getattr(args, "out", None) is not None:
        config.out = args.out
    return config


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="config file path")
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--workers", type=int, help="parallel worker count")
    for key in _FLAG_KEYS:
        parser.add_argument(f"--{key.replace('_', '-')}", type=float, default=None)
    parser.add_argument(
        "--ideal", action="store_true", help="force gamma1 = gamma2 = 0"
    )


def _print_extract_report(config: RunConfig) -> None:
    result = analyze(contracted_map(config.ratios().params(config.kt_over_omega),
                                    config.measurement()))
    print(f"epsilon_tau    = {format_value(config.epsilon_tau)}")
    print(f"theta_over_pi  = {format_value(config.theta_over_pi)}")
    print(f"chi            = {format_value(config.chi)}")
    print(f"kT_over_omega  = {format_value(config.kt_over_omega)}")
    print(f"ideal          = {int(config.ideal)}")
    print("eigenvalues (descending modulus):")
    for k, value in enumerate(result.spectrum.eigenvalues):
        print(
            f"  lambda_{k} = {format_value(value.real)} {value.imag:+.12g}j"
            f"  |lambda_{k}| = {format_value(abs(value))}"
        )
    if result.extracted_state is None:
        print("extracted_state: undefined (degenerate extraction)")
    else:
        print("extracted_state:")
        for row in result.extracted_state:
            cells = ", ".join(
                f"{format_value(v.real)} {v.imag:+.12g}j" for v in row
            )
            print(f"  [{cells}]")
    print(f"purity         = {format_value(result.purity)}")
    print(f"log_ratio      = {format_value(result.log_ratio)}")
    print(f"degenerate     = {int(result.degenerate)}")
    mixed = np.eye(2, dtype=complex) / 2.0
    try:
        estimate = estimate_measurements(result.spectrum, mixed, p0=0.99)
        print(
            f"measurements for p0=0.99 from maximally mixed start: "
            f"N = {estimate.n} (weight reached = {format_value(estimate.weight)})"
        )
    except PurexError as exc:
        print(f"measurements for p0=0.99: not available ({exc})")


def _run_sweep(config: RunConfig, default_out: str) -> None:
    rows = evaluate_grid(config.ratios(), config.grid(), workers=config.workers)
    out = config.out or default_out
    write_csv(out, SWEEP_COLUMNS, rows)
    print(f"wrote {len(rows)} rows to {out}")


def _run_trajectory(config: RunConfig) -> None:
    params = config.ratios().params(config.kt_over_omega)
    traj = trajectory(params, config.measurement(), config.initial_state(),
                      n_max=config.n_max)
    flag = int(traj.underflow_truncated)
    rows = [
        (int(n), s, p, flag)
        for n, s, p in zip(traj.n, traj.success_probability, traj.purity)
    ]
    out = config.out or "trajectory.csv"
    write_csv(out, TRAJECTORY_COLUMNS, rows)
    print(f"wrote {len(rows)} rows to {out}")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="purex",
        description="Extraction of qubit states by repeated ancilla measurements "
        "under dissipation",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    for name, info in (
        ("extract", "report the extracted state at a single parameter point"),
        ("sweep-purity", "write the purity CSV over the configured grid"),
        ("sweep-efficiency", "write the spectral-gap CSV over the configured grid"),
        ("trajectory", "write purity vs measurement count as CSV"),
    ):
        sub = commands.add_parser(name, help=info)
        _add_common_flags(sub)
        if name == "trajectory":
            sub.add_argument("--n-max", type=int, default=None, dest="n_max")
    commands.add_parser("validate", help="run the acceptance criteria")

    args = parser.parse_args(argv)
    if args.command == "validate":
        results = validation.run_all()
        sys.stdout.write(validation.format_report(results))
        return 0 if all(result.passed for result in results) else 1

    try:
        config = build_config(args)
        if args.command == "extract":
            _print_extract_report(config)
        elif args.command == "sweep-purity":
            _run_sweep(config, "purity.csv")
        elif args.command == "sweep-efficiency":
            _run_sweep(config, "efficiency.csv")
        elif args.command == "trajectory":
            _run_trajectory(config)
    except PurexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
