"""Run configuration: flat key = value files with four sections.

Format:

    [parameters]   the ten model rates, all required
    [initial]      S, I, C, A starting populations, all required
    [solver]       alpha, step, t_end required; memory_window optional
    [sweep]        alphas (comma-separated) and epsilon, both optional here,
                   required by the sweep subcommand

Lines are `key = value`; blank lines and lines starting with # are ignored.
Unknown sections or keys are hard errors (typo safety), and every diagnostic
carries the offending line number.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .fde_core import MemoryPolicy, SolverConfig
from .sica_model import ModelParameters, State, validate_params

__all__ = ["ConfigError", "RunConfig", "load_config"]

_PARAM_KEYS = (
    "recruitment",
    "natural_death",
    "contact_rate",
    "eta_C",
    "eta_A",
    "treat_I",
    "default_I",
    "treat_A",
    "default_C",
    "aids_death",
)
_INITIAL_KEYS = ("S", "I", "C", "A")
_SOLVER_KEYS = ("alpha", "step", "t_end", "memory_window")
_SWEEP_KEYS = ("alphas", "epsilon")
_SECTIONS = {
    "parameters": _PARAM_KEYS,
    "initial": _INITIAL_KEYS,
    "solver": _SOLVER_KEYS,
    "sweep": _SWEEP_KEYS,
}


class ConfigError(Exception):
    """Configuration rejected; str() includes the line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs for one CLI invocation."""

    parameters: ModelParameters
    initial_state: State
    solver: SolverConfig
    alphas: tuple[float, ...]
    epsilon: Optional[float]
    output_path: Optional[Path]
    warnings: tuple[str, ...]

    def with_overrides(
        self,
        alpha: Optional[float] = None,
        beta: Optional[float] = None,
        epsilon: Optional[float] = None,
        output_path: Optional[Path] = None,
    ) -> "RunConfig":
        cfg = self
        if alpha is not None:
            cfg = replace(cfg, solver=replace(cfg.solver, alpha=alpha))
        if beta is not None:
            cfg = replace(cfg, parameters=replace(cfg.parameters, contact_rate=beta))
        if epsilon is not None:
            cfg = replace(cfg, epsilon=epsilon)
        if output_path is not None:
            cfg = replace(cfg, output_path=Path(output_path))
        return cfg


def _parse_lines(text: str) -> dict[tuple[str, str], tuple[str, int]]:
    entries: dict[tuple[str, str], tuple[str, int]] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                raise ConfigError(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected key = value, got {line!r}", lineno)
        if section is None:
            raise ConfigError("key before any [section] header", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _SECTIONS[section]:
            raise ConfigError(f"unknown key {key!r} in section [{section}]", lineno)
        if (section, key) in entries:
            raise ConfigError(f"duplicate key {key!r} in section [{section}]", lineno)
        entries[(section, key)] = (value, lineno)
    return entries


def _take_float(entries, section, key, required=True):
    if (section, key) not in entries:
        if required:
            raise ConfigError(f"missing required key {key!r} in section [{section}]")
        return None, None
    value, lineno = entries.pop((section, key))
    try:
        return float(value), lineno
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {value!r}", lineno) from None


def load_config(path) -> RunConfig:
    """Parse and validate a config file.

    Raises ConfigError on syntax problems, unknown or missing keys, and hard
    parameter invariant violations; the message is anchored to the offending
    line where one exists. Soft modeling-assumption violations are collected
    into RunConfig.warnings instead.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    entries = _parse_lines(text)

    values = {}
    lines = {}
    for key in _PARAM_KEYS:
        values[key], lines[key] = _take_float(entries, "parameters", key)
    params = ModelParameters(**values)

    report = validate_params(params)
    hard = [v for v in report if v.severity == "error"]
    if hard:
        # anchor to the first offending parameter's line when identifiable
        first = hard[0].message
        anchor = next(
            (lines[k] for k in _PARAM_KEYS if k in first or k.replace("_", " ") in first),
            None,
        )
        raise ConfigError("; ".join(v.message for v in hard), anchor)
    warnings = tuple(v.message for v in report)

    initial = {}
    for key in _INITIAL_KEYS:
        initial[key], _ = _take_float(entries, "initial", key)
    state = State(**initial)

    alpha, alpha_line = _take_float(entries, "solver", "alpha")
    step, _ = _take_float(entries, "solver", "step")
    t_end, _ = _take_float(entries, "solver", "t_end")
    window, window_line = _take_float(entries, "solver", "memory_window", required=False)
    policy = MemoryPolicy(None)
    if window is not None:
        if window != int(window) or window < 1:
            raise ConfigError(
                f"memory_window must be a positive integer, got {window:g}", window_line
            )
        policy = MemoryPolicy.truncated(int(window))
    solver = SolverConfig(alpha=alpha, step=step, t_end=t_end, memory_policy=policy)
    try:
        solver.validate()
    except ValueError as exc:
        raise ConfigError(str(exc), alpha_line) from None

    alphas: tuple[float, ...] = ()
    if ("sweep", "alphas") in entries:
        value, lineno = entries.pop(("sweep", "alphas"))
        try:
            alphas = tuple(float(tok) for tok in value.split(",") if tok.strip())
        except ValueError:
            raise ConfigError(f"alphas must be comma-separated numbers, got {value!r}", lineno) from None
        if not alphas:
            raise ConfigError("alphas list is empty", lineno)
        for a in alphas:
            if not (0.0 < a <= 1.0):
                raise ConfigError(f"sweep alpha {a:g} outside (0, 1]", lineno)
    epsilon, eps_line = _take_float(entries, "sweep", "epsilon", required=False)
    if epsilon is not None and epsilon <= 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon:g}", eps_line)

    # _take_float pops as it goes; anything left was never consumed
    if entries:
        (section, key), (_, lineno) = next(iter(entries.items()))
        raise ConfigError(f"unhandled key {key!r} in section [{section}]", lineno)

    return RunConfig(
        parameters=params,
        initial_state=state,
        solver=solver,
        alphas=alphas,
        epsilon=epsilon,
        output_path=None,
        warnings=warnings,
    )
