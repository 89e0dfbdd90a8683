"""Command-line front end: simulate, analyze, and sweep subcommands.

Exit codes: 0 success; 2 config or override validation failure; 3 solver
abort (non-finite state or a nonnegativity breach); 4 sweep completed but at
least one order never reached the epsilon ball (rows carry a nan sentinel).

All delimited output renders numbers with 12 significant digits and is
byte-for-byte deterministic for identical inputs. Each subcommand also drops
a PNG figure next to its delimited output; figure rendering failures never
block the data.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

import numpy as np

from .config import ConfigError, RunConfig, load_config
from .equilibria import equilibrium_set
from .fde_core import SolverConfig, SolverError, abm_solve
from .lyapunov import dfe_lyapunov, endemic_lyapunov, monotonicity_audit
from .sica_model import NONNEGATIVITY_TOL, first_negative_step, validate_params, vector_field
from .stability import classify_dfe

__all__ = ["main", "run_simulate", "run_analyze", "run_sweep"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_EPS_NOT_REACHED = 4

_POSITIVE_FLOOR = 1e-12  # endemic Lyapunov needs strictly positive states


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _fmt_state(x) -> str:
    return "(" + ", ".join(_fmt(v) for v in x) + ")"


def _solve(cfg: RunConfig, alpha: Optional[float] = None):
    solver = cfg.solver if alpha is None else SolverConfig(
        alpha=alpha,
        step=cfg.solver.step,
        t_end=cfg.solver.t_end,
        memory_policy=cfg.solver.memory_policy,
    )
    traj = abm_solve(vector_field(cfg.parameters), cfg.initial_state.as_array(), solver)
    bad = first_negative_step(traj.states)
    if bad is not None:
        raise SolverError(
            f"state left the nonnegative cone at step {bad} "
            f"(t={traj.times[bad]:g}) beyond tolerance {NONNEGATIVITY_TOL:g}"
        )
    return traj


def _render_figure(render, *args) -> None:
    try:
        render(*args)
    except Exception as exc:  # data output must not depend on the renderer
        print(f"warning: figure rendering failed: {exc}", file=sys.stderr)


def run_simulate(cfg: RunConfig) -> int:
    """Integrate the configured scenario and write the trajectory CSV."""
    eq = equilibrium_set(cfg.parameters)
    try:
        traj = _solve(cfg)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    print(f"R0 = {_fmt(eq.r0)}")
    print(f"sigma0 = {_fmt_state(eq.sigma0)}")
    if eq.sigma_star is not None:
        print(f"sigma_star = {_fmt_state(eq.sigma_star)}")
    else:
        print("sigma_star = absent (R0 <= 1)")

    out = cfg.output_path
    clipped = np.clip(traj.states, 0.0, None)  # tolerated dips only, for V columns
    star = np.array(eq.sigma_star, dtype=float) if eq.sigma_star is not None else None

    v_dfe_series = np.array([dfe_lyapunov(cfg.parameters, state) for state in clipped])
    audit = monotonicity_audit(v_dfe_series)
    print(
        f"V_dfe audit: decreased = {audit.decreased}, "
        f"max_upward_step_rel = {_fmt(audit.max_upward_step_rel)}, "
        f"terminal_ratio = {_fmt(audit.terminal_ratio)}"
    )
    if star is not None:
        positive = np.all(traj.states > _POSITIVE_FLOOR, axis=1)
        start = int(np.argmax(positive)) if positive.any() else None
        if start is not None and np.all(positive[start:]) and len(positive) - start >= 10:
            v_ee_series = np.array(
                [endemic_lyapunov(cfg.parameters, star, s) for s in traj.states[start:]]
            )
            audit_ee = monotonicity_audit(v_ee_series)
            print(
                f"V_ee audit (from step {start}): decreased = {audit_ee.decreased}, "
                f"max_upward_step_rel = {_fmt(audit_ee.max_upward_step_rel)}, "
                f"terminal_ratio = {_fmt(audit_ee.terminal_ratio)}"
            )

    rows = []
    for k, t in enumerate(traj.times):
        s, i, c, a = traj.states[k]
        v_dfe = v_dfe_series[k]
        if star is not None and np.all(traj.states[k] > _POSITIVE_FLOOR):
            v_ee = _fmt(endemic_lyapunov(cfg.parameters, star, traj.states[k]))
        else:
            v_ee = ""
        rows.append(
            ",".join(
                [_fmt(t), _fmt(s), _fmt(i), _fmt(c), _fmt(a), _fmt(s + i + c + a), _fmt(v_dfe), v_ee]
            )
        )
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        fh.write("t,S,I,C,A,N,V_dfe,V_ee\n")
        fh.write("\n".join(rows) + "\n")
    print(f"trajectory written to {out}")

    from .plots import save_trajectory_figure

    _render_figure(
        save_trajectory_figure, traj.times, traj.states, cfg.solver.alpha, out.with_suffix(".png")
    )
    return EXIT_OK


def run_analyze(cfg: RunConfig) -> int:
    """Equilibria, reproduction number, and stability verdicts per order."""
    eq = equilibrium_set(cfg.parameters)
    alphas = cfg.alphas if cfg.alphas else (cfg.solver.alpha,)
    reports = {alpha: classify_dfe(cfg.parameters, alpha) for alpha in alphas}

    lines = []
    c = eq.constants
    for key, value in (
        ("xi1", c.xi1),
        ("xi2", c.xi2),
        ("xi3", c.xi3),
        ("script_N", c.script_N),
        ("script_D", c.script_D),
        ("R0", eq.r0),
    ):
        lines.append(f"{key} = {_fmt(value)}")
    lines.append(f"sigma0 = {_fmt_state(eq.sigma0)}")
    if eq.sigma_star is not None:
        lines.append(f"sigma_star = {_fmt_state(eq.sigma_star)}")
    else:
        lines.append("sigma_star = absent (R0 <= 1)")

    first = next(iter(reports.values()))
    lines.append(f"b1 = {_fmt(first.coefficients.b1)}")
    lines.append(f"b2 = {_fmt(first.coefficients.b2)}")
    lines.append(f"b3 = {_fmt(first.coefficients.b3)}")
    lines.append(f"discriminant = {_fmt(first.discriminant)}")
    eig_text = ", ".join(
        f"{z.real:.12g}{z.imag:+.12g}j" if z.imag else f"{z.real:.12g}" for z in first.eigenvalues
    )
    lines.append(f"eigenvalues = {eig_text}")
    for alpha in alphas:
        rep = reports[alpha]
        lines.append(
            f"alpha {alpha:g}: margin = {_fmt(rep.min_arg_margin)}, "
            f"rule = {rep.applied_rule.value}, verdict = {rep.verdict.value}"
        )

    text = "\n".join(lines) + "\n"
    print(text, end="")
    out = cfg.output_path
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)

    csv_path = out.with_suffix(".csv")
    if csv_path == out:
        csv_path = out.with_name(out.stem + "_table.csv")
    with open(csv_path, "w", newline="") as fh:
        fh.write("alpha,b1,b2,b3,discriminant,min_arg_margin,applied_rule,verdict\n")
        for alpha in alphas:
            rep = reports[alpha]
            fh.write(
                ",".join(
                    [
                        _fmt(alpha),
                        _fmt(rep.coefficients.b1),
                        _fmt(rep.coefficients.b2),
                        _fmt(rep.coefficients.b3),
                        _fmt(rep.discriminant),
                        _fmt(rep.min_arg_margin),
                        rep.applied_rule.value,
                        rep.verdict.value,
                    ]
                )
                + "\n"
            )
    print(f"report written to {out} and {csv_path}")

    from .plots import save_stability_figure

    _render_figure(save_stability_figure, reports, out.with_suffix(".png"))
    return EXIT_OK


def _sweep_one(payload):
    """Worker: one order's settle time against the target equilibrium."""
    cfg, alpha, target, endemic = payload
    traj = _solve(cfg, alpha=alpha)
    dist = np.max(np.abs(traj.states - target), axis=1)

    below = dist < cfg.epsilon
    if below[-1]:
        above = np.where(~below)[0]
        idx = int(above[-1]) + 1 if above.size else 0
        settle_time = float(traj.times[idx])
    else:
        settle_time = None

    final_state = traj.states[-1]
    if endemic and np.all(final_state > _POSITIVE_FLOOR):
        v_final = endemic_lyapunov(cfg.parameters, target, final_state)
    elif endemic:
        v_final = float("nan")
    else:
        v_final = dfe_lyapunov(cfg.parameters, np.clip(final_state, 0.0, None))
    return alpha, settle_time, float(dist[-1]), v_final, traj.times, dist


def run_sweep(cfg: RunConfig) -> int:
    """Settle-time comparison over the configured alpha grid."""
    if len(cfg.alphas) < 2:
        print("error: sweep needs at least 2 alphas ([sweep] alphas)", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.epsilon is None:
        print("error: sweep needs epsilon ([sweep] or --epsilon)", file=sys.stderr)
        return EXIT_CONFIG

    eq = equilibrium_set(cfg.parameters)
    endemic = eq.sigma_star is not None
    target = np.array(eq.sigma_star if endemic else eq.sigma0, dtype=float)
    print(f"R0 = {_fmt(eq.r0)}")
    print(f"target equilibrium = {_fmt_state(target)} ({'endemic' if endemic else 'disease-free'})")

    jobs = [(cfg, alpha, target, endemic) for alpha in cfg.alphas]
    workers = min(len(jobs), _worker_cap())
    try:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_sweep_one, jobs))
        else:
            results = [_sweep_one(job) for job in jobs]
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    out = cfg.output_path
    out.parent.mkdir(parents=True, exist_ok=True)
    missed = False
    curves = {}
    with open(out, "w", newline="") as fh:
        fh.write("alpha,time_to_eps,final_distance,V_final\n")
        for alpha, settle_time, final_dist, v_final, times, dist in results:
            curves[alpha] = (times, dist)
            if settle_time is None:
                missed = True
                settle_text = "nan"  # sentinel: never stayed within epsilon
            else:
                settle_text = _fmt(settle_time)
            fh.write(f"{_fmt(alpha)},{settle_text},{_fmt(final_dist)},{_fmt(v_final)}\n")
    print(f"sweep summary written to {out}")

    from .plots import save_sweep_figure

    _render_figure(save_sweep_figure, curves, cfg.epsilon, out.with_suffix(".png"))

    if missed:
        print(
            f"warning: some orders never stayed within epsilon = {cfg.epsilon:g} "
            "over the horizon (sentinel rows emitted)",
            file=sys.stderr,
        )
        return EXIT_EPS_NOT_REACHED
    return EXIT_OK


def _worker_cap() -> int:
    raw = os.environ.get("FRACSICA_THREADS", "")
    if raw.strip():
        try:
            return max(1, int(raw))
        except ValueError:
            print(f"warning: ignoring non-integer FRACSICA_THREADS={raw!r}", file=sys.stderr)
    return os.cpu_count() or 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracsica",
        description="Caputo fractional-order SICA epidemic model: simulate, analyze, sweep.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("simulate", "integrate one scenario and write the trajectory CSV"),
        ("analyze", "equilibria, R0, and stability classification report"),
        ("sweep", "settle-time comparison across fractional orders"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, type=Path, help="run configuration file")
        p.add_argument("--out", required=True, type=Path, help="output path for the delimited data")
        p.add_argument("--alpha", type=float, default=None, help="override the solver order")
        p.add_argument("--beta", type=float, default=None, help="override the contact rate")
        p.add_argument("--epsilon", type=float, default=None, help="override the sweep threshold")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        cfg = cfg.with_overrides(
            alpha=args.alpha, beta=args.beta, epsilon=args.epsilon, output_path=args.out
        )
        cfg.solver.validate()
        hard = [v for v in validate_params(cfg.parameters) if v.severity == "error"]
        if hard:
            raise ConfigError("; ".join(v.message for v in hard))
        if cfg.epsilon is not None and cfg.epsilon <= 0:
            raise ConfigError(f"epsilon must be positive, got {cfg.epsilon:g}")
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for note in cfg.warnings:
        print(f"warning: {note}", file=sys.stderr)

    if args.command == "simulate":
        return run_simulate(cfg)
    if args.command == "analyze":
        return run_analyze(cfg)
    return run_sweep(cfg)


if __name__ == "__main__":
    sys.exit(main())
