"""Adams-Bashforth-Moulton predictor-corrector for Caputo fractional systems.

Integrates x^(alpha)(t) = f(t, x(t)), x(t0) = x0, for orders 0 < alpha <= 1
on a uniform grid t_k = t0 + k*h. Each step performs a single PECE pass
(predict, evaluate, correct, evaluate):

    predictor:  x^P_{n+1} = x0 + (1/Gamma(alpha)) * sum_j b_{j,n+1} f(t_j, x_j)
                b_{j,n+1} = (h^alpha / alpha) * ((n+1-j)^alpha - (n-j)^alpha)

    corrector:  x_{n+1} = x0 + (h^alpha / Gamma(alpha+2))
                          * [ f(t_{n+1}, x^P_{n+1}) + sum_j a_{j,n+1} f(t_j, x_j) ]
                a_{0,n+1} = n^(alpha+1) - (n - alpha) * (n+1)^alpha
                a_{j,n+1} = (n-j+2)^(alpha+1) + (n-j)^(alpha+1)
                            - 2*(n-j+1)^(alpha+1),   1 <= j <= n

At alpha = 1 the scheme reduces to the classical one-step Adams method
(order 2); for fractional alpha the order is min(2, 1 + alpha).

The history sums make the cost quadratic in the number of steps under the
full-history policy. A truncated policy restricts both sums to a trailing
window of steps (the short-memory principle); it is never applied implicitly.

Also provides two validation oracles used throughout the test suite: a
Mittag-Leffler series evaluator (exact solutions of linear scalar problems)
and an empirical-convergence-order estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

__all__ = [
    "SolverError",
    "MemoryPolicy",
    "SolverConfig",
    "VectorField",
    "Trajectory",
    "abm_solve",
    "mittag_leffler",
    "ConvergenceEstimate",
    "estimate_convergence_order",
]


class SolverError(RuntimeError):
    """Integration aborted (non-finite values or an inconsistent setup)."""


@dataclass(frozen=True)
class MemoryPolicy:
    """History span entering the predictor and corrector sums.

    ``window`` is None for the full-history policy, otherwise the number of
    trailing steps retained. Truncation trades accuracy for linear cost and
    must be requested explicitly.
    """

    window: Optional[int] = None

    @staticmethod
    def full_history() -> "MemoryPolicy":
        return MemoryPolicy(None)

    @staticmethod
    def truncated(window_length: int) -> "MemoryPolicy":
        return MemoryPolicy(int(window_length))

    def validate(self) -> None:
        if self.window is not None and self.window < 1:
            raise ValueError("truncated memory window must be >= 1")


@dataclass(frozen=True)
class SolverConfig:
    """Grid and order for one solve.

    Attributes:
        alpha: fractional order, 0 < alpha <= 1.
        step: grid spacing h, > 0.
        t_end: final time, > 0; the grid is {k*h : 0 <= k <= round(t_end/h)}.
        memory_policy: span of the history sums (full by default).
    """

    alpha: float
    step: float
    t_end: float
    memory_policy: MemoryPolicy = MemoryPolicy(None)

    def validate(self) -> None:
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"alpha must satisfy 0 < alpha <= 1, got {self.alpha}")
        if not (self.step > 0.0 and math.isfinite(self.step)):
            raise ValueError(f"step must be positive and finite, got {self.step}")
        if not (self.t_end > 0.0 and math.isfinite(self.t_end)):
            raise ValueError(f"t_end must be positive and finite, got {self.t_end}")
        if self.n_steps < 1:
            raise ValueError(
                f"t_end/step = {self.t_end / self.step:.3g} yields fewer than 2 grid points"
            )
        self.memory_policy.validate()

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.step))


@dataclass(frozen=True)
class VectorField:
    """Right-hand side f(t, x) of a Caputo system of ``dimension`` equations.

    ``fn`` must be deterministic and side-effect-free for fixed (t, x).
    """

    fn: Callable[[float, np.ndarray], np.ndarray]
    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("vector field dimension must be >= 1")

    def __call__(self, t: float, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.fn(t, x), dtype=float)


@dataclass(frozen=True)
class Trajectory:
    """Uniform-grid solution samples: states[k] approximates x(times[k])."""

    times: np.ndarray
    states: np.ndarray
    alpha: float

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states must have equal length")
        if len(self.times) >= 2:
            gaps = np.diff(self.times)
            h = gaps[0]
            if not np.all(np.abs(gaps - h) <= 1e-12 * max(abs(h), 1.0)):
                raise ValueError("trajectory grid is not uniform")

    @property
    def step(self) -> float:
        return float(self.times[1] - self.times[0])

    def final_state(self) -> np.ndarray:
        return self.states[-1]


def abm_solve(field: VectorField, x0, config: SolverConfig) -> Trajectory:
    """Integrate the Caputo system defined by ``field`` from ``x0``.

    Args:
        field: right-hand side with declared dimension.
        x0: initial state, length equal to field.dimension.
        config: validated grid/order description.

    Returns:
        Trajectory on the uniform grid, one state per grid point.

    Raises:
        ValueError: invalid config or dimension mismatch (before integration).
        SolverError: a field evaluation produced a non-finite value; the
            message names the offending step index.
    """
    config.validate()
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if x0.shape != (field.dimension,):
        raise ValueError(
            f"initial state has shape {x0.shape}, expected ({field.dimension},)"
        )
    if not np.all(np.isfinite(x0)):
        raise ValueError("initial state must be finite")

    alpha = config.alpha
    h = config.step
    n_steps = config.n_steps
    window = config.memory_policy.window
    if window is None:
        window = n_steps + 1

    times = h * np.arange(n_steps + 1)
    states = np.empty((n_steps + 1, field.dimension))
    rates = np.empty_like(states)
    states[0] = x0
    rates[0] = field(0.0, x0)
    if not np.all(np.isfinite(rates[0])):
        raise SolverError("non-finite field evaluation at step 0 (t=0)")

    # Cumulative power tables; the per-step weights are first differences
    # (predictor) and second differences (corrector) of these.
    k = np.arange(n_steps + 2, dtype=float)
    pow_a = k**alpha
    pow_a1 = k ** (alpha + 1.0)
    pred_w = pow_a[1:] - pow_a[:-1]  # pred_w[m] = (m+1)^a - m^a
    corr_w = pow_a1[2:] + pow_a1[:-2] - 2.0 * pow_a1[1:-1]  # corr_w[m] = a_{j}, m = n-j

    pred_scale = h**alpha / (alpha * math.gamma(alpha))
    corr_scale = h**alpha / math.gamma(alpha + 2.0)

    for n in range(n_steps):
        lo = max(0, n + 1 - window)  # oldest node entering the sums
        span = n + 1 - lo

        hist = rates[lo : n + 1]
        predicted = x0 + pred_scale * (pred_w[:span][::-1] @ hist)

        t_next = times[n + 1]
        rate_pred = field(t_next, predicted)
        if not np.all(np.isfinite(rate_pred)):
            raise SolverError(
                f"non-finite field evaluation at step {n + 1} (t={t_next:g}, predictor)"
            )

        if lo == 0:
            a0 = pow_a1[n] - (n - alpha) * pow_a[n + 1]
            tail = corr_w[:n][::-1] @ rates[1 : n + 1] if n >= 1 else 0.0
            weighted = a0 * rates[0] + tail
        else:
            weighted = corr_w[: n + 1 - lo][::-1] @ rates[lo : n + 1]

        states[n + 1] = x0 + corr_scale * (rate_pred + weighted)
        rates[n + 1] = field(t_next, states[n + 1])
        if not (
            np.all(np.isfinite(states[n + 1])) and np.all(np.isfinite(rates[n + 1]))
        ):
            raise SolverError(
                f"non-finite field evaluation at step {n + 1} (t={t_next:g}, corrector)"
            )

    return Trajectory(times=times, states=states, alpha=alpha)


_ML_DOMAIN = 50.0
_ML_MAX_TERMS = 10_000


def mittag_leffler(alpha: float, z: float) -> float:
    """One-parameter Mittag-Leffler function E_alpha(z) by series summation.

    E_alpha(z) = sum_{k>=0} z^k / Gamma(alpha*k + 1), accumulated with Kahan
    compensation and truncated once a term falls below 1e-16 relative to the
    partial sum. E_1(z) = exp(z); E_alpha(-lambda t^alpha) solves the linear
    Caputo problem x^(alpha) = -lambda x, x(0) = 1.

    Raises:
        ValueError: alpha <= 0, or |z| > 50 (the naive series is numerically
            unreliable beyond that).
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not math.isfinite(z) or abs(z) > _ML_DOMAIN:
        raise ValueError(f"|z| <= {_ML_DOMAIN:g} required for series evaluation, got z={z}")
    if z == 0.0:
        return 1.0

    total = 0.0
    comp = 0.0  # Kahan carry
    log_abs_z = math.log(abs(z))
    for k in range(_ML_MAX_TERMS):
        log_term = k * log_abs_z - math.lgamma(alpha * k + 1.0)
        term = math.exp(log_term)
        if z < 0.0 and k % 2 == 1:
            term = -term
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if k > 0 and abs(term) <= 1e-16 * abs(total):
            return total
    raise ValueError(
        f"series did not converge within {_ML_MAX_TERMS} terms for alpha={alpha}, z={z}"
    )


class ConvergenceEstimate(NamedTuple):
    """Least-squares slope of log(error) vs log(h); ``exact`` marks the
    degenerate all-errors-zero case (no slope is defined there)."""

    slope: Optional[float]
    exact: bool


def estimate_convergence_order(
    field: VectorField,
    x0,
    alpha: float,
    t_end: float,
    steps: Sequence[float],
    reference,
) -> ConvergenceEstimate:
    """Empirical order of abm_solve against a trusted solution at t_end.

    Args:
        steps: at least three step sizes, each half the previous.
        reference: trusted state at t_end (closed form or finer oracle).

    Raises:
        ValueError: fewer than three steps, or steps not successive halvings.
    """
    steps = [float(h) for h in steps]
    if len(steps) < 3:
        raise ValueError("need at least 3 step sizes")
    for prev, cur in zip(steps, steps[1:]):
        if abs(cur - prev / 2.0) > 1e-9 * prev:
            raise ValueError("each step size must halve the previous one")

    reference = np.atleast_1d(np.asarray(reference, dtype=float))
    errors = []
    for h in steps:
        traj = abm_solve(field, x0, SolverConfig(alpha=alpha, step=h, t_end=t_end))
        errors.append(float(np.max(np.abs(traj.final_state() - reference))))

    if max(errors) == 0.0:
        return ConvergenceEstimate(slope=None, exact=True)
    log_h = np.log(steps)
    log_e = np.log(np.maximum(errors, 1e-300))
    slope = float(np.polyfit(log_h, log_e, 1)[0])
    return ConvergenceEstimate(slope=slope, exact=False)
