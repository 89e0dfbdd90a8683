"""Lyapunov functions of the SICA system and trajectory decay audits.

Two functions certify the global picture. For the disease-free regime
(R0 < 1) the linear combination

    V = c1*I + c2*C + c3*A
    c1 = xi1*xi2 + xi1*phi*eta_C + xi2*rho*eta_A
    c2 = xi1*omega + xi1*xi3*eta_C + rho*eta_A*omega - eta_C*rho*gamma
    c3 = gamma*xi2 + xi2*xi3*eta_A + phi*eta_C*gamma - phi*eta_A*omega

decays along solutions; c2 and c3 are positive despite their minus signs,
via the rewrites c2 = xi1*omega + gamma*(phi+mu)*eta_C + (mu+d)*xi3*eta_C
+ rho*eta_A*omega and c3 = gamma*xi2 + omega*(rho+mu)*eta_A + mu*xi3*eta_A
+ phi*eta_C*gamma. For the endemic regime (R0 > 1) the Volterra-type function

    V = V1(S) + V2(I) + (omega/xi2)*V3(C) + (gamma/xi1)*V4(A),
    Vi(u) = u - u* - u* ln(u/u*)

is positive away from Sigma_* and vanishes exactly there.

The audit does not estimate Caputo derivatives of V from samples (itself a
quadrature with its own error); it checks the observable consequence, decay
of the sampled values, ignoring an initial settle window because fractional
trajectories need not be monotone from t0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sica_model import ModelParameters

__all__ = [
    "LyapunovCoefficients",
    "lyapunov_coefficients",
    "dfe_lyapunov",
    "endemic_lyapunov",
    "AuditReport",
    "monotonicity_audit",
]

DEFAULT_SETTLE_FRACTION = 0.05
DEFAULT_MAX_UPWARD_STEP = 1e-3


@dataclass(frozen=True)
class LyapunovCoefficients:
    """Weights of the linear disease-free Lyapunov function; all positive."""

    c1: float
    c2: float
    c3: float


def lyapunov_coefficients(p: ModelParameters) -> LyapunovCoefficients:
    xi1, xi2, xi3 = p.xi1, p.xi2, p.xi3
    c1 = xi1 * xi2 + xi1 * p.treat_I * p.eta_C + xi2 * p.default_I * p.eta_A
    c2 = (
        xi1 * p.default_C
        + xi1 * xi3 * p.eta_C
        + p.default_I * p.eta_A * p.default_C
        - p.eta_C * p.default_I * p.treat_A
    )
    c3 = (
        p.treat_A * xi2
        + xi2 * xi3 * p.eta_A
        + p.treat_I * p.eta_C * p.treat_A
        - p.treat_I * p.eta_A * p.default_C
    )
    return LyapunovCoefficients(c1=c1, c2=c2, c3=c3)


def dfe_lyapunov(p: ModelParameters, x) -> float:
    """Linear Lyapunov value c1*I + c2*C + c3*A at state x.

    Raises:
        ValueError: any infected compartment is negative (the function
            certifies decay on the nonnegative cone only).
    """
    arr = np.asarray(x, dtype=float)
    S, I, C, A = arr
    if I < 0 or C < 0 or A < 0:
        raise ValueError("infected compartments must be nonnegative")
    c = lyapunov_coefficients(p)
    return c.c1 * I + c.c2 * C + c.c3 * A


def _volterra(u: float, star: float) -> float:
    return u - star - star * math.log(u / star)


def endemic_lyapunov(p: ModelParameters, eq, x) -> float:
    """Volterra-type Lyapunov value at x relative to the endemic point eq.

    Zero iff x == eq; positive elsewhere on the open positive orthant.

    Raises:
        ValueError: any component of x or eq is not strictly positive
            (logarithm domain).
    """
    xq = np.asarray(eq, dtype=float)
    xa = np.asarray(x, dtype=float)
    if np.any(xq <= 0) or np.any(xa <= 0):
        raise ValueError("endemic Lyapunov function needs strictly positive states")
    weights = (1.0, 1.0, p.default_C / p.xi2, p.treat_A / p.xi1)
    return sum(w * _volterra(u, star) for w, u, star in zip(weights, xa, xq))


@dataclass(frozen=True)
class AuditReport:
    """Decay summary of sampled Lyapunov values.

    decreased: terminal value strictly below the initial one.
    max_upward_step_rel: largest single-step increase after the settle
        window, relative to the full range of the samples (0 when monotone).
    terminal_ratio: V(t_end) / V(t0) (1 for a constant sequence).
    stationary: the sequence never moved at all (equilibrium start).
    """

    decreased: bool
    max_upward_step_rel: float
    terminal_ratio: float
    stationary: bool

    def passes(self, max_upward_step_rel: float = DEFAULT_MAX_UPWARD_STEP) -> bool:
        if self.stationary:
            return True
        return self.decreased and self.max_upward_step_rel <= max_upward_step_rel


def monotonicity_audit(
    values, settle_fraction: float = DEFAULT_SETTLE_FRACTION
) -> AuditReport:
    """Audit sampled V values for eventual decay.

    Args:
        values: >= 10 Lyapunov samples along a trajectory, in time order.
        settle_fraction: leading fraction of samples excluded from the
            upward-step scan (fractional dynamics may overshoot early).

    Raises:
        ValueError: fewer than 10 samples, non-finite samples, or
            settle_fraction outside (0, 1).
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size < 10:
        raise ValueError("need at least 10 samples in a flat sequence")
    if not np.all(np.isfinite(v)):
        raise ValueError("samples must be finite")
    if not (0.0 < settle_fraction < 1.0):
        raise ValueError("settle_fraction must lie strictly between 0 and 1")

    value_range = float(v.max() - v.min())
    if value_range == 0.0:
        return AuditReport(
            decreased=False, max_upward_step_rel=0.0, terminal_ratio=1.0, stationary=True
        )

    start = int(math.floor(settle_fraction * v.size))
    steps = np.diff(v[start:])
    max_up = float(max(0.0, steps.max())) if steps.size else 0.0

    v0, vend = float(v[0]), float(v[-1])
    if v0 != 0.0:
        ratio = vend / v0
    else:
        ratio = 1.0 if vend == 0.0 else math.inf

    return AuditReport(
        decreased=vend < v0,
        max_upward_step_rel=max_up / value_range,
        terminal_ratio=ratio,
        stationary=False,
    )
