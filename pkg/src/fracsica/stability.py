"""Fractional local stability of the disease-free equilibrium.

The Jacobian at Sigma_0 factors its characteristic equation as q*p = 0 with
q = lambda + mu and p = lambda^3 + b1*lambda^2 + b2*lambda + b3, so -mu is
always an eigenvalue and the cubic carries the epidemiological content. For a
Caputo system of order alpha, Sigma_0 is locally asymptotically stable when
every eigenvalue satisfies the angle condition |arg(lambda)| > alpha*pi/2.

Classification uses the cubic discriminant

    D = 18*b1*b2*b3 + (b1*b2)^2 - 4*b3*b1^3 - 4*b2^3 - 27*b3^2

(D > 0 iff three distinct real roots) and the rule ladder, applied in order:

    (v)   b3 <= 0: the necessary condition fails; verdict from the direct
          angle check (a nonnegative real root exists when b3 < 0).
    (i)   D > 0: Routh-Hurwitz decides (b1 > 0, b3 > 0, b1*b2 - b3 > 0).
    (ii)  D < 0, b1 >= 0, b2 >= 0, b3 > 0, alpha < 2/3: stable.
    (iii) D < 0, b1 < 0, b2 < 0, alpha > 2/3: unstable.
    (iv)  D < 0, b1 > 0, b2 > 0, b1*b2 - b3 = 0 (within 1e-10): stable for
          all alpha in [0, 1).

Whatever the ladder says, the direct eigenvalue angle test is authoritative;
a disagreement is logged and the angle verdict wins. Cubic roots come from
closed forms (trigonometric for the three-real-root case, Cardano otherwise).
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .equilibria import derived_constants
from .sica_model import ModelParameters

__all__ = [
    "CharPoly",
    "AppliedRule",
    "Verdict",
    "StabilityReport",
    "jacobian_at_dfe",
    "dfe_char_poly",
    "cubic_discriminant",
    "cubic_roots",
    "matignon_margin",
    "classify_dfe",
]

logger = logging.getLogger(__name__)

RULE_IV_TOL = 1e-10  # |b1*b2 - b3| treated as zero (exact equality is measure-zero)
_DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class CharPoly:
    """Coefficients of the cubic factor p = lambda^3 + b1*lambda^2 + b2*lambda + b3."""

    b1: float
    b2: float
    b3: float


class AppliedRule(Enum):
    ROUTH_HURWITZ_I = "routh_hurwitz_i"
    RULE_II = "rule_ii"
    RULE_III = "rule_iii"
    RULE_IV = "rule_iv"
    NECESSARY_B3_VIOLATED = "necessary_b3_violated"
    INCONCLUSIVE = "inconclusive"


class Verdict(Enum):
    STABLE = "locally_asymptotically_stable"
    UNSTABLE = "unstable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class StabilityReport:
    """Everything the classification saw: coefficients, discriminant, the four
    eigenvalues (-mu plus the cubic's roots), the worst angle margin
    min |arg(lambda)| - alpha*pi/2, the ladder rule that fired, the verdict."""

    coefficients: CharPoly
    discriminant: float
    eigenvalues: tuple
    min_arg_margin: float
    applied_rule: AppliedRule
    verdict: Verdict


def jacobian_at_dfe(p: ModelParameters) -> np.ndarray:
    """4x4 Jacobian of the vector field at Sigma_0 = (Lambda/mu, 0, 0, 0)."""
    s0 = p.recruitment / p.natural_death
    bs = p.contact_rate * s0
    return np.array(
        [
            [-p.natural_death, -bs, -bs * p.eta_C, -bs * p.eta_A],
            [0.0, bs - p.xi3, bs * p.eta_C + p.default_C, bs * p.eta_A + p.treat_A],
            [0.0, p.treat_I, -p.xi2, 0.0],
            [0.0, p.default_I, 0.0, -p.xi1],
        ]
    )


def dfe_char_poly(p: ModelParameters) -> CharPoly:
    """Closed-form b1, b2, b3 of the cubic factor.

    Cross-verified on every call against the numerically extracted
    characteristic polynomial of the Jacobian's lower-right 3x3 block; a
    discrepancy beyond 1e-9 relative aborts (it would mean the closed forms
    and the matrix have diverged).
    """
    mu = p.natural_death
    lam_beta = p.recruitment * p.contact_rate
    c = derived_constants(p)
    xi1, xi2, xi3 = c.xi1, c.xi2, c.xi3

    b1 = -(lam_beta - mu * (xi1 + xi2 + xi3)) / mu
    b2 = -(
        lam_beta * (p.eta_A * p.default_I + p.eta_C * p.treat_I + xi1 + xi2)
        - mu
        * (
            p.aids_death * (xi2 + xi3)
            + p.treat_A * (mu + xi2 + p.treat_I)
            + mu * (xi2 + p.default_C + 2.0 * xi3)
            + p.default_C * p.default_I
        )
    ) / mu
    b3 = -(p.recruitment * c.script_N - mu * c.script_D) / mu

    block = jacobian_at_dfe(p)[1:, 1:]
    numeric = np.poly(block)  # [1, b1, b2, b3] from eigenvalues
    for closed, extracted in zip((b1, b2, b3), numeric[1:]):
        scale = max(1.0, abs(closed))
        if abs(closed - extracted) > 1e-9 * scale:
            raise RuntimeError(
                f"characteristic coefficients inconsistent: closed form {closed!r} "
                f"vs numeric {extracted!r}"
            )
    return CharPoly(b1=b1, b2=b2, b3=b3)


def cubic_discriminant(c: CharPoly) -> float:
    """Standard discriminant of the monic cubic; > 0 iff three distinct real roots."""
    b1, b2, b3 = c.b1, c.b2, c.b3
    return (
        18.0 * b1 * b2 * b3
        + (b1 * b2) ** 2
        - 4.0 * b3 * b1**3
        - 4.0 * b2**3
        - 27.0 * b3**2
    )


def cubic_roots(c: CharPoly) -> tuple[complex, complex, complex]:
    """Closed-form roots of lambda^3 + b1*lambda^2 + b2*lambda + b3.

    Reduces to the depressed cubic t^3 + p*t + q via lambda = t - b1/3, then
    uses the trigonometric form when all roots are real (D >= 0, p < 0) and
    Cardano's form otherwise. Roots are returned sorted by (real, imag).
    """
    b1, b2, b3 = c.b1, c.b2, c.b3
    shift = -b1 / 3.0
    pc = b2 - b1 * b1 / 3.0
    qc = 2.0 * b1**3 / 27.0 - b1 * b2 / 3.0 + b3
    disc = cubic_discriminant(c)

    if disc >= 0.0 and pc < 0.0:
        # three real roots (distinct when disc > 0, repeated at disc = 0)
        m = 2.0 * math.sqrt(-pc / 3.0)
        arg = 3.0 * qc / (pc * m)  # equals 3q/(2p) * sqrt(-3/p)
        arg = min(1.0, max(-1.0, arg))
        theta = math.acos(arg)
        roots = [
            complex(m * math.cos((theta - 2.0 * math.pi * k) / 3.0) + shift, 0.0)
            for k in range(3)
        ]
    elif disc >= 0.0:
        # disc >= 0 with p >= 0 forces p = q = 0: triple root
        roots = [complex(shift, 0.0)] * 3
    else:
        s = math.sqrt(qc * qc / 4.0 + pc**3 / 27.0)
        u = math.copysign(abs(-qc / 2.0 + s) ** (1.0 / 3.0), -qc / 2.0 + s)
        v = math.copysign(abs(-qc / 2.0 - s) ** (1.0 / 3.0), -qc / 2.0 - s)
        real_root = u + v + shift
        re_pair = -(u + v) / 2.0 + shift
        im_pair = math.sqrt(3.0) * (u - v) / 2.0
        roots = [
            complex(real_root, 0.0),
            complex(re_pair, im_pair),
            complex(re_pair, -im_pair),
        ]
    # One polish pass tightens the closed forms to near machine precision;
    # skipped where p' is tiny (multiple roots), where Newton is erratic.
    scale = 1.0 + abs(b1) + abs(b2) + abs(b3)
    polished = []
    for z in roots:
        dp = 3.0 * z * z + 2.0 * b1 * z + b2
        if abs(dp) > 1e-8 * scale:
            z = z - (((z + b1) * z + b2) * z + b3) / dp
        polished.append(z)
    polished.sort(key=lambda z: (z.real, z.imag))
    return tuple(polished)


def matignon_margin(eigenvalues: Sequence[complex], alpha: float) -> float:
    """min |arg(lambda)| - alpha*pi/2 over the eigenvalues.

    Positive means every eigenvalue clears the stability sector. The argument
    of an exactly zero eigenvalue is taken as 0, which drives the margin
    negative; callers should treat that case as degenerate rather than as a
    strict instability.
    """
    if len(eigenvalues) == 0:
        raise ValueError("need at least one eigenvalue")
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must satisfy 0 < alpha <= 1, got {alpha}")
    angles = [abs(cmath.phase(z)) if z != 0 else 0.0 for z in eigenvalues]
    return min(angles) - alpha * math.pi / 2.0


def _rule_ladder(coeffs: CharPoly, disc: float, alpha: float):
    """(rule, predicted verdict) from the coefficient conditions alone.

    A None verdict means the rule carries no prediction of its own: rule (v)
    only states a violated necessary condition, and an inconclusive ladder
    defers entirely to the angle test.
    """
    b1, b2, b3 = coeffs.b1, coeffs.b2, coeffs.b3
    if b3 <= 0.0:
        return AppliedRule.NECESSARY_B3_VIOLATED, None
    if disc > 0.0:
        hurwitz = b1 > 0.0 and b3 > 0.0 and b1 * b2 - b3 > 0.0
        return AppliedRule.ROUTH_HURWITZ_I, Verdict.STABLE if hurwitz else Verdict.UNSTABLE
    if disc < 0.0 and b1 >= 0.0 and b2 >= 0.0 and b3 > 0.0 and alpha < 2.0 / 3.0:
        return AppliedRule.RULE_II, Verdict.STABLE
    if disc < 0.0 and b1 < 0.0 and b2 < 0.0 and alpha > 2.0 / 3.0:
        return AppliedRule.RULE_III, Verdict.UNSTABLE
    if disc < 0.0 and b1 > 0.0 and b2 > 0.0 and abs(b1 * b2 - b3) <= RULE_IV_TOL:
        return AppliedRule.RULE_IV, Verdict.STABLE
    return AppliedRule.INCONCLUSIVE, None


def classify_dfe(p: ModelParameters, alpha: float) -> StabilityReport:
    """Stability report for Sigma_0 at fractional order alpha.

    Applies the rule ladder in the module-docstring order, then cross-checks
    against the direct angle test on the actual eigenvalues. The angle test
    is authoritative; disagreement (possible only on ladder misfire) is
    logged as a warning. alpha = 1 is handled by the same machinery, where
    the angle condition coincides with classical Routh-Hurwitz stability.
    """
    coeffs = dfe_char_poly(p)
    disc = cubic_discriminant(coeffs)
    roots = cubic_roots(coeffs)
    eigenvalues = (complex(-p.natural_death, 0.0),) + roots
    margin = matignon_margin(eigenvalues, alpha)

    scale = max(1.0, max(abs(z) for z in eigenvalues))
    degenerate = any(abs(z) <= _DEGENERATE_TOL * scale for z in eigenvalues)
    if degenerate or margin == 0.0:
        angle_verdict = Verdict.INCONCLUSIVE
    elif margin > 0.0:
        angle_verdict = Verdict.STABLE
    else:
        angle_verdict = Verdict.UNSTABLE

    rule, rule_verdict = _rule_ladder(coeffs, disc, alpha)
    if rule_verdict is not None and rule_verdict != angle_verdict:
        logger.warning(
            "rule %s says %s but the angle test says %s (margin %.3e); "
            "using the angle verdict",
            rule.value,
            rule_verdict.value,
            angle_verdict.value,
            margin,
        )

    return StabilityReport(
        coefficients=coeffs,
        discriminant=disc,
        eigenvalues=eigenvalues,
        min_arg_margin=margin,
        applied_rule=rule,
        verdict=angle_verdict,
    )
