"""SICA compartmental HIV/AIDS model as a Caputo fractional system.

Compartments: S (susceptible), I (HIV-infected, pre-AIDS, untreated),
C (chronic, under antiretroviral treatment), A (AIDS stage). With the force
of infection lam = beta*(I + eta_C*C + eta_A*A), the vector field is

    S' = Lambda - lam*S - mu*S
    I' = lam*S - xi3*I + omega*C + gamma*A
    C' = phi*I - xi2*C
    A' = rho*I - xi1*A

where xi1 = gamma + mu + d, xi2 = omega + mu, xi3 = rho + phi + mu. Rates are
per year. The biologically feasible region is
Omega = {(S,I,C,A) >= 0 : N = S+I+C+A <= Lambda/mu}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .fde_core import VectorField

__all__ = [
    "ModelParameters",
    "State",
    "Violation",
    "validate_params",
    "force_of_infection",
    "rhs",
    "vector_field",
    "total_population",
    "population_cap",
    "first_negative_step",
]

NONNEGATIVITY_TOL = 1e-8  # numerical slack on the analytic nonnegativity


@dataclass(frozen=True)
class ModelParameters:
    """The ten model rates and modifiers.

    Attributes:
        recruitment: Lambda, inflow of susceptibles (individuals/year).
        natural_death: mu (1/year).
        contact_rate: beta (1/(individual*year)).
        eta_C: infectiousness modifier of C relative to I (<= 1 expected).
        eta_A: infectiousness modifier of A relative to I (>= 1 expected).
        treat_I: phi, treatment uptake rate of I (1/year).
        default_I: rho, progression rate I -> A (1/year).
        treat_A: gamma, treatment rate A -> I (1/year).
        default_C: omega, treatment default rate C -> I (1/year).
        aids_death: d, AIDS-induced death rate (1/year).
    """

    recruitment: float
    natural_death: float
    contact_rate: float
    eta_C: float
    eta_A: float
    treat_I: float
    default_I: float
    treat_A: float
    default_C: float
    aids_death: float

    @property
    def xi1(self) -> float:
        return self.treat_A + self.natural_death + self.aids_death

    @property
    def xi2(self) -> float:
        return self.default_C + self.natural_death

    @property
    def xi3(self) -> float:
        return self.default_I + self.treat_I + self.natural_death

    def require_valid(self) -> None:
        """Raise ValueError listing every hard invariant violation."""
        errors = [v.message for v in validate_params(self) if v.severity == "error"]
        if errors:
            raise ValueError("invalid model parameters: " + "; ".join(errors))


class State(NamedTuple):
    """One point (S, I, C, A) of the compartment space."""

    S: float
    I: float
    C: float
    A: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


class Violation(NamedTuple):
    severity: str  # "error" for math-breaking values, "warning" otherwise
    message: str


def validate_params(p: ModelParameters) -> list[Violation]:
    """Check parameter invariants; empty list means valid.

    Nonnegative rates, mu > 0 and Lambda > 0 are hard errors (the equilibria
    divide by mu and the model is meaningless without inflow). eta_A >= 1 and
    eta_C <= 1 are modeling assumptions whose violation leaves the math
    defined, so they only warn.
    """
    out: list[Violation] = []
    for name, value in (
        ("recruitment", p.recruitment),
        ("natural_death", p.natural_death),
        ("contact_rate", p.contact_rate),
        ("eta_C", p.eta_C),
        ("eta_A", p.eta_A),
        ("treat_I", p.treat_I),
        ("default_I", p.default_I),
        ("treat_A", p.treat_A),
        ("default_C", p.default_C),
        ("aids_death", p.aids_death),
    ):
        if not np.isfinite(value):
            out.append(Violation("error", f"{name} must be finite"))
        elif value < 0:
            out.append(Violation("error", f"{name} must be nonnegative, got {value}"))
    if np.isfinite(p.natural_death) and p.natural_death <= 0:
        out.append(Violation("error", "natural death rate must be positive"))
    if np.isfinite(p.recruitment) and p.recruitment <= 0:
        out.append(Violation("error", "recruitment rate must be positive"))
    if np.isfinite(p.eta_A) and p.eta_A < 1:
        out.append(
            Violation("warning", f"eta_A = {p.eta_A} < 1 breaks the relative-infectiousness assumption")
        )
    if np.isfinite(p.eta_C) and p.eta_C > 1:
        out.append(
            Violation("warning", f"eta_C = {p.eta_C} > 1 breaks the treatment-suppression assumption")
        )
    return out


def force_of_infection(p: ModelParameters, x) -> float:
    """Per-susceptible infection rate beta*(I + eta_C*C + eta_A*A)."""
    S, I, C, A = np.asarray(x, dtype=float)
    return p.contact_rate * (I + p.eta_C * C + p.eta_A * A)


def rhs(p: ModelParameters, x) -> np.ndarray:
    """Vector field of the four compartment equations at state x."""
    S, I, C, A = np.asarray(x, dtype=float)
    lam = p.contact_rate * (I + p.eta_C * C + p.eta_A * A)
    return np.array(
        [
            p.recruitment - lam * S - p.natural_death * S,
            lam * S - p.xi3 * I + p.default_C * C + p.treat_A * A,
            p.treat_I * I - p.xi2 * C,
            p.default_I * I - p.xi1 * A,
        ]
    )


def vector_field(p: ModelParameters) -> VectorField:
    """Solver-ready autonomous right-hand side (time argument ignored)."""
    return VectorField(fn=lambda t, x: rhs(p, x), dimension=4)


def total_population(x) -> float:
    return float(np.sum(np.asarray(x, dtype=float)))


def population_cap(p: ModelParameters) -> float:
    """Upper bound Lambda/mu of N on the feasible region."""
    return p.recruitment / p.natural_death


def first_negative_step(states: np.ndarray, tol: float = NONNEGATIVITY_TOL) -> Optional[int]:
    """Index of the first grid point with a component below -tol, if any.

    Trajectories from nonnegative initial data stay nonnegative analytically;
    an excursion beyond the tolerance signals solver misconfiguration and the
    caller is expected to abort rather than clamp.
    """
    bad = np.where((states < -tol).any(axis=1))[0]
    return int(bad[0]) if bad.size else None
