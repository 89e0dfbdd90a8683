"""Equilibria and basic reproduction number of the SICA system, closed form.

With xi1, xi2, xi3 from the parameter set and

    N_c = beta*(xi2*(xi1 + rho*eta_A) + eta_C*phi*xi1)
    D_c = mu*(xi2*(rho + xi1) + phi*xi1 + rho*d) + rho*omega*d

the basic reproduction number is R0 = (Lambda/mu) * N_c / D_c. The
disease-free equilibrium is Sigma_0 = (Lambda/mu, 0, 0, 0) for any valid
parameters; a unique endemic equilibrium with all components positive exists
exactly when R0 > 1:

    S* = D_c/N_c
    I* = xi1*xi2*(Lambda*N_c - mu*D_c) / (D_c*N_c)
    C* = phi*xi1*(Lambda*N_c - mu*D_c) / (D_c*N_c)
    A* = rho*xi2*(Lambda*N_c - mu*D_c) / (D_c*N_c)

Lambda*N_c - mu*D_c > 0 is algebraically equivalent to R0 > 1, which makes
the sign of I*, C*, A* track the threshold. equilibrium_residual provides the
independent check that a claimed equilibrium actually annihilates the vector
field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .sica_model import ModelParameters, State, rhs

__all__ = [
    "DerivedConstants",
    "EquilibriumSet",
    "derived_constants",
    "compute_r0",
    "disease_free_equilibrium",
    "endemic_equilibrium",
    "equilibrium_set",
    "equilibrium_residual",
]


@dataclass(frozen=True)
class DerivedConstants:
    """Aggregate rates and the two reproduction-number building blocks.

    All five are strictly positive for valid parameters with beta > 0.
    """

    xi1: float
    xi2: float
    xi3: float
    script_N: float
    script_D: float


@dataclass(frozen=True)
class EquilibriumSet:
    """R0, the disease-free equilibrium, and (iff R0 > 1) the endemic one."""

    r0: float
    sigma0: State
    sigma_star: Optional[State]
    constants: DerivedConstants


def derived_constants(p: ModelParameters) -> DerivedConstants:
    xi1, xi2, xi3 = p.xi1, p.xi2, p.xi3
    script_N = p.contact_rate * (xi2 * (xi1 + p.default_I * p.eta_A) + p.eta_C * p.treat_I * xi1)
    script_D = (
        p.natural_death
        * (xi2 * (p.default_I + xi1) + p.treat_I * xi1 + p.default_I * p.aids_death)
        + p.default_I * p.default_C * p.aids_death
    )
    return DerivedConstants(xi1=xi1, xi2=xi2, xi3=xi3, script_N=script_N, script_D=script_D)


def compute_r0(p: ModelParameters) -> float:
    """Basic reproduction number (Lambda/mu) * N_c / D_c."""
    c = derived_constants(p)
    return (p.recruitment / p.natural_death) * c.script_N / c.script_D


def disease_free_equilibrium(p: ModelParameters) -> State:
    return State(S=p.recruitment / p.natural_death, I=0.0, C=0.0, A=0.0)


def endemic_equilibrium(p: ModelParameters) -> Optional[State]:
    """Closed-form endemic equilibrium, or None when R0 <= 1.

    The boundary R0 = 1 returns None: the closed form degenerates onto the
    disease-free point there (all infected components hit zero exactly).
    """
    c = derived_constants(p)
    if compute_r0(p) <= 1.0:
        return None
    excess = p.recruitment * c.script_N - p.natural_death * c.script_D
    denom = c.script_D * c.script_N
    return State(
        S=c.script_D / c.script_N,
        I=c.xi1 * c.xi2 * excess / denom,
        C=p.treat_I * c.xi1 * excess / denom,
        A=p.default_I * c.xi2 * excess / denom,
    )


def equilibrium_set(p: ModelParameters) -> EquilibriumSet:
    return EquilibriumSet(
        r0=compute_r0(p),
        sigma0=disease_free_equilibrium(p),
        sigma_star=endemic_equilibrium(p),
        constants=derived_constants(p),
    )


def equilibrium_residual(p: ModelParameters, x) -> float:
    """Max-norm of the vector field at x; ~0 certifies an equilibrium."""
    return float(np.max(np.abs(rhs(p, x))))
