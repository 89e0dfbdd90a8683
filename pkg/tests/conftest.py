"""Shared fixtures: baseline parameter sets, random draws, criterion log."""

import numpy as np
import pytest

from fracsica import ModelParameters

MU = 1 / 69.54


def baseline_params(contact_rate: float) -> ModelParameters:
    """The benchmark rate table with the given contact rate."""
    return ModelParameters(
        recruitment=2.1,
        natural_death=MU,
        contact_rate=contact_rate,
        eta_C=0.015,
        eta_A=1.3,
        treat_I=1.0,
        default_I=0.1,
        treat_A=0.33,
        default_C=0.09,
        aids_death=1.0,
    )


def draw_params(rng: np.random.Generator) -> ModelParameters:
    """One random valid parameter set, spanning both sides of R0 = 1."""
    return ModelParameters(
        recruitment=rng.uniform(0.5, 5.0),
        natural_death=rng.uniform(0.008, 0.08),
        contact_rate=float(np.exp(rng.uniform(np.log(1e-4), np.log(5e-2)))),
        eta_C=rng.uniform(0.0, 1.0),
        eta_A=rng.uniform(1.0, 2.0),
        treat_I=rng.uniform(0.05, 1.5),
        default_I=rng.uniform(0.02, 1.0),
        treat_A=rng.uniform(0.02, 1.0),
        default_C=rng.uniform(0.02, 1.0),
        aids_death=rng.uniform(0.1, 1.5),
    )


@pytest.fixture(scope="session")
def low_contact() -> ModelParameters:
    """Below-threshold scenario (R0 = 0.79587)."""
    return baseline_params(0.001)


@pytest.fixture(scope="session")
def high_contact() -> ModelParameters:
    """Above-threshold scenario (R0 = 7.95871)."""
    return baseline_params(0.01)


class CriterionLog:
    """Collects one pass/fail line per acceptance criterion for the summary."""

    def __init__(self):
        self.entries: dict[int, tuple[bool, str]] = {}

    def record(self, number: int, passed: bool, text: str) -> None:
        self.entries[number] = (passed, text)


_criterion_log = CriterionLog()


@pytest.fixture(scope="session")
def criterion_log() -> CriterionLog:
    return _criterion_log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criterion_log.entries:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criterion_log.entries):
        passed, text = _criterion_log.entries[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[PRIMARY {number}] {status}: {text}")
