"""Characteristic cubic, discriminant, closed-form roots, angle condition."""

import dataclasses
import math

import numpy as np
import pytest

from fracsica import (
    AppliedRule,
    CharPoly,
    Verdict,
    classify_dfe,
    compute_r0,
    cubic_discriminant,
    cubic_roots,
    dfe_char_poly,
    jacobian_at_dfe,
    matignon_margin,
    rhs,
)
from fracsica.stability import _rule_ladder

from conftest import MU, baseline_params

# Locked regressions for the below-threshold benchmark cubic.
B1 = 2.4171066384814495
B2 = 1.3990534342116974
B3 = 0.006519579191247798
DISC = 0.5093095984212295
CUBIC_ROOTS_LOW = (
    -1.4654512476266053,
    -0.9469573393290666,
    -0.0046980515257775135,
)


def sorted_np_roots(c: CharPoly):
    r = np.roots([1.0, c.b1, c.b2, c.b3])
    return sorted((complex(z) for z in r), key=lambda z: (z.real, z.imag))


class TestJacobian:
    def test_matches_central_differences(self, low_contact):
        x0 = np.array([2.1 * 69.54, 0.0, 0.0, 0.0])
        jac = jacobian_at_dfe(low_contact)
        h = 1e-6
        for j in range(4):
            e = np.zeros(4)
            e[j] = h
            col = (rhs(low_contact, x0 + e) - rhs(low_contact, x0 - e)) / (2 * h)
            # rhs is quadratic in the state, so central differences are exact
            # up to roundoff
            assert np.max(np.abs(jac[:, j] - col)) <= 1e-8

    def test_structural_entries(self, low_contact):
        jac = jacobian_at_dfe(low_contact)
        bs = 0.001 * 2.1 * 69.54
        assert jac[0, 0] == pytest.approx(-MU, rel=1e-15)
        assert jac[1, 1] == pytest.approx(bs - low_contact.xi3, rel=1e-12)
        # the A column of the infected equation carries both the infection
        # term and the treatment return flow
        assert jac[1, 3] == pytest.approx(bs * 1.3 + 0.33, rel=1e-12)
        assert jac[2, 1] == low_contact.treat_I
        assert np.all(jac[1:, 0] == 0.0)

    def test_susceptible_decouples(self, low_contact):
        # -mu must be an eigenvalue of the full Jacobian exactly
        eigs = np.linalg.eigvals(jacobian_at_dfe(low_contact))
        assert np.min(np.abs(eigs - (-MU))) <= 1e-9


class TestCharPoly:
    def test_benchmark_coefficients(self, low_contact):
        c = dfe_char_poly(low_contact)
        assert c.b1 == pytest.approx(B1, rel=1e-12)
        assert c.b2 == pytest.approx(B2, rel=1e-12)
        assert c.b3 == pytest.approx(B3, rel=1e-12)

    def test_constant_term_tracks_threshold_sign(self, low_contact, high_contact):
        # b3 > 0 iff R0 < 1 for this family
        assert dfe_char_poly(low_contact).b3 > 0.0
        assert dfe_char_poly(high_contact).b3 < 0.0
        assert compute_r0(low_contact) < 1.0 < compute_r0(high_contact)

    def test_coefficients_match_eigenvalue_expansion(self, high_contact):
        c = dfe_char_poly(high_contact)
        block = jacobian_at_dfe(high_contact)[1:, 1:]
        numeric = np.poly(block)
        assert c.b1 == pytest.approx(numeric[1], rel=1e-10)
        assert c.b2 == pytest.approx(numeric[2], rel=1e-10)
        assert c.b3 == pytest.approx(numeric[3], rel=1e-8)


class TestDiscriminant:
    def test_textbook_cases(self):
        # lambda^3 - lambda: roots {-1, 0, 1}, discriminant 4
        assert cubic_discriminant(CharPoly(0.0, -1.0, 0.0)) == 4.0
        # lambda^3: triple root, discriminant 0
        assert cubic_discriminant(CharPoly(0.0, 0.0, 0.0)) == 0.0
        # complex pair present: negative
        assert cubic_discriminant(CharPoly(0.0, 0.0, 1.0)) == -27.0

    def test_benchmark_value(self, low_contact):
        d = cubic_discriminant(dfe_char_poly(low_contact))
        assert d == pytest.approx(DISC, rel=1e-12)
        assert d > 0.0

    def test_sign_agrees_with_root_structure(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            c = CharPoly(*rng.uniform(-5.0, 5.0, size=3))
            d = cubic_discriminant(c)
            if abs(d) < 1e-6:
                continue  # conditioning guard near the repeated-root surface
            complex_pair = any(abs(z.imag) > 1e-9 for z in sorted_np_roots(c))
            assert (d < 0.0) == complex_pair


class TestCubicRoots:
    def test_distinct_real_roots(self):
        roots = cubic_roots(CharPoly(0.0, -7.0, 6.0))  # (x-1)(x-2)(x+3)
        assert roots == pytest.approx((-3.0, 1.0, 2.0), rel=1e-12)
        assert all(z.imag == 0.0 for z in roots)

    def test_triple_root(self):
        assert cubic_roots(CharPoly(0.0, 0.0, 0.0)) == (0j, 0j, 0j)
        # shifted triple root (x+2)^3
        roots = cubic_roots(CharPoly(6.0, 12.0, 8.0))
        assert roots == pytest.approx((-2.0, -2.0, -2.0), abs=1e-7)

    def test_repeated_root_on_trig_branch(self):
        # (x+1)^2 (x+4): discriminant 0 with p < 0
        roots = cubic_roots(CharPoly(6.0, 9.0, 4.0))
        assert roots == pytest.approx((-4.0, -1.0, -1.0), abs=1e-7)

    def test_complex_pair(self):
        # (x+1)(x^2+1)
        roots = cubic_roots(CharPoly(1.0, 1.0, 1.0))
        assert roots == pytest.approx((-1.0, -1j, 1j), abs=1e-12)

    def test_benchmark_spectrum(self, low_contact):
        roots = cubic_roots(dfe_char_poly(low_contact))
        assert roots == pytest.approx(CUBIC_ROOTS_LOW, rel=1e-10)

    def test_random_draws_satisfy_polynomial_and_match_companion_matrix(self):
        rng = np.random.default_rng(42)
        checked = 0
        for _ in range(300):
            c = CharPoly(*rng.uniform(-5.0, 5.0, size=3))
            if abs(cubic_discriminant(c)) < 1e-6:
                continue  # conditioning guard near the repeated-root surface
            mine = cubic_roots(c)
            for z in mine:
                residual = z**3 + c.b1 * z**2 + c.b2 * z + c.b3
                scale = max(1.0, abs(z)) ** 3 + abs(c.b1) + abs(c.b2) + abs(c.b3)
                assert abs(residual) <= 1e-11 * scale
            # both methods carry O(1e-9) error on mildly conditioned cubics,
            # so the cross-method pairing is only a sanity bound
            for a, b in zip(mine, sorted_np_roots(c)):
                assert abs(a - b) <= 1e-8 * max(1.0, abs(b))
            checked += 1
        assert checked > 250


class TestMatignonMargin:
    def test_real_negative_eigenvalue_classical_order(self):
        assert matignon_margin([-1.0 + 0j], 1.0) == pytest.approx(math.pi / 2, rel=1e-15)

    def test_real_positive_eigenvalue_is_always_outside(self):
        assert matignon_margin([1.0 + 0j], 0.8) == pytest.approx(-0.4 * math.pi, rel=1e-15)

    def test_imaginary_pair_clears_shrunken_sector(self):
        assert matignon_margin([1j, -1j], 0.9) == pytest.approx(0.05 * math.pi, rel=1e-12)

    def test_worst_eigenvalue_controls(self):
        margin = matignon_margin([-5.0 + 0j, 0.1 + 1j, -0.1 + 1j], 0.5)
        expected = math.atan2(1.0, 0.1) - 0.25 * math.pi
        assert margin == pytest.approx(expected, rel=1e-12)

    def test_zero_eigenvalue_counts_as_angle_zero(self):
        assert matignon_margin([0j, -1.0 + 0j], 0.5) == pytest.approx(-0.25 * math.pi)

    def test_rejects_empty_and_bad_order(self):
        with pytest.raises(ValueError):
            matignon_margin([], 0.5)
        with pytest.raises(ValueError):
            matignon_margin([-1.0 + 0j], 0.0)
        with pytest.raises(ValueError):
            matignon_margin([-1.0 + 0j], 1.2)


class TestRuleLadder:
    def test_necessary_condition_gate(self):
        c = CharPoly(1.0, 1.0, -0.5)
        rule, verdict = _rule_ladder(c, cubic_discriminant(c), 0.9)
        assert rule is AppliedRule.NECESSARY_B3_VIOLATED
        assert verdict is None

    def test_routh_hurwitz_both_ways(self):
        stable = CharPoly(6.0, 11.0, 6.0)  # (x+1)(x+2)(x+3)
        rule, verdict = _rule_ladder(stable, cubic_discriminant(stable), 1.0)
        assert (rule, verdict) == (AppliedRule.ROUTH_HURWITZ_I, Verdict.STABLE)

        unstable = CharPoly(0.0, -7.0, 6.0)  # roots {-3, 1, 2}
        rule, verdict = _rule_ladder(unstable, cubic_discriminant(unstable), 1.0)
        assert (rule, verdict) == (AppliedRule.ROUTH_HURWITZ_I, Verdict.UNSTABLE)

    def test_small_order_sector_rule(self):
        # (x+2)(x^2 - x + 4.25): complex pair at 0.5 +/- 2i
        c = CharPoly(1.0, 2.25, 8.5)
        d = cubic_discriminant(c)
        assert d < 0.0
        assert _rule_ladder(c, d, 0.5) == (AppliedRule.RULE_II, Verdict.STABLE)
        # same polynomial above the 2/3 order bound carries no prediction
        assert _rule_ladder(c, d, 0.9) == (AppliedRule.INCONCLUSIVE, None)

    def test_large_order_instability_rule(self):
        # (x+5)(x^2 - 6x + 10): complex pair at 3 +/- i
        c = CharPoly(-1.0, -20.0, 50.0)
        d = cubic_discriminant(c)
        assert d < 0.0
        assert _rule_ladder(c, d, 0.9) == (AppliedRule.RULE_III, Verdict.UNSTABLE)

    def test_product_identity_rule(self):
        # b1*b2 = b3 exactly: (x+1)(x^2+1)
        c = CharPoly(1.0, 1.0, 1.0)
        d = cubic_discriminant(c)
        assert d < 0.0
        assert _rule_ladder(c, d, 0.8) == (AppliedRule.RULE_IV, Verdict.STABLE)

    def test_falls_through_to_inconclusive(self):
        # (x+1)(x^2+2x+2): stable but matched by no coefficient rule at 0.9
        c = CharPoly(3.0, 4.0, 2.0)
        d = cubic_discriminant(c)
        assert d < 0.0
        assert _rule_ladder(c, d, 0.9) == (AppliedRule.INCONCLUSIVE, None)
        roots = cubic_roots(c)
        assert roots == pytest.approx((-1.0 - 1j, -1.0, -1.0 + 1j), abs=1e-12)
        assert matignon_margin(roots, 0.9) == pytest.approx(
            0.75 * math.pi - 0.45 * math.pi, rel=1e-12
        )


class TestClassifyDfe:
    @pytest.mark.parametrize("alpha", [0.7, 0.8, 0.9, 1.0])
    def test_below_threshold_is_stable_by_first_rule(self, low_contact, alpha):
        rep = classify_dfe(low_contact, alpha)
        assert rep.applied_rule is AppliedRule.ROUTH_HURWITZ_I
        assert rep.verdict is Verdict.STABLE
        assert rep.min_arg_margin > 0.0
        assert rep.discriminant == pytest.approx(DISC, rel=1e-12)
        assert rep.min_arg_margin == pytest.approx(
            math.pi - alpha * math.pi / 2.0, rel=1e-12
        )

    @pytest.mark.parametrize("alpha", [0.5, 0.9, 1.0])
    def test_above_threshold_is_unstable(self, high_contact, alpha):
        rep = classify_dfe(high_contact, alpha)
        assert rep.applied_rule is AppliedRule.NECESSARY_B3_VIOLATED
        assert rep.verdict is Verdict.UNSTABLE
        assert rep.min_arg_margin < 0.0
        assert max(z.real for z in rep.eigenvalues) > 0.0

    def test_spectrum_layout(self, low_contact):
        rep = classify_dfe(low_contact, 0.9)
        assert rep.eigenvalues[0] == complex(-MU, 0.0)
        assert rep.eigenvalues[1:] == pytest.approx(CUBIC_ROOTS_LOW, rel=1e-10)

    def test_no_contact_spectrum_is_real_and_stable(self, low_contact):
        p = dataclasses.replace(low_contact, contact_rate=0.0)
        rep = classify_dfe(p, 0.9)
        assert rep.verdict is Verdict.STABLE
        assert rep.discriminant > 0.0
        assert all(z.imag == 0.0 and z.real < 0.0 for z in rep.eigenvalues)

    def test_threshold_crossing_is_degenerate(self, low_contact):
        beta_crit = 0.001 / compute_r0(low_contact)
        p = dataclasses.replace(low_contact, contact_rate=beta_crit)
        rep = classify_dfe(p, 0.9)
        assert rep.verdict is Verdict.INCONCLUSIVE
        assert abs(rep.coefficients.b3) <= 1e-12
