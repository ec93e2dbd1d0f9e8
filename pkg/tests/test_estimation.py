import math

import pytest

from weakmeas import (
    ConditionalPair,
    FisherReport,
    PostSelectOutcome,
    WeakValueReferenceZero,
    ZeroInformation,
    ZeroProbability,
    ZeroProbeCoupling,
    apparent_fisher,
    COMPENSATED_PPBS,
    UNCOMPENSATED_PPBS,
    cramer_rao_bound,
    diag_states,
    estimate_epsilon,
    exact_joint_probabilities,
    extract_weak_value,
    fisher_information,
    joint_probabilities_linear,
    linear_pol_state,
    stokes_hv,
    weak_value,
)

F_D, F_A = PostSelectOutcome.D, PostSelectOutcome.A


def wv_a(theta_deg):
    half = math.radians(theta_deg) / 2.0
    return (math.cos(half) + math.sin(half)) / (math.cos(half) - math.sin(half))


def exact_eps_hat(theta_deg, eps):
    """Closed form of the moment estimator applied to ideal-gate exact
    conditionals: eps / (1 + eps^2 wv^2). Derived by hand from the
    two-photon amplitudes (u +- eps v)/2 with u = c - s, v = c + s."""
    return eps / (1.0 + (eps * wv_a(theta_deg)) ** 2)


class TestConditionalPair:
    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError):
            ConditionalPair(0.6, 0.5)

    def test_from_counts(self):
        c = ConditionalPair.from_counts(58, 42)
        assert c.p_d == pytest.approx(0.58)
        assert c.n_events == 100

    def test_from_counts_rejects_zero(self):
        with pytest.raises(ZeroProbability):
            ConditionalPair.from_counts(10, 0)

    def test_from_joint(self):
        d = joint_probabilities_linear(linear_pol_state(0.0), 0.08)
        c = ConditionalPair.from_joint(d, F_A)
        assert c.p_d == pytest.approx(0.58)
        assert c.n_events is None


class TestEstimateEpsilon:
    def test_recovers_operating_point(self):
        r = estimate_epsilon(ConditionalPair(0.58, 0.42), 1.0)
        assert r.epsilon_hat == pytest.approx(0.08, abs=1e-15)
        assert r.sigma_epsilon is None

    def test_symmetric_outcomes_give_zero(self):
        for wv in (1.0, -2.5, 7.0):
            assert estimate_epsilon(ConditionalPair(0.5, 0.5), wv).epsilon_hat == 0.0

    def test_exact_model_bias_at_zero_theta(self):
        eps = 0.08
        d = exact_joint_probabilities(0.0, eps)
        cond = ConditionalPair.from_joint(d, F_A)
        assert cond.p_d == pytest.approx(0.57949, abs=5e-6)
        r = estimate_epsilon(cond, 1.0, F_A)
        assert r.epsilon_hat == pytest.approx(exact_eps_hat(0.0, eps), abs=1e-12)
        assert r.epsilon_hat == pytest.approx(0.07949, abs=5e-6)

    def test_zero_reference_raises(self):
        with pytest.raises(WeakValueReferenceZero):
            estimate_epsilon(ConditionalPair(0.6, 0.4), 0.0)

    def test_binomial_sigma(self):
        r = estimate_epsilon(ConditionalPair(0.5, 0.5, n_events=400), 2.0)
        assert r.sigma_epsilon == pytest.approx(math.sqrt(0.25 / 400) / 2.0)

    @pytest.mark.parametrize("deg", [0.0, 10.0, 30.0, 45.0, 60.0, 130.0, 200.0])
    def test_round_trip_on_linear_conditionals(self, deg):
        eps = 0.03
        d = joint_probabilities_linear(linear_pol_state(deg), eps)
        if d.marginal_f(F_A) <= 0.0:
            return
        cond = ConditionalPair.from_joint(d, F_A)
        r = estimate_epsilon(cond, wv_a(deg), F_A)
        assert r.epsilon_hat == pytest.approx(eps, abs=1e-12)

    def test_bias_nondecreasing_towards_orthogonality(self):
        eps = 0.08
        biases = []
        for deg in (0.0, 30.0, 60.0, 80.0, 85.0):
            d = exact_joint_probabilities(deg, eps)
            r = estimate_epsilon(ConditionalPair.from_joint(d, F_A), wv_a(deg), F_A)
            assert r.epsilon_hat == pytest.approx(exact_eps_hat(deg, eps), abs=1e-12)
            biases.append(abs(r.epsilon_hat - eps))
        assert biases == sorted(biases)


class TestExtractWeakValue:
    def test_operating_point_value(self):
        eps = 0.08
        p_e = joint_probabilities_linear(linear_pol_state(0.0), eps)
        p_0 = joint_probabilities_linear(linear_pol_state(0.0), 0.0)
        got = extract_weak_value(p_e, p_0, F_A, eps)
        want = (math.log(1.16) - math.log(0.84)) / (4.0 * eps)
        assert got == pytest.approx(want, abs=1e-12)
        assert got == pytest.approx(1.0087, abs=5e-5)

    @pytest.mark.parametrize("deg", [0.0, 20.0, 45.0, 60.0])
    def test_small_probe_limit(self, deg):
        eps = 1e-6
        p_e = joint_probabilities_linear(linear_pol_state(deg), eps)
        p_0 = joint_probabilities_linear(linear_pol_state(deg), 0.0)
        got = extract_weak_value(p_e, p_0, F_A, eps)
        assert got == pytest.approx(wv_a(deg), rel=1e-6)

    def test_vertical_input(self):
        eps = 0.08
        p_e = joint_probabilities_linear(linear_pol_state(180.0), eps)
        p_0 = joint_probabilities_linear(linear_pol_state(180.0), 0.0)
        got = extract_weak_value(p_e, p_0, F_A, eps)
        assert got == pytest.approx(-1.0, abs=0.01)

    def test_convergence_is_at_least_first_order(self):
        # the two-outcome average cancels the linear term, so the error
        # should drop by at least 10x per decade of probe coupling
        deg = 30.0
        errors = []
        for eps in (1e-3, 1e-4, 1e-5):
            p_e = joint_probabilities_linear(linear_pol_state(deg), eps)
            p_0 = joint_probabilities_linear(linear_pol_state(deg), 0.0)
            errors.append(abs(extract_weak_value(p_e, p_0, F_A, eps) - wv_a(deg)))
        assert errors[0] / errors[1] > 10.0
        assert errors[1] / errors[2] > 10.0

    def test_zero_probe_coupling_raises(self):
        p_0 = joint_probabilities_linear(linear_pol_state(0.0), 0.0)
        with pytest.raises(ZeroProbeCoupling):
            extract_weak_value(p_0, p_0, F_A, 0.0)

    def test_zero_probability_raises(self):
        from weakmeas import CELLS, JointDistribution, MeterOutcome

        # an exactly-zero count cell makes the log-ratio undefined
        zero_cell = {
            (MeterOutcome.D, F_A): 0.0,
            (MeterOutcome.A, F_A): 0.5,
            (MeterOutcome.D, F_D): 0.25,
            (MeterOutcome.A, F_D): 0.25,
        }
        p_e = JointDistribution(zero_cell)
        p_0 = joint_probabilities_linear(linear_pol_state(0.0), 0.0)
        with pytest.raises(ZeroProbability):
            extract_weak_value(p_e, p_0, F_A, 0.08)


class TestFisherInformation:
    def test_horizontal_input(self):
        r = fisher_information(linear_pol_state(0.0))
        assert r.per_f[F_A] == pytest.approx(2.0, abs=1e-12)
        assert r.per_f[F_D] == pytest.approx(2.0, abs=1e-12)
        assert r.total == pytest.approx(4.0, abs=1e-12)

    def test_sixty_degrees_closed_form(self):
        r = fisher_information(linear_pol_state(60.0))
        sin60 = math.sin(math.radians(60.0))
        assert r.per_f[F_A] == pytest.approx(2.0 * (1.0 + sin60), abs=1e-12)
        assert r.per_f[F_D] == pytest.approx(2.0 * (1.0 - sin60), abs=1e-12)
        assert r.per_f[F_A] == pytest.approx(3.7321, abs=5e-5)
        assert r.per_f[F_D] == pytest.approx(0.2679, abs=5e-5)
        assert r.total == pytest.approx(4.0, abs=1e-9)

    def test_total_constant_on_fine_grid(self):
        for deg in range(0, 360):
            r = fisher_information(linear_pol_state(float(deg)))
            assert r.total == pytest.approx(4.0, abs=1e-9)
            assert r.per_f[F_A] + r.per_f[F_D] == pytest.approx(r.total, abs=1e-9)

    def test_orthogonal_postselection_defined_by_continuity(self):
        r = fisher_information(linear_pol_state(90.0))
        assert r.per_f[F_A] == pytest.approx(4.0, abs=1e-12)
        assert r.per_f[F_D] == pytest.approx(0.0, abs=1e-12)


class TestCramerRaoBound:
    def test_reciprocal(self):
        r = FisherReport({F_A: 2.0, F_D: 2.0}, 4.0)
        assert cramer_rao_bound(r, 1) == pytest.approx(0.25)

    def test_scaling(self):
        r = FisherReport({F_A: 2.0, F_D: 2.0}, 4.0)
        assert cramer_rao_bound(r, 10**6) == pytest.approx(2.5e-7)

    def test_postselected_strategy(self):
        per_a = fisher_information(linear_pol_state(60.0)).per_f[F_A]
        bound = cramer_rao_bound(FisherReport({F_A: per_a}, per_a), 10**6)
        assert bound == pytest.approx(2.679e-7, rel=2e-4)

    def test_zero_information_raises(self):
        with pytest.raises(ZeroInformation):
            cramer_rao_bound(FisherReport({F_A: 0.0}, 0.0), 100)

    def test_rejects_nonpositive_trials(self):
        r = FisherReport({F_A: 2.0}, 2.0)
        with pytest.raises(ValueError):
            cramer_rao_bound(r, 0)


class TestErrorInformationDuality:
    @pytest.mark.parametrize("deg", [0.0, 30.0, 60.0])
    def test_inverse_variance_equals_fisher_contribution(self, deg):
        n = 10**6
        psi = linear_pol_state(deg)
        pf = abs(
            (linear_pol_state(deg).amp_h - linear_pol_state(deg).amp_v)
        ) ** 2 / 2.0
        report = fisher_information(psi)
        cond = ConditionalPair(0.5, 0.5, n_events=n * pf)
        sigma = estimate_epsilon(cond, wv_a(deg), F_A).sigma_epsilon
        assert 1.0 / sigma**2 == pytest.approx(n * report.per_f[F_A], rel=1e-9)


class TestApparentFisher:
    def test_small_probe_recovers_analytic_curve(self):
        eps = 1e-5
        for deg in (0.0, 30.0, 60.0):
            p_e = exact_joint_probabilities(deg, eps)
            p_0 = exact_joint_probabilities(deg, 0.0)
            r = apparent_fisher(p_e, p_0, eps)
            want = fisher_information(linear_pol_state(deg))
            assert r.per_f[F_A] == pytest.approx(want.per_f[F_A], rel=1e-6)
            assert r.per_f[F_D] == pytest.approx(want.per_f[F_D], rel=1e-6)

    def test_uncompensated_gate_produces_asymmetric_deviation(self):
        eps = 0.08
        deg = 30.0
        p_e = exact_joint_probabilities(deg, eps, params=UNCOMPENSATED_PPBS)
        p_0 = exact_joint_probabilities(deg, 0.0, params=UNCOMPENSATED_PPBS)
        got = apparent_fisher(p_e, p_0, eps)
        want = fisher_information(linear_pol_state(deg))
        dev_a = got.per_f[F_A] / want.per_f[F_A]
        dev_d = got.per_f[F_D] / want.per_f[F_D]
        assert abs(dev_a - dev_d) > 0.05
        assert abs(got.total - 4.0) > 0.5

    def test_ideal_gate_total_stays_close(self):
        eps = 0.08
        p_e = exact_joint_probabilities(30.0, eps, params=COMPENSATED_PPBS)
        p_0 = exact_joint_probabilities(30.0, 0.0, params=COMPENSATED_PPBS)
        got = apparent_fisher(p_e, p_0, eps)
        assert abs(got.total - 4.0) < 0.1


class TestWeakValueReference:
    def test_reference_matches_weak_value_module(self):
        _, a = diag_states()
        for deg in (0.0, 25.0, 60.0):
            assert weak_value(linear_pol_state(deg), a, stokes_hv()).real == pytest.approx(
                wv_a(deg), abs=1e-12
            )
