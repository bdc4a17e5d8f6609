"""Residual equations, their finite-difference oracle, the pairwise
orthogonality predicate, and the max-cost ratio experiment."""

import math

import numpy as np
import pytest

from mechlab import (
    CheckConfig,
    MechanismSpec,
    SpaceConfig,
    conjecture1_predicate,
    evaluate,
    lower_bound_experiment,
    lp_distance,
    lp_residuals,
    max_cost,
    median_fits_conjecture_scan,
    near_kink,
    normalized_residuals,
    optimal_max_cost_two_agents,
    orthogonality_residual,
    residual_via_finite_difference,
    translate,
)
from mechlab.sampling import MEDIAN_COUNTEREXAMPLE

SP1 = SpaceConfig(1, 2.0)
SP2 = SpaceConfig(2, 2.0)
SP3 = SpaceConfig(3, 2.0)


class TestOrthogonalityResidual:
    def test_right_angle_on_unit_circle(self):
        assert orthogonality_residual((-1.0, 0.0), (1.0, 0.0), (0.0, 1.0)) == 0.0

    def test_output_at_agent(self):
        assert orthogonality_residual((-1.0, 0.0), (1.0, 0.0), (-1.0, 0.0)) == 0.0

    def test_median_counterexample_value(self):
        res = orthogonality_residual((0.0, 1.0, -1.0), (-1.0, 0.0, 1.0), (0.0, 0.0, 0.0))
        assert res == -1.0


class TestLpResiduals:
    def test_output_at_agent_is_exact_zero(self):
        rng = np.random.default_rng(20)
        for p in (1.5, 2.0, 3.0, 4.0):
            space = SpaceConfig(3, p)
            for _ in range(50):
                a, b = (tuple(rng.uniform(-10, 10, 3)) for _ in range(2))
                pair = lp_residuals(a, b, a, space)
                assert pair.r_g == 0.0 and pair.r_h == 0.0

    def test_p2_sphere_point(self):
        pair = lp_residuals((-1.0, 0.0), (1.0, 0.0), (0.0, 1.0), SP2)
        assert pair.r_g == 0.0 and pair.r_h == 0.0

    def test_p4_symmetric_point(self):
        pair = lp_residuals((-1.0, 0.0), (1.0, 0.0), (0.0, 1.0), SpaceConfig(2, 4.0))
        assert pair.r_g == 0.0 and pair.r_h == 0.0

    def test_p2_reduces_to_negated_orthogonality(self):
        rng = np.random.default_rng(21)
        for _ in range(500):
            m = int(rng.integers(1, 4))
            a, b, w = (tuple(rng.uniform(-10, 10, m)) for _ in range(3))
            pair = lp_residuals(a, b, w, SpaceConfig(m, 2.0))
            # sign convention: r_g = -<w-a, w-b> at p = 2
            assert pair.r_g == pair.r_h
            assert abs(pair.r_g + orthogonality_residual(a, b, w)) <= 1e-12

    def test_midpoint_p2_residual_value(self):
        pair = lp_residuals((-1.0, 0.0), (1.0, 0.0), (0.0, 0.0), SP2)
        assert pair.r_g == 1.0


class TestFiniteDifferenceOracle:
    def test_matches_on_spec_examples(self):
        cases = [
            ((-1.0, 0.0), (1.0, 0.0), (-1.0, 0.0), 3.0),   # w = a
            ((-1.0, 0.0), (1.0, 0.0), (0.0, 1.0), 2.0),    # sphere point
            ((-1.0, 0.0), (1.0, 0.0), (0.0, 0.0), 2.0),    # midpoint violation
        ]
        for a, b, w, p in cases:
            space = SpaceConfig(2, p)
            exact = lp_residuals(a, b, w, space)
            fd = residual_via_finite_difference(a, b, w, space)
            assert fd.r_g == pytest.approx(exact.r_g, abs=1e-6)
            assert fd.r_h == pytest.approx(exact.r_h, abs=1e-6)

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0])
    def test_random_agreement(self, p):
        rng = np.random.default_rng(22)
        space = SpaceConfig(3, p)
        checked = 0
        while checked < 60:
            a, b, w = (tuple(rng.uniform(-10, 10, 3)) for _ in range(3))
            if near_kink(a, b, w):
                continue
            checked += 1
            exact = lp_residuals(a, b, w, space)
            fd = residual_via_finite_difference(a, b, w, space)
            assert fd.r_g == pytest.approx(exact.r_g, abs=1e-5)
            assert fd.r_h == pytest.approx(exact.r_h, abs=1e-5)

    def test_normalization_is_scale_free(self):
        a, b, w = (2.0, 0.0), (6.0, 0.0), (4.0, 5.0)
        space = SpaceConfig(2, 3.0)
        raw = lp_residuals(a, b, w, space)
        norm = normalized_residuals(raw, a, b, space)
        denom = max(1.0, lp_distance(a, b, space) ** 3.0)
        assert norm.r_g == raw.r_g / denom


class TestConjecturePredicate:
    def test_two_agents_on_sphere(self):
        res = conjecture1_predicate(((-1.0, 0.0), (1.0, 0.0)), (0.0, 1.0))
        assert res.holds and res.best_pair == (0, 1)

    def test_output_at_agent_uses_diagonal_pair(self):
        res = conjecture1_predicate(((3.0, 4.0), (9.0, 9.0)), (3.0, 4.0))
        assert res.holds and res.best_pair == (0, 0)

    def test_median_counterexample_fails(self):
        profile = MEDIAN_COUNTEREXAMPLE
        w = (0.0, 0.0, 0.0)
        res = conjecture1_predicate(profile, w)
        assert not res.holds
        for i in range(3):
            for j in range(i + 1, 3):
                assert orthogonality_residual(profile[i], profile[j], w) == pytest.approx(-1.0, abs=1e-12)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            profile = tuple(tuple(rng.uniform(-10, 10, 2)) for _ in range(4))
            w = tuple(rng.uniform(-10, 10, 2))
            perm = tuple(int(i) for i in rng.permutation(4))
            shuffled = tuple(profile[i] for i in perm)
            assert conjecture1_predicate(profile, w).best_residual == pytest.approx(
                conjecture1_predicate(shuffled, w).best_residual, abs=1e-12
            )

    def test_translation_invariance(self):
        rng = np.random.default_rng(24)
        for _ in range(50):
            profile = tuple(tuple(rng.uniform(-10, 10, 3)) for _ in range(3))
            w = tuple(rng.uniform(-10, 10, 3))
            t = tuple(rng.uniform(-1e3, 1e3, 3))
            moved = translate(profile, t)
            wt = tuple(wi + ti for wi, ti in zip(w, t))
            before = conjecture1_predicate(profile, w).best_residual
            after = conjecture1_predicate(moved, wt).best_residual
            assert after == pytest.approx(before, abs=1e-12 * max(1.0, abs(before)) + 1e-6)


class TestMedianConjectureScan:
    def test_one_dimension_passes(self):
        report = median_fits_conjecture_scan(1, CheckConfig(num_profiles=300, seed=31))
        assert report.verdict == "pass"

    def test_two_dimensions_pass(self):
        report = median_fits_conjecture_scan(2, CheckConfig(num_profiles=300, seed=31))
        assert report.verdict == "pass"

    def test_three_dimensions_fail_on_fixture(self):
        report = median_fits_conjecture_scan(3, CheckConfig(num_profiles=300, seed=31))
        assert report.verdict == "fail"
        assert report.witness.profile == MEDIAN_COUNTEREXAMPLE
        assert report.witness.detail["best_residual"] == pytest.approx(1.0, abs=1e-12)


class TestMaxCost:
    def test_examples(self):
        assert max_cost(((0.0,), (1.0,)), (0.0,), SP1) == 1.0
        assert max_cost(((0.0, 0.0), (1.0, 1.0)), (0.5, 0.5), SP2) == pytest.approx(math.sqrt(2) / 2)
        assert max_cost(((2.0, 3.0),), (2.0, 3.0), SP2) == 0.0

    def test_optimal_two_agents(self):
        assert optimal_max_cost_two_agents((0.0, 0.0), (1.0, 1.0), SP2) == pytest.approx(math.sqrt(2) / 2)
        assert optimal_max_cost_two_agents((4.0,), (4.0,), SP1) == 0.0
        assert optimal_max_cost_two_agents((0.0,), (4.0,), SP1) == 2.0


class TestLowerBoundExperiment:
    def test_dictator_reaches_two_in_1d(self):
        w = evaluate(MechanismSpec.dictator(0), ((0.0,), (1.0,)), SP1)
        assert w == (0.0,)
        derived = (w, (1.0,))
        v = evaluate(MechanismSpec.dictator(0), derived, SP1)
        assert max_cost(derived, v, SP1) / optimal_max_cost_two_agents(w, (1.0,), SP1) == 2.0

    def test_c2_example_ratio(self):
        spec = MechanismSpec.c2(1.0)
        w = evaluate(spec, ((0.0, 0.0), (1.0, 0.0)), SP2)
        assert w == (0.5, 0.5)
        v = evaluate(spec, (w, (1.0, 0.0)), SP2)
        assert v == pytest.approx(w, abs=1e-12)
        ratio = max_cost((w, (1.0, 0.0)), v, SP2) / optimal_max_cost_two_agents(w, (1.0, 0.0), SP2)
        assert ratio == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("spec", [MechanismSpec.dictator(0), MechanismSpec.c1(1, 1),
                                      MechanismSpec.c2(1.0), MechanismSpec.c3(1.0)])
    def test_campaign_supremum(self, spec):
        outcome = lower_bound_experiment(spec, SP2, CheckConfig(num_profiles=200, seed=41))
        assert outcome.worst.ratio >= 1.99
        assert outcome.stability_ok
        assert outcome.max_stability_gap <= 1e-9

    def test_midpoint_flags_stability_failure(self):
        outcome = lower_bound_experiment(MechanismSpec.midpoint(), SP2,
                                         CheckConfig(num_profiles=100, seed=42))
        assert not outcome.stability_ok
        assert outcome.worst.ratio == pytest.approx(1.0, abs=1e-9)

    def test_ratio_result_json_keys(self):
        outcome = lower_bound_experiment(MechanismSpec.c2(1.0), SP2,
                                         CheckConfig(num_profiles=50, seed=43))
        obj = outcome.worst.to_json_obj()
        assert list(obj) == ["mechanism_max_cost", "optimal_max_cost", "ratio"]
        assert obj["ratio"] >= 1.0
