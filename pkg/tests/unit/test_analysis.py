"""Tests for the security bound, exact oracle, Monte Carlo and dimensioning."""
import itertools
import json
import math

import numpy as np
import pytest

from share_relay.core.analysis import (
    EXACT_MAX_N,
    M1_CAVEAT,
    MAX_REQUIRED_N,
    SecurityParams,
    approx_n,
    bandwidth_model,
    bound_ps,
    build_report,
    chosen_k_secure,
    exact_secure_prob,
    monte_carlo_secure_prob,
    naive_chain_secure_prob,
    pvss_dos_tolerance,
    pvss_threshold,
    required_n,
    stage_compromise_prob,
)
from share_relay.core.topology import build_network, has_cut_batch
from share_relay.errors import DimensionError, OracleLimitError, ProbabilityError

T_GRID = [round(0.1 * k, 1) for k in range(1, 10)]


def enumerate_secure_prob(n: int, m: int, t: float) -> float:
    """Brute force over every compromise pattern."""
    spec = build_network(m, n, 1)
    size = spec.node_count
    masks = np.arange(1 << size, dtype=np.int64)
    flags = ((masks[:, None] >> np.arange(size)) & 1).astype(bool)
    cut = has_cut_batch(spec, flags.reshape(-1, m, n))
    dishonest = flags.sum(axis=1)
    weight = (1.0 - t) ** dishonest * t ** (size - dishonest)
    return float(weight[~cut].sum())


class TestBound:
    """Closed-form lower bound and its relatives."""

    def test_perfect_honesty(self):
        for n, m in itertools.product(range(1, 6), range(1, 6)):
            assert bound_ps(n, m, 1.0) == 1.0

    def test_no_honesty(self):
        assert bound_ps(3, 2, 0.0) == 0.0
        assert math.copysign(1.0, bound_ps(3, 2, 0.0)) == 1.0
        assert bound_ps(3, 7, 0.0) == 0.0

    def test_worked_value(self):
        assert bound_ps(5, 3, 0.6) == pytest.approx(0.7967808, abs=1e-7)
        assert bound_ps(5, 3, 0.6) == pytest.approx((1 - 0.64**5) ** 2, rel=1e-12)

    def test_single_city_is_empty_product(self):
        assert bound_ps(4, 1, 0.3) == 1.0

    def test_monotone(self):
        for n, m, k in itertools.product(range(1, 8), range(2, 9), range(8)):
            t, t_next = T_GRID[k], T_GRID[k + 1]
            assert bound_ps(n + 1, m, t) >= bound_ps(n, m, t)
            assert bound_ps(n, m, t_next) >= bound_ps(n, m, t)
            assert bound_ps(n, m + 1, t) <= bound_ps(n, m, t)

    @pytest.mark.parametrize("args", [(0, 2, 0.5), (2, 0, 0.5), (2, 2, 1.1), (2, 2, -0.1)])
    def test_domain(self, args):
        with pytest.raises((DimensionError, ProbabilityError)):
            bound_ps(*args)

    def test_tiny_t_does_not_round_to_zero(self):
        assert bound_ps(10**6, 2, 1e-9) == pytest.approx(1e-12, rel=1e-6)
        assert stage_compromise_prob(10**6, 1e-9) < 1.0
        assert bound_ps(MAX_REQUIRED_N, 3, 1e-7) > 0.999

    def test_stage_and_chain_helpers(self):
        assert stage_compromise_prob(2, 0.6) == pytest.approx(0.64**2)
        assert naive_chain_secure_prob(3, 0.9) == pytest.approx(0.729)


class TestExactSecureProb:
    """Transfer-matrix oracle."""

    @pytest.mark.parametrize("t", [0.0, 0.25, 0.5, 0.9, 1.0])
    def test_one_stage_single_row(self, t):
        assert exact_secure_prob(1, 2, t) == pytest.approx(t * t, abs=1e-15)

    def test_three_single_nodes(self):
        assert exact_secure_prob(1, 3, 0.9) == pytest.approx(0.729, abs=1e-12)

    def test_single_city(self):
        assert exact_secure_prob(3, 1, 0.5) == pytest.approx(1 - 0.5**3, abs=1e-15)

    def test_matches_enumeration(self):
        for n, m in itertools.product(range(1, 7), range(1, 9)):
            if n * m > 16:
                continue
            for t in (0.1, 0.5, 0.8):
                assert exact_secure_prob(n, m, t) == pytest.approx(
                    enumerate_secure_prob(n, m, t), abs=1e-12
                ), (n, m, t)

    def test_bound_is_a_lower_bound(self):
        for n, m, t in itertools.product(range(1, 7), range(2, 9), T_GRID):
            assert exact_secure_prob(n, m, t) >= bound_ps(n, m, t) - 1e-12

    def test_bound_is_tight_for_one_stage(self):
        for n, t in itertools.product(range(1, 9), T_GRID):
            assert exact_secure_prob(n, 2, t) == pytest.approx(bound_ps(n, 2, t), abs=1e-12)

    def test_oracle_limit(self):
        with pytest.raises(OracleLimitError):
            exact_secure_prob(EXACT_MAX_N + 1, 3, 0.5)


class TestMonteCarlo:
    """Sampled secure fraction."""

    def test_perfect_honesty(self):
        mc = monte_carlo_secure_prob(3, 4, 1.0, trials=1000, seed=1)
        assert mc.estimate == 1.0
        assert mc.half_width == 0.0
        assert mc.secure == 1000

    def test_close_to_exact(self):
        mc = monte_carlo_secure_prob(1, 3, 0.9, trials=200_000, seed=2)
        assert abs(mc.estimate - 0.729) < 0.005

    def test_consistent_with_bound(self):
        mc = monte_carlo_secure_prob(4, 6, 0.7, trials=200_000, seed=3)
        assert mc.estimate >= bound_ps(4, 6, 0.7) - 3 * mc.half_width

    def test_thread_count_does_not_change_result(self):
        serial = monte_carlo_secure_prob(2, 3, 0.5, trials=1_000_000, seed=4, threads=1)
        parallel = monte_carlo_secure_prob(2, 3, 0.5, trials=1_000_000, seed=4, threads=4)
        assert serial == parallel

    def test_fixed_fraction_model(self):
        mc = monte_carlo_secure_prob(3, 4, 0.75, trials=5000, seed=5, model="fixed-fraction")
        assert 0.0 <= mc.estimate <= 1.0
        assert mc == monte_carlo_secure_prob(3, 4, 0.75, 5000, 5, "fixed-fraction")

    def test_half_width_uses_the_99_percent_quantile(self):
        mc = monte_carlo_secure_prob(2, 3, 0.6, trials=10_000, seed=6)
        p = mc.estimate
        expected = 2.5758293 * math.sqrt(p * (1 - p) / 10_000)
        assert mc.half_width == pytest.approx(expected, rel=1e-6)

    def test_interval_calibration(self):
        exact = exact_secure_prob(3, 4, 0.6)
        covered = sum(
            monte_carlo_secure_prob(3, 4, 0.6, trials=10_000, seed=k).covers(exact)
            for k in range(200)
        )
        assert covered >= 190

    def test_trials_must_be_positive(self):
        with pytest.raises(DimensionError):
            monte_carlo_secure_prob(2, 2, 0.5, trials=0, seed=0)


class TestReports:
    """build_report and its serialised forms."""

    def test_small_point_has_exact(self):
        report = build_report(1, 3, 0.9)
        assert report.exact == pytest.approx(0.729)
        assert report.bound == pytest.approx(0.6561)
        assert report.mc is None
        assert report.to_csv_row()["exact_oracle"] == "dp"

    def test_large_point_falls_back(self):
        report = build_report(EXACT_MAX_N + 1, 3, 0.5, trials=100, seed=0)
        row = report.to_csv_row()
        assert report.exact is None
        assert row["exact_oracle"] == "unavailable"
        assert row["trials"] == 100

    def test_single_city_caveat(self):
        assert build_report(2, 1, 0.5).caveat == M1_CAVEAT
        assert build_report(2, 2, 0.5).caveat is None

    def test_json_form(self):
        doc = build_report(2, 3, 0.5, trials=1000, seed=1).to_dict()
        text = json.dumps(doc)
        assert json.loads(text)["mc_estimate"]["confidence"] == 0.99
        assert doc["params"] == {"n": 2, "m": 3, "t": 0.5}

    def test_params_delta(self):
        assert SecurityParams(3, 4, 0.5, p_s=0.999).delta == pytest.approx(0.001)
        assert SecurityParams(3, 4, 0.5).delta is None


class TestDimensioning:
    """required_n and approx_n."""

    def test_worked_point(self):
        assert required_n(0.999, 11, 0.5) == 33

    def test_exact_boundary(self):
        assert required_n(0.36, 2, 0.6) == 1

    def test_minimality_grid(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            p_s = float(rng.uniform(0.5, 0.999999))
            m = int(rng.integers(2, 40))
            t = float(rng.uniform(0.05, 0.95))
            n = required_n(p_s, m, t)
            assert bound_ps(n, m, t) >= p_s - 1e-12
            if n > 1:
                assert bound_ps(n - 1, m, t) < p_s

    def test_tiny_honesty_probability(self):
        n = required_n(0.999, 11, 1e-7)
        assert n == pytest.approx(approx_n(0.001, 11, 1e-7), rel=1e-3)
        assert bound_ps(n, 11, 1e-7) >= 0.999 - 1e-12
        assert bound_ps(n - 1, 11, 1e-7) < 0.999

    def test_unreachable_target_raises(self):
        with pytest.raises(ProbabilityError, match=r"2\^50"):
            required_n(0.999, 11, 1e-9)
        assert required_n(0.999, 11, 1e-3) > 0

    def test_perfect_honesty_needs_one_node(self):
        assert required_n(0.99, 5, 1.0) == 1

    @pytest.mark.parametrize(
        "args", [(0.0, 3, 0.5), (1.0, 3, 0.5), (0.9, 1, 0.5), (0.9, 3, 0.0), (0.9, 3, 1.2)]
    )
    def test_domain(self, args):
        with pytest.raises((DimensionError, ProbabilityError)):
            required_n(*args)

    def test_approx_worked_point(self):
        assert approx_n(0.001, 11, 0.5) == pytest.approx(32.016, abs=1e-3)

    def test_approx_two_cities(self):
        assert approx_n(0.01, 2, 0.4) == pytest.approx(-math.log(0.01) / -math.log(1 - 0.16))

    def test_approx_tracks_required(self):
        for delta, m, t in itertools.product(
            [1e-2, 1e-3, 1e-4, 1e-6], [3, 5, 11, 20, 50], [0.3, 0.5, 0.7, 0.9]
        ):
            gap = math.ceil(approx_n(delta, m, t)) - required_n(1 - delta, m, t)
            assert gap in (0, 1), (delta, m, t)

    def test_approx_exact_for_tiny_delta(self):
        for m, t in itertools.product([3, 11, 50], [0.3, 0.5, 0.9]):
            assert math.ceil(approx_n(1e-6, m, t)) == required_n(1 - 1e-6, m, t)

    @pytest.mark.parametrize("args", [(0.0, 3, 0.5), (0.01, 1, 0.5), (0.01, 3, 1.0)])
    def test_approx_domain(self, args):
        with pytest.raises((DimensionError, ProbabilityError)):
            approx_n(*args)


class TestAlternativeAdversaries:
    """Chosen-node and DOS-robustness figures."""

    def test_chosen_k(self):
        assert chosen_k_secure(4, 4)
        assert not chosen_k_secure(4, 5)

    @pytest.mark.parametrize("n,tolerance", [(1, 0), (4, 0), (5, 1), (8, 1), (9, 2), (16, 3)])
    def test_pvss_tolerance(self, n, tolerance):
        assert pvss_dos_tolerance(n) == tolerance

    def test_pvss_threshold(self):
        assert pvss_threshold() == pytest.approx(0.8660254, abs=1e-7)


class TestBandwidth:
    """Per-run bit counts."""

    def test_minimal_network(self):
        model = bandwidth_model(1, 1, 1)
        assert model.intercity_bits == 2
        assert model.intracity_bits == 0

    def test_worked_network(self):
        model = bandwidth_model(3, 4, 128)
        assert (model.intercity_bits, model.intracity_bits) == (1920, 3072)
        assert model.all_pairs_intercity == 16 * 9 * 128 / 2
        assert model.public_key_all_pairs == 16 * 3 * 128 / 2

    def test_doubling_cities(self):
        for n, m in itertools.product(range(1, 6), range(1, 10)):
            single = bandwidth_model(n, m, 64).intercity_bits
            double = bandwidth_model(n, 2 * m, 64).intercity_bits
            assert double == 2 * single - n * 64

    def test_to_dict(self):
        assert set(bandwidth_model(2, 2, 8).to_dict()) == {
            "intercity_bits", "intracity_bits", "all_pairs_intercity", "public_key_all_pairs",
        }
