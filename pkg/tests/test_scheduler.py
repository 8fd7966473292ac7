import math
from dataclasses import replace

import numpy as np
import pytest

from qoesched.scheduler import (
    Policy,
    UeSchedInput,
    bcqq_priority,
    mlwdf_priority,
    pf_priority,
    qos_weight,
    select,
    update_avg_rate,
)


def ue(ue_id=0, buffer_bits=1_000_000, buffersize_bits=40_000_000, alpha=1e-6,
       beta_s=0.3, q=1.0, rate_bps=1e8, hol_delay_s=0.0, avg_rate_bps=1e8,
       last_served_tti=-1):
    return UeSchedInput(ue_id, buffer_bits, buffersize_bits, alpha, beta_s, q,
                        rate_bps, hol_delay_s, avg_rate_bps, last_served_tti)


class TestBcqqPriority:
    def test_hand_value(self):
        u = ue(buffer_bits=20_000_000, buffersize_bits=40_000_000, alpha=1e-6,
               beta_s=0.3, q=1.0, rate_bps=1e8)
        expected = 0.5 * (-math.log(1e-6) / 0.3) * 1.0 * 1e8
        assert bcqq_priority(u) == pytest.approx(expected, rel=1e-12)
        assert bcqq_priority(u) == pytest.approx(2.302585e9, rel=1e-6)

    def test_empty_buffer_zero(self):
        assert bcqq_priority(ue(buffer_bits=0)) == 0.0

    def test_stricter_delay_doubles_priority(self):
        loose = ue(beta_s=0.300)
        strict = ue(beta_s=0.150)
        assert bcqq_priority(strict) == pytest.approx(2 * bcqq_priority(loose), rel=1e-12)

    def test_strictly_increasing_in_each_factor(self):
        rng = np.random.default_rng(17)
        for _ in range(2000):
            base = ue(
                buffer_bits=int(rng.integers(1, 40_000_000)),
                q=float(rng.uniform(1, 100)),
                rate_bps=float(rng.uniform(1e6, 6e9)),
                alpha=float(rng.uniform(1e-9, 0.5)),
                beta_s=float(rng.uniform(0.01, 1.0)),
            )
            p0 = bcqq_priority(base)
            bigger_buf = replace(base, buffer_bits=min(base.buffer_bits * 2, 40_000_000))
            if bigger_buf.buffer_bits > base.buffer_bits:
                assert bcqq_priority(bigger_buf) > p0
            assert bcqq_priority(replace(base, q=base.q * 1.5)) > p0
            assert bcqq_priority(replace(base, rate_bps=base.rate_bps * 1.5)) > p0

    def test_invalid_qos_rejected(self):
        with pytest.raises(ValueError):
            qos_weight(1.5, 0.3)
        with pytest.raises(ValueError):
            qos_weight(1e-6, 0.0)


class TestMlwdfPriority:
    def test_hand_value(self):
        u = ue(hol_delay_s=0.1, alpha=1e-6, beta_s=0.3, rate_bps=2e8, avg_rate_bps=1e8)
        assert mlwdf_priority(u) == pytest.approx(9.2103, rel=1e-4)

    def test_fresh_queue_zero(self):
        assert mlwdf_priority(ue(hol_delay_s=0.0)) == 0.0

    def test_empty_buffer_zero(self):
        assert mlwdf_priority(ue(buffer_bits=0, hol_delay_s=1.0)) == 0.0


class TestPfPriority:
    def test_equal_rates_unity(self):
        assert pf_priority(ue(rate_bps=1e8, avg_rate_bps=1e8)) == 1.0

    def test_linearity(self):
        u = ue(rate_bps=1e8)
        u2 = ue(rate_bps=2e8)
        assert pf_priority(u2) == 2 * pf_priority(u)

    def test_empty_buffer_zero(self):
        assert pf_priority(ue(buffer_bits=0)) == 0.0


class TestSelect:
    def test_tie_broken_by_least_recently_served(self):
        # priorities [3, 7, 7, 1, 0] via PF with unit averages; UE 4 empty
        priorities = [3, 7, 7, 1, 0]
        last_served = [5, 2, 9, 1, 0]
        inputs = [
            ue(ue_id=i, rate_bps=float(p), avg_rate_bps=1.0,
               buffer_bits=0 if p == 0 else 100, last_served_tti=ls)
            for i, (p, ls) in enumerate(zip(priorities, last_served))
        ]
        decision = select(inputs, Policy.PF)
        assert decision.selected_ue == 1

    def test_tie_then_lowest_ue_id(self):
        inputs = [
            ue(ue_id=2, rate_bps=7.0, avg_rate_bps=1.0, last_served_tti=3),
            ue(ue_id=1, rate_bps=7.0, avg_rate_bps=1.0, last_served_tti=3),
        ]
        assert select(inputs, Policy.PF).selected_ue == 1

    def test_all_empty_is_idle(self):
        inputs = [ue(ue_id=i, buffer_bits=0) for i in range(3)]
        decision = select(inputs, Policy.BCQQ)
        assert decision.selected_ue is None
        assert decision.budget_bits == 0

    def test_single_nonempty_wins_any_policy(self):
        for policy in Policy:
            inputs = [ue(ue_id=0, buffer_bits=0), ue(ue_id=1, buffer_bits=5)]
            assert select(inputs, policy).selected_ue == 1

    def test_rr_picks_least_recently_served(self):
        inputs = [
            ue(ue_id=0, last_served_tti=10),
            ue(ue_id=1, last_served_tti=4),
            ue(ue_id=2, last_served_tti=7),
        ]
        assert select(inputs, Policy.RR).selected_ue == 1

    def test_budget_is_rate_times_tti(self):
        decision = select([ue(rate_bps=6e9)], Policy.BCQQ)
        assert decision.budget_bits == 6_000_000

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            select([], Policy.BCQQ)


class TestMlwdfEqualsPf:
    def test_identical_qos_and_hol_gives_same_selection(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            hol = float(rng.uniform(0.001, 0.3))
            inputs = [
                ue(
                    ue_id=i,
                    buffer_bits=int(rng.integers(0, 1_000_000)),
                    rate_bps=float(rng.uniform(1e6, 6e9)),
                    avg_rate_bps=float(rng.uniform(1e5, 6e9)),
                    hol_delay_s=hol,
                    last_served_tti=int(rng.integers(-1, 100)),
                )
                for i in range(5)
            ]
            if all(u.buffer_bits == 0 for u in inputs):
                continue
            assert select(inputs, Policy.MLWDF).selected_ue == select(inputs, Policy.PF).selected_ue


class TestQScalingInvariance:
    def test_bcqq_argmax_invariant_under_common_q_scale(self):
        rng = np.random.default_rng(9)
        for _ in range(1000):
            c = float(rng.uniform(0.01, 100))
            inputs = [
                ue(
                    ue_id=i,
                    buffer_bits=int(rng.integers(1, 40_000_000)),
                    q=float(rng.uniform(1, 100)),
                    rate_bps=float(rng.uniform(1e6, 6e9)),
                    beta_s=float(rng.choice([0.15, 0.3])),
                    last_served_tti=int(rng.integers(-1, 50)),
                )
                for i in range(5)
            ]
            scaled = [replace(u, q=u.q * c) for u in inputs]
            assert select(inputs, Policy.BCQQ).selected_ue == select(scaled, Policy.BCQQ).selected_ue


class TestAvgRate:
    def test_floor_never_zero(self):
        avg = 1e9
        for _ in range(100_000):
            avg = update_avg_rate(avg, 0)
        assert avg == 1.0

    def test_convergence_to_constant_service(self):
        # geometric-series oracle: after 5*T_c steps the EMA is within
        # (1 - 1/T_c)^(5 T_c) ~ e^-5 of the served rate
        r_bits = 3_000_000
        avg = 1.0
        for _ in range(5000):
            avg = update_avg_rate(avg, r_bits)
        target = r_bits / 0.001
        residual = (target - 1.0) * (1 - 1 / 1000) ** 5000
        assert abs(avg - target) <= residual * 1.001
        assert abs(avg - target) / target < 0.01

    def test_degenerate_tc_one(self):
        assert update_avg_rate(5e9, 2_000_000, t_c=1) == 2_000_000 / 0.001
