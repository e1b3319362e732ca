import numpy as np
import pytest

from tnntn.bcga import bcga_solve
from tnntn.channel import build_channel
from tnntn.config import build_scenario, parse_config
from tnntn.metrics import (AssignmentOutcome, HourMetrics, compute_metrics,
                           outcome_from_solution)


def small_run(seed=0, k=20):
    setup = parse_config({"layout": {"rings": 1}})
    scen = build_scenario(setup, k, seed)
    ch = build_channel(scen, setup.channel, seed)
    sol = bcga_solve(scen, ch, lam=40.0 / k, config=setup.solver)
    return setup, scen, ch, sol


class TestHourMetrics:
    def test_share_and_coverage_validated(self):
        kwargs = dict(hour=0, solver="x", ue_count=1, sum_throughput=1.0,
                      sum_log_throughput=0.0, network_power=1.0,
                      active_terrestrial=1, epsilon=0.5)
        with pytest.raises(ValueError):
            HourMetrics(satellite_share=1.5, coverage_ratio=1.0, **kwargs)
        with pytest.raises(ValueError):
            HourMetrics(satellite_share=0.5, coverage_ratio=-0.1, **kwargs)


class TestComputeMetrics:
    def test_solution_and_outcome_agree(self):
        # the two entry points (Solution vs explicit outcome) must be one code path
        setup, scen, ch, sol = small_run()
        direct = compute_metrics(sol, scen, ch, hour=3, solver="A")
        via_outcome = compute_metrics(outcome_from_solution(sol, scen), scen, ch,
                                      hour=3, solver="A")
        assert direct == via_outcome

    def test_hand_computed_single_link(self):
        from tnntn.scenario import Scenario, StationSpec, Tier
        stations = (StationSpec(id=0, tier=Tier.TERRESTRIAL, position=(0.0, 0.0, 30.0),
                                tx_antenna_gain=1.0, p_max=0.06,
                                static_power=50.0, sleep_floor=10.0),)
        scen = Scenario(stations=stations, ue_positions=np.array([[10.0, 0.0]]),
                        total_bandwidth=40e6, re_bandwidth=15e3,
                        noise_density=1e-21, rsrp_min=1e-18)

        class FakeChannel:
            beta = np.array([[1e-13]])

        outcome = AssignmentOutcome(
            X_binary=np.array([[1.0]]), p=np.array([0.05]),
            covered=np.array([True]), sat_bw=0.0, terr_bw=40e6, epsilon=0.0,
            station_active=np.array([True]))
        m = compute_metrics(outcome, scen, FakeChannel(), hour=5, solver="S")
        snr = 1e-13 * 0.05 / (1e-21 * 15e3)
        expected_rate = 40e6 * np.log2(1 + snr)
        assert m.sum_throughput == pytest.approx(expected_rate, rel=1e-12)
        assert m.sum_log_throughput == pytest.approx(np.log(expected_rate), rel=1e-12)
        # per-RE watts scaled by the full-band RE count, plus floor and static
        n_re = 40e6 / 15e3
        assert m.network_power == pytest.approx(0.05 * n_re + 10.0 + 50.0)
        assert m.coverage_ratio == 1.0 and m.satellite_share == 0.0
        assert m.active_terrestrial == 1 and m.hour == 5 and m.solver == "S"

    def test_allocated_re_mode_counts_fewer_res(self):
        setup, scen, ch, sol = small_run(seed=1)
        full = compute_metrics(sol, scen, ch, re_count_mode="full_band")
        alloc = compute_metrics(sol, scen, ch, re_count_mode="allocated")
        if sol.epsilon > 0:
            assert alloc.network_power < full.network_power
        with pytest.raises(ValueError):
            compute_metrics(sol, scen, ch, re_count_mode="per_hertz")

    def test_sleeping_station_billed_at_floor(self):
        setup, scen, ch, sol = small_run(seed=2)
        asleep = int(np.sum((sol.p == 0) & scen.terrestrial_mask))
        awake = int(np.sum((sol.p > 0) & scen.terrestrial_mask))
        m = compute_metrics(sol, scen, ch)
        n_re = scen.total_bandwidth / scen.re_bandwidth
        terr = scen.terrestrial_mask
        expected = ((asleep + awake) * 10.0 + awake * 50.0
                    + float(sol.p[terr].sum()) * n_re)
        assert m.network_power == pytest.approx(expected)
        assert m.active_terrestrial == awake

    def test_shape_mismatch_rejected(self):
        setup, scen, ch, sol = small_run(seed=3)
        bad = AssignmentOutcome(
            X_binary=np.ones((2, 2)), p=np.zeros(2), covered=np.ones(2, dtype=bool),
            sat_bw=0.0, terr_bw=40e6, epsilon=0.0, station_active=np.ones(2, dtype=bool))
        with pytest.raises(ValueError):
            compute_metrics(bad, scen, ch)
