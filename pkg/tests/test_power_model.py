import numpy as np
import pytest
from hypothesis import given, strategies as st

from tnntn.power_model import (GroupMode, PowerState, network_consumption,
                               penalty, reweight, station_consumption)


class TestConsumption:
    def test_active_station(self):
        # floor 10 + transmit 2 + static 5
        assert station_consumption(2.0, 5.0, 10.0) == 17.0

    def test_sleeping_station_drops_static_term(self):
        assert station_consumption(0.0, 50.0, 10.0) == 10.0

    def test_network_total(self):
        p = np.array([2.0, 0.0, 1.0])
        psi = np.array([50.0, 50.0, 50.0])
        floor = np.array([10.0, 10.0, 10.0])
        # 62 + 10 + 61
        assert network_consumption(p, psi, floor) == pytest.approx(133.0)

    def test_negative_power_rejected(self):
        with pytest.raises(ValueError):
            station_consumption(-1.0, 5.0, 10.0)


class TestPenalty:
    def test_whole_vector_hand_value(self):
        p = np.array([3.0, 4.0])
        w = np.array([1.0, 1.0])
        psi = np.array([0.5, 0.5])
        # lam * (sum p + (psi . w) * ||p||) = 2 * (7 + 1 * 5) = 24
        assert penalty(p, w, psi, 2.0, GroupMode.WHOLE_VECTOR) == pytest.approx(24.0)

    def test_per_station_hand_value(self):
        p = np.array([3.0, 4.0])
        w = np.array([2.0, 0.5])
        psi = np.array([1.0, 2.0])
        # lam * sum(p + psi*w*p) = 1 * (3 + 6 + 4 + 4) = 17
        assert penalty(p, w, psi, 1.0, GroupMode.PER_STATION) == pytest.approx(17.0)

    def test_zero_lambda(self):
        assert penalty(np.ones(3), np.ones(3), np.ones(3), 0.0) == 0.0

    @given(st.lists(st.floats(min_value=0, max_value=10), min_size=1, max_size=6))
    def test_nonnegative_and_zero_at_origin(self, values):
        p = np.array(values)
        w = np.ones_like(p)
        psi = np.full_like(p, 50.0)
        for mode in GroupMode:
            assert penalty(p, w, psi, 0.7, mode) >= 0.0
            assert penalty(np.zeros_like(p), w, psi, 0.7, mode) == 0.0


class TestReweight:
    def test_inverse_of_power(self):
        w = reweight(np.array([0.0, 1.0, 9.0]), 1.0)
        assert np.allclose(w, [1.0, 0.5, 0.1])

    def test_delta_guard(self):
        with pytest.raises(ValueError):
            reweight(np.ones(2), 0.0)

    def test_monotone_decreasing_in_power(self):
        w = reweight(np.linspace(0, 1, 10), 1e-6)
        assert np.all(np.diff(w) < 0)


class TestPowerState:
    def test_validation(self):
        with pytest.raises(ValueError):
            PowerState(p=np.array([-0.1]), w=np.ones(1))
        with pytest.raises(ValueError):
            PowerState(p=np.ones(1), w=np.ones(1), delta=0.0)
