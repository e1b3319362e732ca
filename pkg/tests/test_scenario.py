import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from shapely.geometry import Point

from tnntn.scenario import (Scenario, StationSpec, Tier, TrafficClass, TrafficProfile,
                            classify_by_terciles, generate_hex_layout, grid_region,
                            hourly_params, sinusoid_day_profile, spawn_ues)


def make_station(**kw):
    base = dict(id=0, tier=Tier.TERRESTRIAL, position=(0.0, 0.0, 30.0),
                tx_antenna_gain=25.1, p_max=0.0589, static_power=50.0, sleep_floor=10.0)
    base.update(kw)
    return StationSpec(**base)


class TestStationSpec:
    def test_rejects_nonpositive_power(self):
        with pytest.raises(ValueError):
            make_station(p_max=0.0)

    def test_satellite_must_be_solar_powered(self):
        with pytest.raises(ValueError):
            make_station(tier=Tier.SATELLITE, position=(0, 0, 600e3))
        sat = make_station(tier=Tier.SATELLITE, position=(0, 0, 600e3),
                           static_power=0.0, sleep_floor=0.0)
        assert sat.tier is Tier.SATELLITE


class TestHexLayout:
    @pytest.mark.parametrize("rings,expected", [(0, 1), (1, 7), (2, 19), (3, 37)])
    def test_site_count(self, rings, expected):
        assert len(generate_hex_layout(1732.0, rings)) == expected

    def test_nearest_neighbor_spacing_is_isd(self):
        # brute-force nearest-neighbor scan, independent of the axial construction
        isd = 1732.0
        sites = generate_hex_layout(isd, 2)
        d = np.hypot(sites[:, None, 0] - sites[None, :, 0],
                     sites[:, None, 1] - sites[None, :, 1])
        np.fill_diagonal(d, np.inf)
        assert np.allclose(d.min(axis=1), isd, rtol=1e-9)

    def test_centered_and_symmetric(self):
        sites = generate_hex_layout(500.0, 2)
        assert np.allclose(sites.mean(axis=0), 0.0, atol=1e-9)
        assert np.allclose(sites[0], (0.0, 0.0))
        # point symmetry: for every site, its negation is a site
        as_set = {tuple(np.round(s, 6)) for s in sites}
        assert all(tuple(np.round(-s, 6)) in as_set for s in sites)

    def test_outer_ring_radius(self):
        isd = 1000.0
        sites = generate_hex_layout(isd, 2)
        radii = np.hypot(sites[:, 0], sites[:, 1])
        assert math.isclose(radii.max(), 2 * isd, rel_tol=1e-12)

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            generate_hex_layout(0.0, 2)
        with pytest.raises(ValueError):
            generate_hex_layout(100.0, -1)


class TestSpawnUes:
    def test_all_inside_region_and_deterministic(self):
        region = grid_region(1732.0, 2)
        a = spawn_ues(200, region, 42)
        b = spawn_ues(200, region, 42)
        assert np.array_equal(a, b)
        assert all(region.contains(Point(x, y)) for x, y in a)

    def test_different_seeds_differ(self):
        region = grid_region(1732.0, 1)
        assert not np.array_equal(spawn_ues(50, region, 1), spawn_ues(50, region, 2))

    def test_count_validated(self):
        with pytest.raises(ValueError):
            spawn_ues(0, grid_region(1000.0, 1), 0)


class TestTrafficProfile:
    def test_lambda_schedule_inverse_in_count(self):
        counts = tuple(range(10, 34))
        profile = TrafficProfile(hourly_ue_counts=counts, lambda_coefficient=40.0)
        for hour in range(24):
            k, lam, _ = hourly_params(profile, hour)
            assert k == counts[hour]
            assert lam == pytest.approx(40.0 / counts[hour])

    def test_tercile_classes(self):
        counts = tuple(range(1, 25))  # strictly increasing
        classes = classify_by_terciles(counts)
        assert classes[:8] == (TrafficClass.LOW,) * 8
        assert classes[8:16] == (TrafficClass.AVERAGE,) * 8
        assert classes[16:] == (TrafficClass.HIGH,) * 8

    def test_peak_hour_is_high(self):
        counts = sinusoid_day_profile(peak=120)
        profile = TrafficProfile(hourly_ue_counts=counts, lambda_coefficient=40.0)
        assert profile.hourly_classes[int(np.argmax(counts))] is TrafficClass.HIGH
        assert profile.hourly_classes[int(np.argmin(counts))] is TrafficClass.LOW

    def test_validation(self):
        with pytest.raises(ValueError):
            TrafficProfile(hourly_ue_counts=(5,) * 23, lambda_coefficient=1.0)
        with pytest.raises(ValueError):
            TrafficProfile(hourly_ue_counts=(0,) * 24, lambda_coefficient=1.0)
        with pytest.raises(ValueError):
            TrafficProfile(hourly_ue_counts=(5,) * 24, lambda_coefficient=0.0)

    @given(st.integers(min_value=10, max_value=500))
    def test_day_profile_hits_peak_and_trough(self, peak):
        counts = sinusoid_day_profile(peak=peak)
        assert max(counts) == peak
        # rounding can tie neighbouring hours, so check attainment, not argmax
        assert counts[20] == max(counts)
        assert counts[4] == min(counts)
        assert len(counts) == 24


class TestScenario:
    def test_masks_and_noise(self):
        stations = (make_station(id=0),
                    make_station(id=1, tier=Tier.SATELLITE, position=(0, 0, 600e3),
                                 static_power=0.0, sleep_floor=0.0))
        scen = Scenario(stations=stations, ue_positions=np.zeros((3, 2)) + 10.0,
                        total_bandwidth=40e6, re_bandwidth=15e3,
                        noise_density=3.98e-21, rsrp_min=1e-15)
        assert scen.satellite_mask.tolist() == [False, True]
        assert scen.num_ues == 3 and scen.num_stations == 2
        assert scen.noise_per_re == pytest.approx(3.98e-21 * 15e3)
        assert scen.static_power.tolist() == [50.0, 0.0]

    def test_requires_ues(self):
        with pytest.raises(ValueError):
            Scenario(stations=(make_station(),), ue_positions=np.zeros((0, 2)),
                     total_bandwidth=40e6, re_bandwidth=15e3,
                     noise_density=3.98e-21, rsrp_min=1e-15)
