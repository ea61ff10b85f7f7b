import json
import math

import numpy as np
import pytest

from corrwalk.disorder import DisorderParams
from corrwalk.ensemble import EnsembleConfig, run_ensemble, run_single, sample_seed


def make_config(**overrides):
    defaults = dict(
        t_max=40,
        samples=4,
        master_seed=777,
        disorder=DisorderParams(theta0=math.pi / 4, r=0.3, correlation=-0.4, length=41),
        record=("m2", "s_e"),
    )
    defaults.update(overrides)
    return EnsembleConfig(**defaults)


class TestConfigValidation:
    def test_disorder_must_cover_t_max(self):
        with pytest.raises(ValueError):
            make_config(disorder=DisorderParams(
                theta0=math.pi / 4, r=0.3, correlation=0.0, length=10))

    def test_interference_needs_extra_angle(self):
        with pytest.raises(ValueError):
            make_config(
                record=("i_t",),
                disorder=DisorderParams(
                    theta0=math.pi / 4, r=0.3, correlation=0.0, length=40))

    @pytest.mark.parametrize("kwargs", [
        {"t_max": 0}, {"samples": 0}, {"workers": 0}, {"record": ("bogus",)},
    ])
    def test_basic_bounds(self, kwargs):
        with pytest.raises(ValueError):
            make_config(**kwargs)


class TestSeedDerivation:
    def test_distinct_indices_get_distinct_streams(self):
        states = {tuple(sample_seed(1, k).generate_state(2)) for k in range(64)}
        assert len(states) == 64

    def test_not_a_raw_sum(self):
        # seed 5/index 0 and seed 0/index 5 must not collide
        a = sample_seed(5, 0).generate_state(2)
        b = sample_seed(0, 5).generate_state(2)
        assert not np.array_equal(a, b)


class TestRunSingle:
    def test_bit_identical_reruns(self):
        config = make_config()
        a = run_single(config, 2)
        b = run_single(config, 2)
        np.testing.assert_array_equal(a.m2, b.m2)
        np.testing.assert_array_equal(a.s_e, b.s_e)

    def test_zero_strength_ignores_sample_index(self):
        config = make_config(disorder=DisorderParams(
            theta0=math.pi / 4, r=0.0, correlation=-0.4, length=41))
        a = run_single(config, 0)
        b = run_single(config, 3)
        np.testing.assert_array_equal(a.s_e, b.s_e)

    def test_distinct_samples_differ(self):
        config = make_config()
        a = run_single(config, 0)
        b = run_single(config, 1)
        assert not np.array_equal(a.s_e, b.s_e)

    def test_sample_index_bounds(self):
        with pytest.raises(ValueError):
            run_single(make_config(), 4)

    def test_series_shapes(self):
        series = run_single(make_config(), 0)
        assert series.t.tolist() == list(range(41))
        assert series.m2.shape == (41,)
        assert np.all(np.abs(series.norm - 1.0) < 1e-12)


class TestRunEnsemble:
    def test_single_sample_mean_is_the_series(self):
        config = make_config(samples=1)
        result = run_ensemble(config)
        series = run_single(config, 0)
        np.testing.assert_array_equal(result.mean["m2"], series.m2)
        assert np.all(result.sem["m2"] == 0.0)

    def test_mean_and_sem_reduce_in_index_order(self):
        config = make_config()
        result = run_ensemble(config)
        stacked = np.stack([run_single(config, k).s_e for k in range(config.samples)])
        np.testing.assert_array_equal(result.mean["s_e"], stacked.mean(axis=0))
        np.testing.assert_array_equal(
            result.sem["s_e"], stacked.std(axis=0, ddof=1) / np.sqrt(config.samples))

    def test_worker_count_does_not_change_results(self):
        serial = run_ensemble(make_config(workers=1))
        parallel = run_ensemble(make_config(workers=3))
        for name in serial.mean:
            np.testing.assert_array_equal(serial.mean[name], parallel.mean[name])
            np.testing.assert_array_equal(serial.sem[name], parallel.sem[name])

    def test_bounded_aggregates(self):
        result = run_ensemble(make_config(record=("m2", "s_e", "jsd")))
        t = result.t.astype(float)
        assert np.all(result.mean["s_e"] >= 0) and np.all(result.mean["s_e"] <= 1)
        assert np.all(result.mean["jsd"] >= 0) and np.all(result.mean["jsd"] <= 1)
        assert np.all(result.mean["m2"] <= t * t + 1e-9)

    def test_final_values_per_sample(self):
        config = make_config()
        result = run_ensemble(config)
        assert result.final_values["s_e"].shape == (config.samples,)
        assert result.final_values["s_e"][1] == run_single(config, 1).s_e[-1]

    def test_profiles_rejected_for_multi_sample_runs(self):
        with pytest.raises(ValueError):
            run_ensemble(make_config(record=("a",)))


class TestSerialization:
    def test_json_round_trip_and_determinism(self, tmp_path):
        result = run_ensemble(make_config(samples=2))
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        result.write_json(p1)
        run_ensemble(make_config(samples=2)).write_json(p2)
        assert p1.read_bytes() == p2.read_bytes()
        payload = json.loads(p1.read_text())
        assert payload["config"]["master_seed"] == 777
        assert len(payload["mean"]["m2"]) == 41
        assert payload["sample_seeds"] == [[777, 0], [777, 1]]

    def test_csv_schema(self, tmp_path):
        result = run_ensemble(make_config(samples=2))
        paths = result.write_csv(tmp_path, "walk")
        names = sorted(p.name for p in paths)
        assert names == ["walk_m2.csv", "walk_norm.csv", "walk_s_e.csv"]
        lines = (tmp_path / "walk_m2.csv").read_text().splitlines()
        assert lines[0] == "t,mean,sem"
        assert len(lines) == 42
