"""Path-integral Monte Carlo sampler: configuration, kernel, and tallies."""

import math

import numpy as np
import pytest

from solgraph.errors import ArgumentError, CapacityError
from solgraph.model import IsingModel
from solgraph.sqa import (
    EXACT_REPLICA_CAP,
    J_PERP_CAP,
    SampleTally,
    SqaConfig,
    anneal_once,
    j_perp,
    run_experiment,
    suzuki_trotter_distribution,
)


def fm_pair() -> IsingModel:
    return IsingModel.build(2, [((0, 1), -1.0)])


class TestConfig:
    def test_defaults(self):
        cfg = SqaConfig()
        assert cfg.trotter_slices == 32
        assert cfg.beta == 10.0
        assert cfg.gamma_start == 3.0
        assert cfg.gamma_end == 0.01
        assert cfg.sweeps == 1000
        assert cfg.samples == 1000
        assert cfg.runs == 1

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"trotter_slices": 1},
            {"beta": 0.0},
            {"beta": -1.0},
            {"gamma_start": 0.0},
            {"gamma_start": 0.5, "gamma_end": 1.0},
            {"gamma_end": -0.1},
            {"sweeps": 0},
            {"samples": 0},
            {"runs": 0},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ArgumentError):
            SqaConfig(**kwargs)

    def test_schedule_endpoints(self):
        cfg = SqaConfig(gamma_start=2.0, gamma_end=0.5, sweeps=4)
        sched = cfg.gamma_schedule()
        assert sched[0] == 2.0
        assert sched[-1] == 0.5
        assert len(sched) == 4
        assert np.all(np.diff(sched) < 0)

    def test_fixed_field_mode(self):
        cfg = SqaConfig(gamma_start=0.8, gamma_end=0.8, sweeps=10)
        assert np.all(cfg.gamma_schedule() == 0.8)

    def test_to_dict_round_trip_values(self):
        d = SqaConfig(seed=7, runs=3).to_dict()
        assert d["seed"] == 7
        assert d["runs"] == 3


class TestJperp:
    def test_monotone_in_gamma(self):
        vals = [j_perp(10.0, g, 32) for g in (3.0, 1.0, 0.3, 0.1)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_clamped_at_zero_field(self):
        assert j_perp(10.0, 0.0, 32) == J_PERP_CAP

    def test_clamped_for_tiny_field(self):
        assert j_perp(10.0, 1e-30, 32) == J_PERP_CAP

    def test_closed_form(self):
        beta, gamma, m = 2.0, 0.8, 4
        expected = -0.5 * math.log(math.tanh(beta * gamma / m))
        assert j_perp(beta, gamma, m) == pytest.approx(expected, rel=1e-12)


class TestSamplingBasics:
    def test_anneal_once_deterministic(self):
        cfg = SqaConfig(sweeps=50, samples=1)
        a = anneal_once(fm_pair(), cfg, seed=123)
        b = anneal_once(fm_pair(), cfg, seed=123)
        c = anneal_once(fm_pair(), cfg, seed=124)
        assert a.value == b.value
        # a different seed is allowed to collide on 2 spins; the experiment
        # level check below covers genuine stream separation
        assert a.num_spins == c.num_spins == 2

    def test_run_experiment_deterministic(self):
        cfg = SqaConfig(sweeps=30, samples=40, runs=2, seed=5)
        t1 = run_experiment(fm_pair(), (0, 3), cfg)
        t2 = run_experiment(fm_pair(), (0, 3), cfg)
        assert np.array_equal(t1.counts, t2.counts)
        assert np.array_equal(t1.out_of_set, t2.out_of_set)

    def test_counts_partition_samples(self):
        cfg = SqaConfig(sweeps=30, samples=64, runs=3, seed=1)
        tally = run_experiment(fm_pair(), (0, 3), cfg)
        assert tally.counts.shape == (3, 2)
        total = tally.counts.sum(axis=1) + tally.out_of_set
        assert np.all(total == 64)

    def test_targets_must_be_sorted_unique(self):
        cfg = SqaConfig(sweeps=5, samples=1)
        with pytest.raises(ArgumentError, match="sorted"):
            run_experiment(fm_pair(), (3, 0), cfg)
        with pytest.raises(ArgumentError, match="sorted"):
            run_experiment(fm_pair(), (0, 0, 3), cfg)

    def test_rejects_higher_order_terms(self):
        cubic = IsingModel.build(3, [((0, 1, 2), -1.0)])
        with pytest.raises(ArgumentError, match="order"):
            run_experiment(cubic, (0,), SqaConfig(sweeps=5, samples=1))

    def test_ferromagnet_splits_evenly(self):
        cfg = SqaConfig(samples=1500, runs=1, seed=11)  # default anneal schedule
        tally = run_experiment(fm_pair(), (0, 3), cfg)
        assert tally.hit_rate() > 0.99
        freqs = tally.mean_frequency()
        assert abs(freqs[0] - 0.5) < 0.03
        assert abs(freqs[1] - 0.5) < 0.03

    def test_stderr_zero_for_single_run(self):
        cfg = SqaConfig(sweeps=20, samples=50, runs=1, seed=2)
        tally = run_experiment(fm_pair(), (0, 3), cfg)
        assert np.all(tally.stderr() == 0.0)

    def test_stderr_positive_across_runs(self):
        cfg = SqaConfig(sweeps=20, samples=200, runs=4, seed=2)
        tally = run_experiment(fm_pair(), (0, 3), cfg)
        assert tally.stderr().shape == (2,)
        assert np.all(tally.stderr() >= 0.0)

    def test_to_dict_shapes(self):
        cfg = SqaConfig(sweeps=10, samples=20, runs=2, seed=3)
        d = run_experiment(fm_pair(), (0, 3), cfg).to_dict()
        assert d["targets"] == [0, 3]
        assert len(d["counts"]) == 2
        assert "config" in d and d["config"]["runs"] == 2


class TestExactReference:
    def test_capacity_cap(self):
        model = IsingModel.build(6, [((i, i + 1), -1.0) for i in range(5)])
        cfg = SqaConfig(trotter_slices=4)
        with pytest.raises(CapacityError, match="N\\*M"):
            suzuki_trotter_distribution(model, cfg, gamma=0.5)

    def test_distribution_normalized_and_symmetric(self):
        cfg = SqaConfig(trotter_slices=4, beta=2.0)
        probs = suzuki_trotter_distribution(fm_pair(), cfg, gamma=0.8)
        assert probs.sum() == pytest.approx(1.0, abs=1e-12)
        # spin-flip symmetry of the ferromagnet: 00<->11 and 01<->10
        assert probs[0] == pytest.approx(probs[3], rel=1e-12)
        assert probs[1] == pytest.approx(probs[2], rel=1e-12)
        assert probs[0] > probs[1]

    def test_zero_field_reduces_to_gibbs(self):
        # at Gamma -> 0 slices decouple from the driver only through an
        # infinite lock (clamped J_perp); instead check a small beta where
        # the exact classical Gibbs marginal is known at Gamma tiny
        model = fm_pair()
        cfg = SqaConfig(trotter_slices=2, beta=1.5)
        probs = suzuki_trotter_distribution(model, cfg, gamma=1e-9)
        z = np.exp(-1.5 * model.energy_table(np.arange(4, dtype=np.uint64)))
        z /= z.sum()
        assert np.allclose(probs, z, atol=1e-6)

    def test_metropolis_matches_exact_marginal(self):
        # equilibrium (fixed transverse field) Metropolis sampling against
        # the exact enumeration of the replica Gibbs measure, independent
        # routes: binomial 3 sigma per configuration bin
        model = fm_pair()
        cfg = SqaConfig(
            trotter_slices=4,
            beta=2.0,
            gamma_start=0.8,
            gamma_end=0.8,
            sweeps=60,
            samples=40_000,
            runs=1,
            seed=17,
        )
        exact = suzuki_trotter_distribution(model, cfg, gamma=0.8)
        tally = run_experiment(model, (0, 1, 2, 3), cfg)
        observed = tally.counts[0]
        n = cfg.samples
        for k in range(4):
            se = math.sqrt(n * exact[k] * (1.0 - exact[k]))
            assert abs(observed[k] - n * exact[k]) <= 3.0 * se, (
                f"bin {k}: observed {observed[k]}, expected {n * exact[k]:.1f} "
                f"+- {se:.1f}"
            )
