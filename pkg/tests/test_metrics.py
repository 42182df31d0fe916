import json
from fractions import Fraction

import numpy as np
import pytest

from solgraph import fixtures
from solgraph.driver import shorthand, transverse_field
from solgraph.errors import ArgumentError
from solgraph.groundset import enumerate_ground_states
from solgraph.metrics import (
    coefficient_of_variation,
    component_spectra,
    energy_flatness,
    power_iteration,
    predicted_probabilities,
    rank_concordant,
    snap_ties,
    spectral_bounds_check,
    tv_distance,
)
from solgraph.perturb import build_first_order, resolve


def graph_for(model, driver_name="tf"):
    manifold = enumerate_ground_states(model)
    return resolve(model, manifold, shorthand(driver_name, model.num_spins))


def random_symmetric(rng, n):
    a = rng.random((n, n))
    a = (a + a.T) / 2
    np.fill_diagonal(a, 0.0)
    return a


class TestPowerIteration:
    def test_matches_dense_eigensolver(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            n = int(rng.integers(2, 9))
            a = random_symmetric(rng, n)
            lam, vec = power_iteration(a)
            w, v = np.linalg.eigh(a)
            assert lam == pytest.approx(w[-1], abs=1e-10)
            cos = abs(float(vec @ v[:, -1]))
            assert cos >= 1 - 1e-10

    def test_start_vector_independence(self):
        rng = np.random.default_rng(42)
        a = random_symmetric(rng, 7)
        base_lam, base_vec = power_iteration(a)
        for _ in range(5):
            start = rng.random(7) + 0.1
            lam, vec = power_iteration(a, start=start)
            assert lam == pytest.approx(base_lam, abs=1e-10)
            assert float(vec @ base_vec) >= 1 - 1e-10

    def test_permutation_invariance(self):
        rng = np.random.default_rng(7)
        a = random_symmetric(rng, 6)
        perm = rng.permutation(6)
        p = np.eye(6)[perm]
        lam_a, vec_a = power_iteration(a)
        lam_p, vec_p = power_iteration(p @ a @ p.T)
        assert lam_p == pytest.approx(lam_a, abs=1e-10)
        assert np.allclose(vec_p, vec_a[perm], atol=1e-8)

    def test_scaling_invariance_of_direction(self):
        rng = np.random.default_rng(8)
        a = random_symmetric(rng, 5)
        lam1, v1 = power_iteration(a)
        lam2, v2 = power_iteration(3.5 * a)
        assert lam2 == pytest.approx(3.5 * lam1, rel=1e-12)
        assert np.allclose(v1, v2, atol=1e-8)

    def test_monotone_under_edge_addition(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            n = int(rng.integers(3, 8))
            a = random_symmetric(rng, n)
            i, j = rng.choice(n, size=2, replace=False)
            b = a.copy()
            b[i, j] = b[j, i] = a[i, j] + 1.0
            assert power_iteration(b)[0] >= power_iteration(a)[0] - 1e-12

    def test_zero_matrix(self):
        lam, vec = power_iteration(np.zeros((3, 3)))
        assert lam == 0.0
        assert vec == pytest.approx(np.full(3, 1 / np.sqrt(3)))

    def test_bipartite_pair_converges(self):
        # plain iteration oscillates on [[0,1],[1,0]]; the shift must fix it
        lam, vec = power_iteration(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert lam == pytest.approx(1.0, abs=1e-12)
        assert vec == pytest.approx(np.full(2, np.sqrt(0.5)))


class TestPrediction:
    def test_chain_probabilities_exact(self):
        report = predicted_probabilities(graph_for(fixtures.chain_model(4)))
        expected = [float(f) for f in fixtures.CHAIN4_PROBS]
        assert report.p == pytest.approx(expected, abs=1e-12)
        sines = np.array([0.5, np.sqrt(3) / 2, 1.0, np.sqrt(3) / 2, 0.5])
        assert report.c_eig == pytest.approx(sines, abs=1e-10)

    def test_tied_components_split_evenly(self):
        # six-state manifold under tf: two isolated states, two tied pairs
        report = predicted_probabilities(graph_for(fixtures.six_state_model()))
        expected = [float(f) for f in fixtures.SIX_STATE_TF_PROBS]
        assert report.p == pytest.approx(expected, abs=1e-12)
        surviving = [c for c in report.components if c["surviving"]]
        assert len(surviving) == 2
        assert all(c["size"] == 2 for c in surviving)

    def test_singleton_component_loses_to_edge(self):
        report = predicted_probabilities(graph_for(fixtures.toy_three_state()))
        # the stranded state gets zero mass, the joined pair splits evenly
        assert sorted(report.p) == pytest.approx([0.0, 0.5, 0.5], abs=1e-12)

    def test_scalar_values(self):
        chain = predicted_probabilities(graph_for(fixtures.chain_model(4)))
        assert chain.scalars["tv_uniform"] == pytest.approx(float(Fraction(7, 30)), abs=1e-12)
        six = predicted_probabilities(graph_for(fixtures.six_state_model()))
        assert six.scalars["tv_uniform"] == pytest.approx(float(Fraction(1, 3)), abs=1e-12)
        uniform = predicted_probabilities(graph_for(fixtures.six_state_model(), "tf+pairs"))
        assert uniform.scalars["tv_uniform"] == pytest.approx(0.0, abs=1e-12)
        assert uniform.scalars["cv_centrality"] == pytest.approx(0.0, abs=1e-12)

    def test_energy_flatness_triangle_values(self):
        graph = graph_for(fixtures.triangle_model(0.5))
        ef, ref = energy_flatness(graph)
        assert ef == pytest.approx([10 / 3, 10 / 3, 4.0], abs=1e-12)
        assert ref == pytest.approx([10 / 22, 10 / 22, 0.6], abs=1e-12)

    def test_energy_flatness_rejects_first_order(self):
        with pytest.raises(ArgumentError):
            energy_flatness(graph_for(fixtures.chain_model(4)))


class TestComponentSpectra:
    def test_partition_and_lambda(self):
        graph = graph_for(fixtures.six_state_model())
        spectra = component_spectra(graph)
        assert sorted(len(s.nodes) for s in spectra) == [1, 1, 2, 2]
        lams = sorted(s.lambda1 for s in spectra)
        assert lams == pytest.approx([0.0, 0.0, 1.0, 1.0], abs=1e-12)


class TestReportSerialization:
    def test_json_round_trip_identical_scalars(self):
        report = predicted_probabilities(
            graph_for(fixtures.triangle_model(0.5)), settings={"b": 0.5}
        )
        text = report.to_json()
        data = json.loads(text)
        assert json.loads(json.dumps(data)) == data
        assert data["scalars"] == report.scalars
        assert data["settings"] == {"b": 0.5}
        for i, row in enumerate(data["per_state"]):
            assert row["p"] == float(report.p[i])
            assert row["ref"] == float(report.ref[i])

    def test_csv_reproduces_exact_floats(self):
        import csv
        import io

        report = predicted_probabilities(graph_for(fixtures.chain_model(4)))
        rows = list(csv.DictReader(io.StringIO(report.to_csv())))
        assert len(rows) == 5
        for i, row in enumerate(rows):
            assert float(row["p"]) == float(report.p[i])
            assert float(row["c_eig"]) == float(report.c_eig[i])


class TestScalarHelpers:
    def test_tv_distance_basics(self):
        assert tv_distance([0.5, 0.5], [0.5, 0.5]) == 0.0
        assert tv_distance([1.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0)

    def test_tv_distance_counts_residual_mass(self):
        # oracle leaked 2% outside the manifold
        assert tv_distance([0.5, 0.5], [0.49, 0.49], 0.0, 0.02) == pytest.approx(0.02)

    def test_coefficient_of_variation(self):
        assert coefficient_of_variation([1.0, 1.0, 1.0]) == 0.0
        x = np.array([1.0, 3.0])
        assert coefficient_of_variation(x) == pytest.approx(x.std() / x.mean())

    def test_snap_ties_groups_close_values(self):
        snapped = snap_ties([1.0, 1.0 + 1e-9, 2.0], rel_tol=1e-7)
        assert snapped[0] == snapped[1] != snapped[2]

    def test_rank_concordant(self):
        assert rank_concordant([1, 2, 3], [10, 20, 30])
        assert not rank_concordant([1, 2, 3], [10, 30, 20])
        # ties in the same places still count as concordant
        assert rank_concordant([1, 1 + 1e-9, 2], [5, 5, 9])


class TestSpectralBounds:
    def test_path_graph_bounds(self):
        check = spectral_bounds_check(graph_for(fixtures.chain_model(4)))
        assert check["ok"]
        assert check["mean_deg"] <= check["lambda1"] <= check["max_deg"]
        assert check["lambda1"] == pytest.approx(np.sqrt(3), abs=1e-10)

    def test_rejects_weighted_graph(self):
        with pytest.raises(ArgumentError):
            spectral_bounds_check(graph_for(fixtures.triangle_model(0.5)))
