import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from solgraph import fixtures
from solgraph.errors import (
    ArgumentError,
    EmbeddingError,
    UnsupportedTransformError,
)
from solgraph.groundset import enumerate_ground_states
from solgraph.model import IsingModel
from solgraph.transforms import Embedding, eltip, embed


def pair_embedding():
    """Two logical spins; spin 1 becomes a two-qubit chain (1, 2)."""
    return Embedding.build(
        chains={0: [0], 1: [1, 2]},
        chain_edges={1: [(1, 2)]},
        assignment={(0, 1): (0, 1)},
    )


class TestEmbeddingValidation:
    def test_rejects_overlapping_chains(self):
        with pytest.raises(EmbeddingError):
            Embedding.build(chains={0: [0, 1], 1: [1]})

    def test_rejects_non_covering_union(self):
        with pytest.raises(EmbeddingError):
            Embedding.build(chains={0: [0], 1: [2]})

    def test_rejects_disconnected_chain_edges(self):
        with pytest.raises(EmbeddingError):
            Embedding.build(
                chains={0: [0, 1, 2]},
                chain_edges={0: [(0, 1)]},  # qubit 2 unreachable
            )

    def test_rejects_assignment_outside_chains(self):
        with pytest.raises(EmbeddingError):
            Embedding.build(
                chains={0: [0], 1: [1, 2]},
                chain_edges={1: [(1, 2)]},
                assignment={(0, 1): (1, 2)},  # both endpoints in chain 1
            )

    def test_rejects_bad_field_split(self):
        with pytest.raises(EmbeddingError):
            Embedding.build(
                chains={0: [0], 1: [1, 2]},
                chain_edges={1: [(1, 2)]},
                assignment={(0, 1): (0, 1)},
                field_split={1: [0.6, 0.6]},  # sums to 1.2
            )


class TestEmbeddingMaps:
    def test_extend_and_collapse_round_trip(self):
        emb = fixtures.six_state_embedding()
        for v in range(32):
            phys = emb.extend_value(v)
            assert emb.chain_intact(phys)
            assert emb.logical_value(phys) == v

    def test_broken_chain_detected(self):
        emb = pair_embedding()
        assert not emb.chain_intact(0b010)  # qubits 1,2 disagree
        with pytest.raises(ArgumentError, match="broken chain"):
            emb.logical_value(0b010)

    def test_weak_chain_coupling_admits_broken_states(self):
        # frustrated AF triangle; spin 2 becomes chain (2, 3) whose two
        # incident couplings land on different chain qubits.  Breaking the
        # chain relieves the frustration, so for small J_F the ground
        # manifold contains broken-chain states; a strong chain restores
        # exactly the images of the six logical ground states.
        logical = IsingModel.build(
            3, [((0, 1), 1.0), ((0, 2), 1.0), ((1, 2), 1.0)]
        )
        emb = Embedding.build(
            chains={0: [0], 1: [1], 2: [2, 3]},
            chain_edges={2: [(2, 3)]},
            assignment={(0, 1): (0, 1), (0, 2): (0, 2), (1, 2): (1, 3)},
        )
        weak = enumerate_ground_states(embed(logical, emb, j_f=0.5))
        assert any(not emb.chain_intact(int(v)) for v in weak.values)

        strong = enumerate_ground_states(embed(logical, emb, j_f=1.5))
        assert all(emb.chain_intact(int(v)) for v in strong.values)
        logical_manifold = enumerate_ground_states(logical)
        images = {emb.extend_value(int(v)) for v in logical_manifold.values}
        assert {int(v) for v in strong.values} == images

    def test_json_round_trip(self, tmp_path):
        emb = fixtures.six_state_embedding()
        again = Embedding.from_dict(emb.to_dict())
        assert again.chains == emb.chains
        assert again.assignment == emb.assignment
        path = tmp_path / "emb.json"
        emb.save(path)
        loaded = Embedding.load(path)
        assert loaded.chains == emb.chains
        assert loaded.chain_edges == emb.chain_edges

    def test_dict_keys_use_comma_format(self):
        d = pair_embedding().to_dict()
        assert d["assignment"] == {"0,1": [0, 1]}


class TestEmbed:
    @given(st.integers(0, 31), st.sampled_from([0.5, 1.0, 1.5]))
    def test_intact_energy_is_affine_shift(self, logical_value, j_f):
        model = fixtures.six_state_model()
        emb = fixtures.six_state_embedding()
        physical = embed(model, emb, j_f)
        n_chain_edges = sum(len(e) for e in emb.chain_edges.values())
        expected = model.energy(logical_value) - j_f * n_chain_edges
        assert physical.energy(emb.extend_value(logical_value)) == pytest.approx(
            expected, abs=1e-12
        )

    def test_extended_manifold(self):
        physical = embed(fixtures.six_state_model(), fixtures.six_state_embedding(), 1.0)
        manifold = enumerate_ground_states(physical)
        assert tuple(int(v) for v in manifold.values) == fixtures.SIX_STATE_EXTENDED_MANIFOLD

    def test_missing_assignment_names_the_edge(self):
        model = IsingModel.build(2, [((0, 1), -1.0)])
        emb = Embedding.build(chains={0: [0], 1: [1, 2]}, chain_edges={1: [(1, 2)]})
        with pytest.raises(EmbeddingError, match=r"\(0,1\)"):
            embed(model, emb, 1.0)

    def test_template_mode_matches_bound(self):
        model = fixtures.six_state_model()
        emb = fixtures.six_state_embedding()
        template = embed(model, emb, None)
        assert template.parameter_names() == {"J_F"}
        assert template.substitute({"J_F": 1.5}) == embed(model, emb, 1.5)

    def test_rejects_nonpositive_chain_strength(self):
        with pytest.raises(ArgumentError):
            embed(fixtures.six_state_model(), fixtures.six_state_embedding(), -1.0)

    def test_field_split_distributes_weight(self):
        model = IsingModel.build(2, [((0, 1), -1.0), ((1,), 2.0)])
        emb = Embedding.build(
            chains={0: [0], 1: [1, 2]},
            chain_edges={1: [(1, 2)]},
            assignment={(0, 1): (0, 1)},
            field_split={1: [0.25, 0.75]},
        )
        physical = embed(model, emb, 1.0)
        assert physical.field(1) == pytest.approx(0.5)
        assert physical.field(2) == pytest.approx(1.5)


class TestEltip:
    def test_swaps_field_and_couplings(self):
        # star: h_0 = -2, both incident couplings -1
        model = IsingModel.build(
            3, [((0,), -2.0), ((0, 1), -1.0), ((0, 2), -1.0), ((1,), 0.5)]
        )
        out = eltip(model, 0)
        assert out.field(0) == -1.0
        assert out.coupling(0, 1) == out.coupling(0, 2) == -2.0
        assert out.field(1) == 0.5  # untouched elsewhere

    def test_involution(self):
        model = IsingModel.build(
            3, [((0,), -2.0), ((0, 1), -1.0), ((0, 2), -1.0), ((1, 2), 0.7)]
        )
        assert eltip(eltip(model, 0), 0) == model

    def test_fixed_point_when_field_equals_coupling(self):
        model = IsingModel.build(2, [((0,), -1.0), ((0, 1), -1.0)])
        assert eltip(model, 0) == model

    def test_preserves_spin_and_term_counts(self):
        model = IsingModel.build(
            3, [((0,), -2.0), ((0, 1), -1.0), ((0, 2), -1.0)]
        )
        out = eltip(model, 0)
        assert out.num_spins == model.num_spins
        assert len(out.terms) == len(model.terms)
        # the swap really happened: field takes the coupling value and
        # every incident coupling takes the old field value
        coeff = dict(out.terms)
        assert coeff[(0,)] == -1.0
        assert coeff[(0, 1)] == -2.0
        assert coeff[(0, 2)] == -2.0

    def test_refuses_missing_field(self):
        model = fixtures.six_state_model()  # zero fields everywhere
        for k in range(5):
            with pytest.raises(UnsupportedTransformError, match="no local-field"):
                eltip(model, k)

    def test_refuses_isolated_spin(self):
        model = IsingModel.build(2, [((0,), -1.0), ((1,), -1.0)])
        with pytest.raises(UnsupportedTransformError, match="no incident couplings"):
            eltip(model, 0)

    def test_refuses_heterogeneous_couplings(self):
        model = IsingModel.build(
            3, [((0,), -1.0), ((0, 1), -1.0), ((0, 2), -2.0)]
        )
        with pytest.raises(UnsupportedTransformError, match=r"\[-2\.0, -1\.0\]"):
            eltip(model, 0)

    def test_rejects_out_of_range_spin(self):
        with pytest.raises(ArgumentError):
            eltip(fixtures.six_state_model(), 9)
