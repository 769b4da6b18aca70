import numpy as np
import pytest

from crosslap.core import Crossimplex, validate
from crosslap.diffusion import (
    Multiplex,
    diffusion_bicomplex,
    diffusion_hub_analysis,
)
from crosslap.errors import EmptyGrade, SameLayer, UnknownLayer
from crosslap.homology import betti_vector
from oracles import diffusion_ranking, random_multiplex


def cx(top, bottom=()):
    return Crossimplex(tuple(top), tuple(bottom))


@pytest.fixture
def triangle_edge():
    """Layer 1 is the triangle on {1,2,3}, layer 2 the single edge {2,3}."""
    return Multiplex.from_edges({1: [(1, 2), (2, 3), (1, 3)], 2: [(2, 3)]})


class TestDiffusionBicomplex:
    def test_triangle_onto_edge(self, triangle_edge):
        x = diffusion_bicomplex(triangle_edge, 1, 2)
        assert x.crossimplices((0, 0)) == {cx([1], [2]), cx([1], [3]), cx([2], [3])}
        assert x.crossimplices((0, 1)) == {cx([1], [2, 3])}
        assert validate(x) == []

    def test_structure_constraints(self, triangle_edge):
        x = diffusion_bicomplex(triangle_edge, 1, 2)
        assert not x.crossimplices((1, 0))
        assert not x.crossimplices((1, -1))
        assert not x.crossimplices((2, -1))

    def test_empty_source_layer(self):
        m = Multiplex.from_edges({1: [], 2: [(1, 2), (2, 3), (1, 3)]}, n_nodes=3)
        x = diffusion_bicomplex(m, 1, 2)
        assert not x.crossimplices((0, 0))
        assert not x.crossimplices((0, 1))
        # the bottom horizontal complex is the clique complex of layer 2
        assert len(x.crossimplices((-1, 1))) == 3
        assert x.crossimplices((-1, 2)) == {cx([], [1, 2, 3])}

    def test_cross_edge_count_is_source_edge_count(self):
        rng = np.random.default_rng(67)
        for _ in range(30):
            m = random_multiplex(rng)
            for s in m.layer_ids():
                for t in m.layer_ids():
                    if s == t:
                        continue
                    x = diffusion_bicomplex(m, s, t)
                    assert len(x.crossimplices((0, 0))) == len(m.layers[s])
                    assert validate(x) == []

    def test_bottom_triangle_membership_rule(self):
        rng = np.random.default_rng(97)
        for _ in range(20):
            m = random_multiplex(rng)
            s, t = 1, 2
            x = diffusion_bicomplex(m, s, t)
            e_s, e_t = m.layers[s], m.layers[t]
            got = {(a.top[0], a.bottom) for a in x.crossimplices((0, 1))}
            expected = set()
            for i in range(1, m.n_nodes + 1):
                for j in range(i + 1, m.n_nodes + 1):
                    for k in range(j + 1, m.n_nodes + 1):
                        if (
                            (i, j) in e_s
                            and (i, k) in e_s
                            and (j, k) in e_t
                        ):
                            expected.add((i, (j, k)))
            assert got == expected

    def test_direction_asymmetry(self, triangle_edge):
        forward = diffusion_bicomplex(triangle_edge, 1, 2)
        backward = diffusion_bicomplex(triangle_edge, 2, 1)
        assert betti_vector(forward, (0, 0)).as_pair() != betti_vector(
            backward, (0, 0)
        ).as_pair()

    def test_same_layer_rejected(self, triangle_edge):
        with pytest.raises(SameLayer):
            diffusion_bicomplex(triangle_edge, 1, 1)

    def test_unknown_layer_rejected(self, triangle_edge):
        with pytest.raises(UnknownLayer):
            diffusion_bicomplex(triangle_edge, 1, 9)

    def test_weights_recorded_when_requested(self):
        m = Multiplex(
            n_nodes=3,
            layers={1: frozenset({(1, 2)}), 2: frozenset({(2, 3)})},
            edge_weights={1: {(1, 2): 4.0}},
        )
        binary = diffusion_bicomplex(m, 1, 2)
        weighted = diffusion_bicomplex(m, 1, 2, use_weights=True)
        assert binary.weight(cx([1], [2])) == 1.0
        assert weighted.weight(cx([1], [2])) == 4.0


class TestDiffusionHubAnalysis:
    def test_single_edge_source(self):
        m = Multiplex.from_edges({1: [(2, 5)], 2: [(1, 3)]}, n_nodes=5)
        result = diffusion_hub_analysis(m, 1, 2)
        assert result.report.ranking == (2,)
        assert result.top_hubs[0].node == 2
        assert result.top_hubs[0].hubness == pytest.approx(1.0)

    def test_empty_source_raises(self):
        m = Multiplex.from_edges({1: [], 2: [(1, 2)]}, n_nodes=2)
        with pytest.raises(EmptyGrade):
            diffusion_hub_analysis(m, 1, 2)

    def test_toy_multiplex_matches_hand_pipeline(self, triangle_edge):
        result = diffusion_hub_analysis(triangle_edge, 1, 2, top_n=5)
        oracle = diffusion_ranking(
            triangle_edge.n_nodes, triangle_edge.layers[1], triangle_edge.layers[2]
        )
        assert list(result.report.ranking) == oracle

    def test_rankings_match_oracle_on_random_multiplexes(self):
        rng = np.random.default_rng(113)
        for _ in range(12):
            m = random_multiplex(rng, n_layers=3, max_nodes=12)
            for s in m.layer_ids():
                for t in m.layer_ids():
                    if s == t or not m.layers[s]:
                        continue
                    got = diffusion_hub_analysis(m, s, t, top_n=m.n_nodes)
                    want = diffusion_ranking(m.n_nodes, m.layers[s], m.layers[t])
                    assert list(got.report.ranking) == want

    def test_labels_flow_into_rows(self):
        m = Multiplex.from_edges(
            {1: [(1, 2)], 2: [(1, 2)]}, labels={1: "FRA", 2: "MUC"}
        )
        result = diffusion_hub_analysis(m, 1, 2)
        assert result.top_hubs[0].label == "FRA"
