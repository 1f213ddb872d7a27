import random

import pytest
from hypothesis import given, settings, strategies as st

from generators import connected_graphs, random_connected_graph, random_size_partition
from gridcontract.contraction import (UNBOUNDED, Budget, ContractionWitness, Kind, bcg,
                                      contraction_compose, find_contraction, grid_shrink_witness,
                                      identity_witness, max_block_diameter, max_block_size,
                                      verify_contraction, witness_from_blocks)
from gridcontract.errors import BudgetExceeded, InputError
from gridcontract.graph import (Multigraph, complete_graph, cycle_graph, dissolvable_vertices,
                                dissolve, path_graph, star_graph)
from gridcontract.grids import gen_gamma, gen_square_grid, vertex_id
from oracles import closure_contains, contraction_closure, to_nx

A, B, C, D = 0, 1, 2, 3
K2 = complete_graph(2)


class TestKind:
    def test_validation(self):
        with pytest.raises(InputError):
            Kind("radius", 1)
        with pytest.raises(InputError):
            Kind.size(-1)
        assert str(Kind.diameter(2)) == "diameter(2)" and str(UNBOUNDED) == "unbounded"


class TestVerify:
    @given(connected_graphs(max_n=9))
    def test_identity_ok(self, g):
        assert verify_contraction(identity_witness(g))

    @pytest.mark.parametrize("kind", [Kind.size(2), Kind.diameter(1)])
    def test_c4_onto_k2(self, kind):
        w = ContractionWitness(cycle_graph(4), K2, {A: 0, B: 0, C: 1, D: 1}, kind)
        assert verify_contraction(w)

    def test_c4_pairs_too_large_for_size_one(self):
        w = ContractionWitness(cycle_graph(4), K2, {A: 0, B: 0, C: 1, D: 1}, Kind.size(1))
        assert verify_contraction(w).code == "size-bound"

    def test_missing_edge_violates_adjacency(self):
        w = ContractionWitness(cycle_graph(4), Multigraph([0, 1]), {A: 0, B: 0, C: 1, D: 1})
        v = verify_contraction(w)
        assert not v and v.code == "adjacency-law"

    def test_extra_edge_violates_adjacency(self):
        g = Multigraph(range(3), [(0, 1)])
        w = ContractionWitness(g, complete_graph(2), {0: 0, 1: 0, 2: 1})
        assert verify_contraction(w).code == "adjacency-law"
        h = Multigraph([0, 1, 2], [(0, 1), (1, 2)])
        w = ContractionWitness(g, h, {0: 0, 1: 1, 2: 2})
        assert verify_contraction(w).code == "adjacency-law"

    def test_disconnected_block(self):
        w = ContractionWitness(path_graph(3), K2, {A: 0, C: 0, B: 1})
        assert verify_contraction(w).code == "disconnected-block"

    def test_not_surjective(self):
        w = ContractionWitness(path_graph(2), complete_graph(3), {0: 0, 1: 1})
        assert verify_contraction(w).code == "not-surjective"

    def test_diameter_bound(self):
        w = ContractionWitness(path_graph(4), Multigraph([0]), {v: 0 for v in range(4)},
                               Kind.diameter(2))
        assert verify_contraction(w).code == "diameter-bound"
        assert verify_contraction(w.with_kind(Kind.diameter(3)))

    def test_structural_errors(self):
        with pytest.raises(InputError) as info:
            verify_contraction(ContractionWitness(path_graph(2), K2, {0: 0}))
        assert info.value.code == "not-total"
        with pytest.raises(InputError) as info:
            verify_contraction(ContractionWitness(path_graph(2), K2, {0: 0, 1: 9}))
        assert info.value.code == "outside-target"

    def test_multiplicities_ignored(self):
        g = Multigraph(range(3), [(0, 1, 2), (1, 2), (0, 2)])
        assert verify_contraction(ContractionWitness(g, complete_graph(3), {v: v for v in range(3)}))
        w = ContractionWitness(complete_graph(3), g, {v: v for v in range(3)})
        assert verify_contraction(w)

    def test_block_measures(self):
        w = witness_from_blocks(path_graph(5), [{0, 1, 2}, {3}, {4}])
        assert max_block_size(w) == 3 and max_block_diameter(w) == 2
        assert verify_contraction(w)


class TestFind:
    def test_c4_k2_size2(self):
        w = find_contraction(cycle_graph(4), K2, Kind.size(2))
        assert w is not None and verify_contraction(w)
        assert sorted(sorted(b) for b in w.blocks().values()) in ([[A, B], [C, D]], [[A, D], [B, C]])

    def test_square_grid_is_not_gamma(self):
        assert find_contraction(gen_square_grid(3), gen_gamma(3)) is None

    @given(connected_graphs(max_n=8))
    def test_self_with_diameter_zero(self, g):
        w = find_contraction(g, g, Kind.diameter(0))
        assert w is not None and verify_contraction(w)
        assert all(len(b) == 1 for b in w.blocks().values())

    def test_respects_size_bound(self):
        assert find_contraction(path_graph(5), K2, Kind.size(2)) is None
        assert find_contraction(path_graph(5), K2, Kind.size(3)) is not None

    def test_respects_diameter_bound(self):
        assert find_contraction(star_graph(4), Multigraph([0]), Kind.diameter(1)) is None
        assert find_contraction(star_graph(4), Multigraph([0]), Kind.diameter(2)) is not None

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            find_contraction(path_graph(13), K2)
        assert find_contraction(path_graph(13), K2, budget=Budget(max_vertices=13)) is not None

    def test_target_larger_than_source(self):
        assert find_contraction(path_graph(3), path_graph(4)) is None

    @settings(max_examples=40)
    @given(connected_graphs(min_n=2, max_n=7), st.data())
    def test_round_trip_and_oracle(self, g, data):
        closure = contraction_closure(to_nx(g))
        target_nx = data.draw(st.sampled_from(closure))
        h = Multigraph(range(target_nx.number_of_nodes()), list(target_nx.edges()))
        w = find_contraction(g, h)
        assert w is not None and verify_contraction(w)

    def test_rejections_match_oracle(self):
        rng = random.Random(11)
        for _ in range(25):
            g = random_connected_graph(rng, rng.randint(4, 7), 0.35)
            closure = contraction_closure(to_nx(g))
            for n in range(1, len(g) + 1):
                h = random_connected_graph(rng, n, 0.5)
                expected = closure_contains(closure, to_nx(h))
                assert (find_contraction(g, h) is not None) == expected


class TestBcg:
    def test_gamma3(self):
        assert bcg(gen_gamma(3)) == 3

    @pytest.mark.parametrize("g", [path_graph(9), star_graph(8)])
    def test_trees(self, g):
        assert bcg(g) == 0

    def test_complete(self):
        g = gen_gamma(3)
        assert not g.has_edge(vertex_id(0, 0, 3), vertex_id(2, 0, 3))
        assert bcg(complete_graph(9)) == 0

    def test_small_graphs(self):
        assert bcg(cycle_graph(5)) == 0

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            bcg(gen_gamma(4))
        assert bcg(gen_gamma(4), Budget(max_vertices=16)) == 4

    def test_monotone_under_contraction(self):
        rng = random.Random(5)
        base = gen_gamma(3)
        for _ in range(10):
            # subdivide some edges, then contract random small blocks
            edges = list(base.edge_pairs())
            extra = rng.sample(edges, rng.randint(1, 3))
            vs = list(base.vertices)
            new_edges = [e for e in edges if e not in extra]
            for i, (u, v) in enumerate(extra):
                w = 9 + i
                vs.append(w)
                new_edges += [(u, w), (w, v)]
            g = Multigraph(vs, new_edges)
            blocks = random_size_partition(rng, g, 2)
            h = witness_from_blocks(g, blocks).target
            assert bcg(h) <= bcg(g)


class TestDissolutionInvariance:
    def test_k4_survives_dissolution(self):
        rng = random.Random(3)
        checked = 0
        for _ in range(60):
            g = random_connected_graph(rng, rng.randint(5, 8), 0.3)
            if find_contraction(g, complete_graph(4)) is None:
                continue
            for v in dissolvable_vertices(g):
                assert find_contraction(dissolve(g, v), complete_graph(4)) is not None
                checked += 1
        assert checked > 0

    def test_subdivided_gamma3(self):
        g = gen_gamma(3)
        u, v = vertex_id(0, 0, 3), vertex_id(0, 1, 3)
        edges = [e for e in g.edge_pairs() if e != (u, v)] + [(u, 9), (9, v)]
        sub = Multigraph(range(10), edges)
        assert find_contraction(sub, g) is not None
        assert find_contraction(dissolve(sub, 9), g) is not None


class TestCompose:
    def test_identity(self):
        w = identity_witness(cycle_graph(5))
        out = contraction_compose(w, w)
        assert out.sigma == w.sigma and verify_contraction(out)

    def test_c6_to_c3_to_point(self):
        w1 = ContractionWitness(cycle_graph(6), cycle_graph(3), {0: 0, 1: 0, 2: 1, 3: 1, 4: 2, 5: 2})
        assert verify_contraction(w1)
        w2 = ContractionWitness(cycle_graph(3), Multigraph([0]), {0: 0, 1: 0, 2: 0})
        out = contraction_compose(w1, w2)
        assert verify_contraction(out) and set(out.sigma.values()) == {0}

    def test_gamma6_blocks_then_identity(self):
        sigma = {vertex_id(i, j, 6): vertex_id(i // 2, j // 2, 3) for i in range(6) for j in range(6)}
        w = ContractionWitness(gen_gamma(6), gen_gamma(3), sigma, Kind.size(4))
        assert verify_contraction(w)
        out = contraction_compose(w, identity_witness(gen_gamma(3)))
        assert out.sigma == sigma and verify_contraction(out)

    def test_mismatch(self):
        with pytest.raises(InputError):
            contraction_compose(identity_witness(path_graph(3)), identity_witness(path_graph(4)))

    @pytest.mark.parametrize("k, small", [(7, 3), (10, 5)])
    def test_grid_shrink(self, k, small):
        assert verify_contraction(grid_shrink_witness(k, small))
