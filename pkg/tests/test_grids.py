import networkx as nx
import pytest

from gridcontract.errors import InputError
from gridcontract.graph import connected_components, quotient
from gridcontract.grids import (apex_id, boundary, coords, gamma_side, gen_gamma, gen_gamma_hat,
                                gen_square_grid, shrink_map, vertex_id)
from gridcontract.iso import are_isomorphic
from oracles import gamma_reference, to_nx


def _edge_count_by_enumeration(k, apex):
    # grid edges, diagonals, then hub-to-boundary edges not already present
    hub_extra = 4 * k - 4 if apex else 4 * k - 7
    return 2 * k * (k - 1) + (k - 1) ** 2 + hub_extra


class TestSquareGrid:
    @pytest.mark.parametrize("k, n, m", [(1, 1, 0), (2, 4, 4), (3, 9, 12)])
    def test_counts(self, k, n, m):
        g = gen_square_grid(k)
        assert (len(g), g.num_edges) == (n, m)
        assert g.is_simple()

    def test_k2_is_four_cycle(self):
        assert to_nx(gen_square_grid(2)).edges and nx.is_isomorphic(
            to_nx(gen_square_grid(2)), nx.cycle_graph(4))

    def test_zero_rejected(self):
        with pytest.raises(InputError):
            gen_square_grid(0)

    def test_labels_are_coordinates(self):
        g = gen_square_grid(4)
        assert g.label(vertex_id(2, 3, 4)) == "(2,3)"
        assert coords(vertex_id(2, 3, 4), 4) == (2, 3)


class TestGamma:
    @pytest.mark.parametrize("k, m", [(3, 21), (9, 237)])
    def test_spec_counts(self, k, m):
        g = gen_gamma(k)
        assert len(g) == k * k and g.num_edges == m == _edge_count_by_enumeration(k, False)

    @pytest.mark.parametrize("k", range(3, 26))
    def test_closed_form(self, k):
        assert gen_gamma(k).num_edges == 3 * k * k - 6

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_small_rejected(self, k):
        with pytest.raises(InputError):
            gen_gamma(k)

    @pytest.mark.parametrize("k", range(3, 12))
    def test_min_degree_and_corner(self, k):
        g = gen_gamma(k)
        assert g.min_degree() >= 3
        assert g.degree(vertex_id(0, 0, k)) == 3

    @pytest.mark.parametrize("k", range(3, 10))
    def test_matches_definition(self, k):
        assert nx.is_isomorphic(to_nx(gen_gamma(k)), gamma_reference(k))
        ref = gamma_reference(k)
        ours = to_nx(gen_gamma(k))
        assert {frozenset(map(lambda v: coords(v, k), e)) for e in ours.edges} == \
            {frozenset(e) for e in ref.edges}

    @pytest.mark.parametrize("k", range(3, 10))
    def test_planar_triangulation(self, k):
        g = to_nx(gen_gamma(k))
        assert nx.check_planarity(g)[0]
        assert g.number_of_edges() == 3 * g.number_of_nodes() - 6

    @pytest.mark.parametrize("k", range(3, 9))
    def test_contains_square_grid(self, k):
        g = gen_gamma(k)
        grid = gen_square_grid(k)
        for (u, v), _ in grid.edges():
            assert g.has_edge(u, v)
        corner = vertex_id(k - 1, k - 1, k)
        stripped = [(u, v) for (u, v), _ in g.edges()
                    if corner not in (u, v) or grid.has_edge(u, v)]
        stripped = [(u, v) for (u, v) in stripped
                    if not (abs(coords(u, k)[0] - coords(v, k)[0]) == 1
                            and abs(coords(u, k)[1] - coords(v, k)[1]) == 1)]
        assert sorted(stripped) == sorted(grid.edge_pairs())

    def test_gamma_side(self):
        assert gamma_side(gen_gamma(5)) == 5
        assert gamma_side(gen_square_grid(5)) is None


class TestGammaHat:
    def test_k3_counts(self):
        g = gen_gamma_hat(3)
        assert (len(g), g.num_edges) == (10, 24) == (10, _edge_count_by_enumeration(3, True))
        assert g.degree(apex_id(3)) == 8

    def test_apex_neighbourhood_k5(self):
        g = gen_gamma_hat(5)
        assert set(g.neighbors(apex_id(5))) == set(boundary(5))
        assert len(boundary(5)) == 16

    @pytest.mark.parametrize("k", range(3, 16))
    def test_counts_and_degree_three_corners(self, k):
        g = gen_gamma_hat(k)
        assert g.num_edges == 3 * k * k - 3
        low = sorted(v for v in range(k * k) if g.degree(v) == 3)
        assert low == [vertex_id(0, 0, k), vertex_id(k - 1, k - 1, k)]
        assert g.label(apex_id(k)) == "a"

    @pytest.mark.parametrize("k", range(3, 10))
    def test_matches_definition(self, k):
        assert nx.is_isomorphic(to_nx(gen_gamma_hat(k)), gamma_reference(k, apex=True))

    @pytest.mark.parametrize("k", range(3, 10))
    def test_apex_merge_gives_gamma(self, k):
        g = gen_gamma_hat(k)
        corner = vertex_id(k - 1, k - 1, k)
        merged = nx.contracted_nodes(to_nx(g), corner, apex_id(k), self_loops=False)
        assert nx.is_isomorphic(merged, to_nx(gen_gamma(k)))

    def test_small_rejected(self):
        with pytest.raises(InputError):
            gen_gamma_hat(2)


class TestShrink:
    @pytest.mark.parametrize("k, small", [(5, 3), (7, 4), (6, 6)])
    def test_quotient_is_smaller_grid(self, k, small):
        m = shrink_map(k, small)
        blocks = {}
        for v, x in m.items():
            blocks.setdefault(x, set()).add(v)
        g = gen_gamma(k)
        ordered = [blocks[x] for x in range(small * small)]
        for b in ordered:
            assert len(connected_components(g, b)) == 1
        assert are_isomorphic(quotient(g, ordered), gen_gamma(small))

    def test_bad_sizes(self):
        with pytest.raises(InputError):
            shrink_map(4, 5)
