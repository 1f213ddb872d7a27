import random
from itertools import combinations

import networkx as nx
import pytest

from generators import random_connected_graph, random_connected_set, random_intersection_instance
from gridcontract.contraction import Kind, identity_witness
from gridcontract.errors import BudgetExceeded, InputError
from gridcontract.extension import (ExtensionWitness, build_intersection, build_extension_witness,
                                    edge_degree_bound, steiner_tree, theorem_bound_check,
                                    verify_extension)
from gridcontract.graph import Multigraph, complete_graph, diameter, path_graph, star_graph
from gridcontract.grids import gen_gamma
from oracles import brute_steiner_vertices, to_nx

A, B, C, D = 0, 1, 2, 3
STAR = star_graph(3)  # centre 0, leaves 1..3
STAR_FAMILY = [{0, 1}, {0, 2}, {0, 3}]


def _identity_extension(g):
    w = identity_witness(g)
    return ExtensionWitness(g, g, g, w.with_kind(Kind.size(1)), w, (1, 0))


class TestIntersection:
    def test_path_pair(self):
        inst = build_intersection(path_graph(3), [{A, B}, {B, C}])
        assert inst.result.edges() == [((0, 1), 1)]

    def test_star_triangle(self):
        inst = build_intersection(STAR, STAR_FAMILY)
        assert inst.result.edges() == [((0, 1), 1), ((0, 2), 1), ((1, 2), 1)]

    def test_duplicate_member(self):
        s = {0, 1, 2}
        inst = build_intersection(path_graph(4), [s, s])
        assert inst.result.multiplicity(0, 1) == 3

    @pytest.mark.parametrize("family, code", [
        ([{A, C}], "disconnected-member"), ([set()], "empty-member"), ([{9}], "unknown-vertex"),
    ])
    def test_rejections(self, family, code):
        with pytest.raises(InputError) as info:
            build_intersection(path_graph(3), family)
        assert info.value.code == code

    def test_multiplicity_is_overlap(self):
        rng = random.Random(2)
        for _ in range(30):
            g = random_connected_graph(rng, 10, 0.3)
            fam = [random_connected_set(rng, g, rng.randint(1, 5)) for _ in range(5)]
            res = build_intersection(g, fam).result
            for i, j in combinations(range(5), 2):
                assert res.multiplicity(i, j) == len(fam[i] & fam[j])


class TestEdgeDegree:
    def test_values(self):
        assert edge_degree_bound(complete_graph(3)) == 2
        assert edge_degree_bound(Multigraph([0, 1], [(0, 1, 5)])) == 5
        assert edge_degree_bound(build_intersection(STAR, STAR_FAMILY).result) == 2
        assert edge_degree_bound(Multigraph([])) == 0


class TestSteiner:
    def test_single_terminal(self):
        assert steiner_tree(path_graph(3), {0, 1, 2}, {1}) == []

    def test_path(self):
        assert steiner_tree(path_graph(4), {0, 1, 2, 3}, {0, 3}) == [(0, 1), (1, 2), (2, 3)]

    def test_disconnected_terminals(self):
        with pytest.raises(InputError):
            steiner_tree(path_graph(3), {0, 2}, {0, 2})

    def test_optimal_against_brute_force(self):
        rng = random.Random(17)
        for _ in range(150):
            g = random_connected_graph(rng, rng.randint(2, 9), 0.25)
            members = set(random_connected_set(rng, g, rng.randint(2, len(g))))
            terms = set(rng.sample(sorted(members), rng.randint(1, min(4, len(members)))))
            edges = steiner_tree(g, members, terms)
            verts = {v for e in edges for v in e} or terms
            t = nx.Graph(edges)
            t.add_nodes_from(verts)
            assert nx.is_tree(t) and terms <= verts <= members
            assert len(verts) == brute_steiner_vertices(to_nx(g), members, terms)

    def test_deterministic(self):
        g = gen_gamma(4)
        members = set(g.vertices)
        assert steiner_tree(g, members, {0, 15, 3}) == steiner_tree(g, members, {3, 0, 15})


class TestBuildExtensionWitness:
    def test_path_example(self):
        inst = build_intersection(path_graph(3), [{A, B}, {B, C}])
        w = build_extension_witness(inst, 1)
        assert w.bounds == (2, 0)
        assert len(w.base) == 1 and w.base.vertices[0] == B
        assert len(w.middle) == 2 and w.middle.num_edges == 1
        assert w.result.same_as(inst.result)
        assert verify_extension(w)

    def test_star_example(self):
        inst = build_intersection(STAR, STAR_FAMILY)
        w = build_extension_witness(inst, 2)
        assert w.bounds == (3, 1)
        assert list(w.base.vertices) == [0]
        assert nx.is_isomorphic(to_nx(w.middle), nx.complete_graph(3))
        assert all(len(t) == 1 for t in w.trees)
        assert verify_extension(w)

    def test_disjoint_family(self):
        inst = build_intersection(path_graph(4), [{0}, {2, 3}])
        w = build_extension_witness(inst, 1)
        assert w.middle.num_edges == 0 and w.result.num_edges == 0
        assert verify_extension(w)

    def test_labels_name_copies(self):
        w = build_extension_witness(build_intersection(STAR, STAR_FAMILY), 2)
        assert sorted(w.middle.label(v) for v in w.middle.vertices) == ["0@0", "0@1", "0@2"]

    def test_degree_bound_enforced(self):
        inst = build_intersection(STAR, STAR_FAMILY)
        with pytest.raises(InputError) as info:
            build_extension_witness(inst, 1)
        assert info.value.code == "degree-bound"

    def test_bad_degree(self):
        with pytest.raises(InputError):
            build_extension_witness(build_intersection(path_graph(2), [{0}]), 0)

    def test_random_instances(self):
        rng = random.Random(99)
        for _ in range(60):
            g, fam, d = random_intersection_instance(rng)
            inst = build_intersection(g, fam)
            w = build_extension_witness(inst, d)
            assert w.bounds == (d + 1, d - 1) and verify_extension(w)
            for t in w.trees:
                assert diameter(t, t.vertices) <= d - 1
            holders = {}
            for x in w.middle.vertices:
                holders.setdefault(w.sigma1.sigma[x], []).append(x)
            for ids in holders.values():
                if len(ids) > 1:
                    assert 2 <= len(ids) <= d + 1

    def test_treewidth_chain(self):
        from gridcontract.treewidth import exact_treewidth
        rng = random.Random(5)
        for _ in range(25):
            g, fam, d = random_intersection_instance(rng)
            w = build_extension_witness(build_intersection(g, fam), d)
            tw_h = exact_treewidth(w.result)[0]
            tw_j = exact_treewidth(w.middle)[0]
            tw_g = exact_treewidth(w.base)[0]
            assert tw_h <= tw_j <= (d + 2) * (tw_g + 1) - 1


class TestVerifyExtension:
    def test_identity(self):
        assert verify_extension(_identity_extension(path_graph(4)))

    def test_oversized_block(self):
        w = build_extension_witness(build_intersection(STAR, STAR_FAMILY), 2)
        tight = ExtensionWitness(w.base, w.middle, w.result, w.sigma1, w.sigma2, (2, 1))
        v = verify_extension(tight)
        assert not v and v.code == "size-bound"

    def test_mismatched_graphs(self):
        w = _identity_extension(path_graph(3))
        bad = ExtensionWitness(path_graph(2), w.middle, w.result, w.sigma1, w.sigma2, (1, 0))
        assert verify_extension(bad).code == "mismatched-base"


class TestBoundCheck:
    def test_identity_large_lambda(self):
        rep = theorem_bound_check(_identity_extension(gen_gamma(3)), 10, 1)
        assert rep.ok and rep.complete
        assert set(rep.checks) == {"minor", "lift", "class", "grid", "combined"}
        assert (rep.tw_result, rep.bcg_result) == (4, 3)

    def test_star_example(self):
        w = build_extension_witness(build_intersection(STAR, STAR_FAMILY), 2)
        rep = theorem_bound_check(w, 1, 1)
        assert (rep.tw_result, rep.tw_middle, rep.tw_base) == (2, 2, 0)
        assert (rep.bcg_result, rep.bcg_base) == (0, 0)
        assert rep.checks["minor"] == "pass" and rep.checks["lift"] == "pass"
        assert rep.checks["grid"] == "pass"

    def test_small_lambda_fails_class(self):
        rep = theorem_bound_check(_identity_extension(gen_gamma(3)), 0.1, 1)
        assert rep.checks["class"] == "fail" and not rep.ok

    def test_parameters(self):
        w = _identity_extension(path_graph(3))
        with pytest.raises(InputError):
            theorem_bound_check(w, 0, 1)
        with pytest.raises(InputError):
            theorem_bound_check(w, 1, 2)

    def test_over_budget(self):
        w = _identity_extension(gen_gamma(5))
        with pytest.raises(BudgetExceeded):
            theorem_bound_check(w, 1, 1)
        rep = theorem_bound_check(w, 1, 1, strict=False)
        assert not rep.complete and rep.checks["grid"] == "over_budget"
