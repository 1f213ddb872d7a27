import random

import pytest
from hypothesis import given, settings, strategies as st

from gridcontract.contraction import verify_contraction
from gridcontract.errors import InputError
from gridcontract.graph import diameter, is_connected
from gridcontract.grids import gen_gamma
from gridcontract.instances import gen_instance, random_diameter_partition


def test_inflate_one_c_zero_is_identity():
    inst = gen_instance(6, 0, 1, 3)
    assert inst.g.same_as(gen_gamma(6)) and inst.h.same_as(inst.g)
    assert all(inst.sigma.sigma[v] == v for v in inst.g.vertices)
    assert all(inst.phi.sigma[v] == v for v in inst.g.vertices)


def test_spec_instance_verifies():
    inst = gen_instance(9, 1, 2, 7)
    assert verify_contraction(inst.sigma) and verify_contraction(inst.phi)
    assert inst.sigma.target.same_as(gen_gamma(9))
    assert str(inst.sigma.kind) == "size(2)" and str(inst.phi.kind) == "diameter(1)"


def test_same_seed_same_bytes():
    assert gen_instance(12, 2, 3, 42).to_bytes() == gen_instance(12, 2, 3, 42).to_bytes()
    assert gen_instance(12, 2, 3, 42).to_bytes() != gen_instance(12, 2, 3, 43).to_bytes()


@pytest.mark.parametrize("args", [(2, 0, 1, 0), (31, 0, 1, 0), (5, -1, 1, 0), (5, 0, 0, 0),
                                  (5, 0, 5, 0), (5, 0, 1, -1), (5, 0, 1, 2 ** 64)])
def test_out_of_budget(args):
    with pytest.raises(InputError) as info:
        gen_instance(*args)
    assert info.value.code == "out-of-budget"


@settings(max_examples=25)
@given(st.integers(3, 14), st.integers(0, 3), st.integers(1, 4), st.integers(0, 2 ** 64 - 1))
def test_witnesses_hold_by_construction(k, c, inflate, seed):
    inst = gen_instance(k, c, inflate, seed)
    assert is_connected(inst.g)
    assert verify_contraction(inst.sigma) and verify_contraction(inst.phi)
    assert max(len(b) for b in inst.sigma.blocks().values()) <= inflate
    assert inst.params == (k, c, inflate) and inst.seed == seed


@pytest.mark.parametrize("c", [0, 1, 2, 3, 4])
def test_partition_blocks_respect_diameter(c):
    g = gen_instance(8, 0, 3, 1).g
    blocks = random_diameter_partition(g, c, random.Random(c))
    assert sorted(v for b in blocks for v in b) == sorted(g.vertices)
    assert all(diameter(g, b) <= c for b in blocks)
    if c:
        assert any(len(b) > 1 for b in blocks)
