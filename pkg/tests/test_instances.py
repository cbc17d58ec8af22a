import itertools

import pytest

import oracles
from fixlat.errors import SizeCap
from fixlat.lab.instances import (
    ANTICHAIN_TOWER,
    CHAIN,
    RANDOM_LATTICE,
    RANDOM_ORDER,
    SHAPES,
    all_instances,
    generate_instance,
    labeled_posets,
)
from fixlat.order import classify_poset


@pytest.mark.parametrize("shape", SHAPES)
def test_deterministic(shape):
    for seed in (0, 7, 2**63 + 5):
        a, b = generate_instance(seed, 6, shape), generate_instance(seed, 6, shape)
        assert a.poset == b.poset and a.f.table == b.f.table and a.a0 == b.a0 and a.g.table == b.g.table


@pytest.mark.parametrize("shape", SHAPES)
def test_singleton(shape):
    inst = generate_instance(1, 1, shape)
    assert len(inst.poset) == 1 and inst.f.table == (0,) and inst.a0 == 0


def test_size_cap():
    with pytest.raises(SizeCap):
        generate_instance(0, 0)
    with pytest.raises(SizeCap):
        generate_instance(0, 10, cap=8)
    with pytest.raises(ValueError):
        generate_instance(0, 3, "BLOB")


def test_seed_42_classification_matches_oracle():
    inst = generate_instance(42, 6, RANDOM_ORDER)
    p, c = inst.poset, classify_poset(inst.poset)
    subsets = list(oracles.subsets(p.elements))
    assert c.is_complete_lattice == all(oracles.lub(p, s) is not None and oracles.glb(p, s) is not None for s in subsets)
    assert c.is_complete_semilattice == all(oracles.lub(p, s) is not None for s in subsets if s)
    assert c.is_chain_complete == all(oracles.lub(p, s) is not None for s in subsets if oracles.is_chain(p, s))
    assert c.is_well_ordered == oracles.is_chain(p, p.elements)


def test_shapes():
    for seed, size in itertools.product(range(40), range(1, 9)):
        p = generate_instance(seed, size, RANDOM_LATTICE).poset
        assert len(p) == size and classify_poset(p).is_complete_lattice
        assert classify_poset(generate_instance(seed, size, CHAIN).poset).is_well_ordered
        tower = generate_instance(seed, size, ANTICHAIN_TOWER).poset
        # levels: comparable iff on different levels
        for x, y in itertools.combinations(tower.elements, 2):
            same_level = not tower.comparable(x, y)
            assert same_level == (tower.up[x] & ~(1 << x) == tower.up[y] & ~(1 << y))


def test_labeled_posets_are_distinct_orders():
    seen = set()
    for p in labeled_posets(4):
        key = p.leq.tobytes()
        assert key not in seen
        seen.add(key)
    assert len(seen) == 219


def test_all_instances_count():
    # 1 + 3*4*2 + 19*27*3
    assert sum(1 for _ in all_instances(3)) == 1 + 3 * 4 * 2 + 19 * 27 * 3
