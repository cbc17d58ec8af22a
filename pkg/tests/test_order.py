import itertools
import random

import numpy as np
import pytest
from hypothesis import given

import oracles
from conftest import chain_poset, posets
from fixlat.dataflow import SignStateLattice, Sign
from fixlat.errors import CycleDetected, NotReflexive, NotTransitive, SizeCap, UnknownElement
from fixlat.lab.instances import labeled_posets
from fixlat.order import (
    FULL,
    PosetLattice,
    build_poset,
    classify_poset,
    enumerate_chains,
    glb,
    lattice_law_violations,
    longest_ascending,
    lub,
    upper_bounds,
)


def names(p, xs):
    return {p.names[x] for x in xs}


def test_two_element_chain():
    p = build_poset(["0", "1"], [("0", "1")])
    assert p.le("0", "1") and not p.le("1", "0")
    assert p.covers == {(0, 1)}


def test_diamond_covers(d4):
    assert {(d4.names[x], d4.names[y]) for x, y in d4.covers} == {("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")}
    assert d4.covers == oracles.covers(d4)


def test_cycle_rejected():
    with pytest.raises(CycleDetected):
        build_poset(["x", "y"], [("x", "y"), ("y", "x")])


def test_full_relation_checks():
    with pytest.raises(NotReflexive):
        build_poset(["x", "y"], [("x", "y")], FULL)
    with pytest.raises(NotTransitive):
        build_poset(["x", "y", "z"], [("x", "x"), ("y", "y"), ("z", "z"), ("x", "y"), ("y", "z")], FULL)
    p = build_poset(["x", "y"], [("x", "x"), ("y", "y"), ("x", "y")], FULL)
    assert p.le("x", "y")


def test_unknown_element_and_cap(d4):
    with pytest.raises(UnknownElement):
        build_poset(["x"], [("x", "nope")])
    with pytest.raises(UnknownElement):
        lub(d4, ["nope"])
    with pytest.raises(UnknownElement):
        d4.id(17)
    with pytest.raises(SizeCap):
        build_poset([str(i) for i in range(5)], [], cap=4)
    with pytest.raises(ValueError):
        build_poset(["x", "x"], [])


def test_lub_glb_examples(d4, a2):
    c3 = chain_poset(3)
    assert d4.name(lub(d4, ["a", "b"])) == "top"
    assert c3.name(lub(c3, ["1"])) == "1"
    assert lub(a2, ["a", "b"]) is None
    assert d4.name(glb(d4, ["a", "b"])) == "bot"
    assert c3.name(glb(c3, ["0", "1", "2"])) == "0"
    assert glb(a2, ["a", "b"]) is None


def test_lub_of_empty_set(d4, a2):
    assert d4.name(lub(d4, [])) == "bot"
    assert lub(a2, []) is None
    assert d4.name(glb(d4, [])) == "top"


def test_classification_examples(d4, v3):
    c = classify_poset(d4)
    assert c.is_lattice and c.is_complete_lattice and not c.is_well_ordered
    c = classify_poset(chain_poset(3))
    assert all(
        [c.is_lattice, c.is_complete_lattice, c.is_complete_semilattice, c.is_chain_complete,
         c.is_strictly_inductive, c.is_well_ordered, c.has_bottom, c.has_top]
    )
    c = classify_poset(v3)
    assert not c.is_lattice and c.is_complete_semilattice and not c.is_chain_complete
    assert c.decided_exhaustively


def test_classification_above_bound_is_pairwise():
    p = chain_poset(5)
    c = classify_poset(p, exhaustive_bound=3)
    assert not c.decided_exhaustively
    assert c == classify_poset(p).__class__(**{**c.__dict__})
    assert c.is_complete_lattice and c.is_well_ordered


def test_chain_examples(d4, a2):
    chains = list(enumerate_chains(d4, 2))
    assert len(chains) == 7
    assert {frozenset(names(d4, c)) for c in chains} == {
        frozenset(s) for s in [
            {"bot", "a"}, {"bot", "b"}, {"a", "top"}, {"b", "top"}, {"bot", "top"},
            {"bot", "a", "top"}, {"bot", "b", "top"},
        ]
    }
    assert list(enumerate_chains(a2, 2)) == []
    c2 = chain_poset(2)
    assert sorted(map(sorted, enumerate_chains(c2, 0))) == [[], [0], [0, 1], [1]]
    with pytest.raises(ValueError):
        list(enumerate_chains(d4, -1))


@pytest.mark.parametrize("n,count", [(1, 1), (2, 3), (3, 19), (4, 219)])
def test_labeled_poset_counts(n, count):
    ups = {p.up for p in labeled_posets(n)}
    assert len(ups) == count


@given(posets(max_size=6))
def test_lub_glb_match_oracle(p):
    for s in oracles.subsets(p.elements):
        assert lub(p, s) == oracles.lub(p, s)
        assert glb(p, s) == oracles.glb(p, s)


@given(posets(max_size=6))
def test_lub_is_least_upper_bound(p):
    for s in oracles.subsets(p.elements, 1):
        u = lub(p, s)
        ub = upper_bounds(p, s)
        if u is not None:
            assert u in ub and all(p.le(u, v) for v in ub)


@given(posets(max_size=7))
def test_duality(p):
    q = p.dual()
    for s in itertools.combinations(p.elements, 2):
        assert lub(p, s) == glb(q, s)
        assert glb(p, s) == lub(q, s)


@given(posets(max_size=8))
def test_covers_regenerate_order(p):
    assert p.covers == oracles.covers(p)
    rebuilt = build_poset(list(p.names), [(p.names[x], p.names[y]) for x, y in p.covers])
    assert np.array_equal(rebuilt.leq, p.leq)


@given(posets(max_size=6))
def test_chains_exactly_once(p):
    chains = list(enumerate_chains(p))
    assert len(chains) == len(set(chains))
    assert set(chains) == {frozenset(s) for s in oracles.subsets(p.elements) if oracles.is_chain(p, s)}


@given(posets(max_size=6))
def test_classification_against_oracle(p):
    c = classify_poset(p)
    subsets = list(oracles.subsets(p.elements))
    nonempty = [s for s in subsets if s]
    chains = [s for s in subsets if oracles.is_chain(p, s)]
    assert c.is_strictly_inductive
    assert c.is_complete_lattice == all(oracles.lub(p, s) is not None and oracles.glb(p, s) is not None for s in subsets)
    assert c.is_complete_semilattice == all(oracles.lub(p, s) is not None for s in nonempty)
    assert c.is_chain_complete == all(oracles.lub(p, s) is not None for s in chains)
    assert c.is_lattice == all(
        oracles.lub(p, s) is not None and oracles.glb(p, s) is not None for s in itertools.combinations(p.elements, 2)
    )
    assert c.is_well_ordered == oracles.is_chain(p, p.elements)
    assert c.has_bottom == (oracles.least(p, list(p.elements)) is not None)
    assert c.has_top == (oracles.greatest(p, list(p.elements)) is not None)
    # implications between the flags
    assert not c.is_complete_lattice or c.is_complete_semilattice
    assert not c.is_complete_semilattice or c.has_top
    assert not c.is_chain_complete or c.has_bottom
    assert not c.is_well_ordered or c.is_chain_complete


@given(posets(max_size=9))
def test_pairwise_classification_agrees(p):
    a, b = classify_poset(p), classify_poset(p, exhaustive_bound=0)
    assert (a.is_lattice, a.is_complete_lattice, a.is_well_ordered) == (b.is_lattice, b.is_complete_lattice, b.is_well_ordered)


def test_poset_lattice_laws(d4):
    lat = PosetLattice(d4)
    triples = list(itertools.product(d4.elements, repeat=3))
    assert lattice_law_violations(lat, triples) == []
    assert longest_ascending(lat, list(d4.elements)) <= lat.height


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_sign_state_lattice_laws(seed):
    rnd = random.Random(seed)
    lat = SignStateLattice(3, 2)
    signs = list(Sign)

    def sample():
        return tuple(tuple(rnd.choice(signs) for _ in range(2)) for _ in range(3))

    triples = [(sample(), sample(), sample()) for _ in range(1000)]
    assert lattice_law_violations(lat, triples) == []
    assert longest_ascending(lat, [x for t in triples[:150] for x in t]) <= lat.height


def test_law_checker_reports_broken_join():
    class Broken(PosetLattice):
        def join(self, x, y):
            return x

    lat = Broken(chain_poset(2))
    laws = {law for law, _ in lattice_law_violations(lat, [(0, 1, 0)])}
    assert "commutative" in laws
