import pytest

from fixlat.errors import UnknownHypothesis
from fixlat.formats import instance_from_doc, loads_json
from fixlat.lab.instances import RANDOM_ORDER
from fixlat.lab.search import DROP, FULL, search


def clause(name):
    return lambda v: v.witness["clause"] == name


def test_tarski_drop_finds_antichain_swap():
    r = search("TARSKI_CL", drop="complete_lattice", exhaustive_max_size=4, k=1, accept=clause("fix_nonempty"))
    assert r.mode == DROP and len(r.witnesses) == 1
    inst = r.witnesses[0].instance
    assert len(inst.poset) == 2 and inst.poset.covers == frozenset()
    assert inst.f.table == (1, 0)


def test_mon_ext_drop_finds_non_total_witness():
    r = search("MON_EXT", drop="well_ordered", exhaustive_max_size=4, k=3)
    assert len(r.witnesses) == 3
    for w in r.witnesses:
        p, f = w.instance.poset, w.instance.f
        assert not p.classification.is_well_ordered
        assert any(not p.le(x, f(x)) for x in p.elements)


def test_nwa_drop_p2_prime_finds_n_ne_w():
    r = search("NWA_EQ", drop="p2_prime", exhaustive_max_size=5, k=1, accept=clause("N_eq_W"))
    assert r.witnesses and r.witnesses[0].verdict.witness["N"] != r.witnesses[0].verdict.witness["W"]


def test_full_mode_stops_at_first_hit():
    r = search("NWA_EQ", seeds=range(200), sizes=(6,))
    assert r.mode == FULL
    if r.witnesses:
        assert r.refuted and len(r.witnesses) == 1


def test_full_mode_clean_theorem():
    r = search("LUBW_FIX", seeds=range(100), sizes=(5, 6), shapes=(RANDOM_ORDER,))
    assert not r.witnesses and r.checked == 200 and r.hypotheses_held > 0


def test_unknown_drop():
    with pytest.raises(UnknownHypothesis):
        search("TARSKI_CL", drop="bogus", seeds=range(3))


def test_bundle_round_trip():
    r = search("MON_EXT", drop="well_ordered", seeds=range(500), sizes=(4,), k=1)
    assert r.witnesses
    text = r.bundle()
    assert text.startswith("# fixlat-repro seed=")
    inst = instance_from_doc(loads_json(text))
    w = r.witnesses[0].instance
    assert inst.poset == w.poset and inst.f.table == w.f.table and inst.a0 == w.a0


def test_search_is_deterministic():
    a = search("NWA_EQ", drop="p2_prime", seeds=range(50), sizes=(5,), k=5)
    b = search("NWA_EQ", drop="p2_prime", seeds=range(50), sizes=(5,), k=5)
    assert [w.provenance for w in a.witnesses] == [w.provenance for w in b.witnesses]
