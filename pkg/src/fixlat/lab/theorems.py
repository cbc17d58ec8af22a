"""Each fixpoint theorem as a pair (hypotheses, conclusion) checkable on one instance.

A verdict is PASS when hypotheses and conclusion hold, VACUOUS when some
hypothesis fails, and REFUTED when the hypotheses hold but the conclusion
does not.  Hypotheses can be dropped by name to search for instances showing
that they are needed.

"Least fixpoint" conclusions are always compared with a brute-force scan of
the map's table, never with the iteration engine's answer.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable

from ..chains import compute_N_mask, is_a0_chain, w_chain
from ..endomap import Check, Endomap, classify_map, fixpoint_sets, monotone_on, p2_check, p2_prime_check
from ..engine import Converged, iterate, sequence_is_monotone
from ..errors import MissingG, UnknownHypothesis, UnsupportedCarrier
from ..order import FinitePoset, bits, chain_masks, glb_mask, lub_mask
from .instances import Instance


class TheoremId(str, Enum):
    MON_EXT = "MON_EXT"
    A_MONOTONE = "A_MONOTONE"
    HARTOGS_STAB = "HARTOGS_STAB"
    ABIAN_W = "ABIAN_W"
    LUBW_FIX = "LUBW_FIX"
    P2P_MONO_W = "P2P_MONO_W"
    W_SUB_N = "W_SUB_N"
    N_SUB_W = "N_SUB_W"
    A_SUB_N = "A_SUB_N"
    N_SUB_A = "N_SUB_A"
    NWA_EQ = "NWA_EQ"
    BOURBAKI_EXT = "BOURBAKI_EXT"
    KURATOWSKI_LEAST = "KURATOWSKI_LEAST"
    TARSKI_CL = "TARSKI_CL"
    KLEENE_OMEGA = "KLEENE_OMEGA"
    WARD_SEMI = "WARD_SEMI"
    MARKOWSKY_CC = "MARKOWSKY_CC"
    COUSOT_BOUND = "COUSOT_BOUND"
    DEVIDE_JOIN = "DEVIDE_JOIN"
    JOIN_REMARK = "JOIN_REMARK"
    SALINAS_P2 = "SALINAS_P2"
    SALINAS_MUB = "SALINAS_MUB"
    STRICT_ON_W = "STRICT_ON_W"

    def __str__(self):
        return self.value


PASS, VACUOUS, REFUTED = "PASS", "VACUOUS", "REFUTED"


@dataclass(frozen=True)
class Verdict:
    theorem: TheoremId
    hypotheses_hold: bool
    # None when the hypotheses failed and the conclusion was not evaluated
    conclusion_holds: bool | None
    witness: dict | None = None
    hypotheses: dict = field(default_factory=dict)
    dropped: tuple = ()

    @property
    def status(self) -> str:
        if not self.hypotheses_hold:
            return VACUOUS
        return PASS if self.conclusion_holds else REFUTED


# -- oracles ------------------------------------------------------------------

def least_fixpoint_oracle(f: Endomap, above: int | None = None) -> int | None:
    """Least element of {x | f(x) = x, x >= above} by direct scan, or None."""
    p = f.poset
    cands = [x for x in p.elements if f.table[x] == x and (above is None or p.le(above, x))]
    for x in cands:
        if all(p.le(x, y) for y in cands):
            return x
    return None


def join_map(p: FinitePoset, g: Endomap, left: Callable[[int], int]) -> Endomap:
    """x -> left(x) v g(x); raises UnsupportedCarrier if a join is missing."""
    table = []
    for x in p.elements:
        j = lub_mask(p, 1 << left(x) | 1 << g.table[x])
        if j is None:
            raise UnsupportedCarrier(
                f"join of {p.names[left(x)]!r} and {p.names[g.table[x]]!r} does not exist"
            )
        table.append(j)
    return Endomap(p, table)


# -- per-instance facts, computed lazily and shared across theorems -----------

class Facts:
    def __init__(self, poset: FinitePoset, f: Endomap, a0: int, budget: int | None = None):
        self.p = poset
        self.f = f
        self.a0 = a0
        self.budget = budget

    @cached_property
    def pcls(self):
        return self.p.classification

    @cached_property
    def mcls(self):
        return classify_map(self.f, self.a0)

    @cached_property
    def sets(self):
        return fixpoint_sets(self.f)

    @cached_property
    def run(self):
        return iterate(self.p, self.f, self.a0, self.budget)

    @property
    def outcome(self):
        return self.run[0]

    @property
    def trace(self):
        return self.run[1]

    @cached_property
    def seq_monotone(self) -> Check:
        return sequence_is_monotone(self.trace, self.p)

    @cached_property
    def a_defined(self) -> bool:
        return self.outcome.kind in ("CONVERGED", "DIVERGENT_PERIODIC")

    @cached_property
    def A(self) -> frozenset:
        return self.trace.distinct_values

    @cached_property
    def W_list(self) -> list[int]:
        return w_chain(self.p, self.f, self.a0)

    @cached_property
    def W(self) -> frozenset:
        return frozenset(self.W_list)

    @cached_property
    def N_mask(self) -> int:
        return compute_N_mask(self.p, self.f, self.a0)

    @cached_property
    def N(self) -> frozenset:
        return frozenset(bits(self.N_mask))

    @cached_property
    def mono_W(self) -> Check:
        return monotone_on(self.f, self.W)

    @cached_property
    def p2_prime_W(self) -> Check:
        return p2_prime_check(self.f, gap_domain=self.W)

    @cached_property
    def least_fix_above_a0(self):
        return least_fixpoint_oracle(self.f, self.a0)

    @cached_property
    def least_fix(self):
        return least_fixpoint_oracle(self.f)

    @property
    def p1(self) -> bool:
        return self.mcls.p1_at


# -- theorem table ------------------------------------------------------------

@dataclass(frozen=True)
class Theorem:
    id: TheoremId
    hypotheses: dict  # name -> Facts -> bool
    conclusion: Callable  # Facts -> Check (witness is a dict)
    needs_g: bool = False


def _ok():
    return Check(True)


def _fail(clause, **detail):
    return Check(False, {"clause": clause, **detail})


def _n(facts, x):
    return facts.p.names[x]


def _ns(facts, xs):
    return sorted(facts.p.names[x] for x in xs)


def _converged_value(facts):
    out = facts.outcome
    return out.value if isinstance(out, Converged) else None


def _has_maximal(p, xs) -> bool:
    return any(not any(p.lt(x, y) for y in xs) for x in xs)


def _has_minimal(p, xs) -> bool:
    return any(not any(p.lt(y, x) for y in xs) for x in xs)


def _subposet_flag(p, xs, flag):
    if not xs:
        return False
    return getattr(p.subposet(xs).classification, flag)


def _mon_ext(F):
    for x in F.p.elements:
        if not F.p.le(x, F.f.table[x]):
            return _fail("extensive", x=_n(F, x), fx=_n(F, F.f.table[x]))
    return _ok()


def _a_monotone(F):
    c = F.seq_monotone
    if not c:
        k, l = c.witness
        return _fail("sequence_monotone", k=str(k), l=str(l))
    return _ok()


def _hartogs(F):
    if not isinstance(F.outcome, Converged):
        return _fail("converged", outcome=F.outcome.kind)
    return _ok()


def _abian(F):
    p, W = F.p, F.W
    xi = lub_mask(p, p.mask(W))
    if xi is None:
        return _fail("lub_W_exists")
    c = is_a0_chain(p, F.f, F.a0, W)
    if not c:
        clause, detail = c.witness
        return _fail("W_is_a0_chain", failed=clause)
    if p.lt(xi, F.f.table[xi]):
        return _fail("xi_not_below_f_xi", xi=_n(F, xi))
    for x in F.W_list:
        below = [y for y in W if p.le(y, x)]
        if not is_a0_chain(p, F.f, F.a0, below) or lub_mask(p, p.mask(below)) != x:
            return _fail("unique_chain", x=_n(F, x))
    return _ok()


def _lubw_fix(F):
    xi = lub_mask(F.p, F.p.mask(F.W))
    if xi is None:
        return _fail("lub_W_exists")
    if F.f.table[xi] != xi:
        return _fail("lub_W_fixed", xi=_n(F, xi), fxi=_n(F, F.f.table[xi]))
    return _ok()


def _p2p_mono_w(F):
    c = F.mono_W
    if not c:
        x, y = c.witness
        return _fail("monotone_on_W", x=_n(F, x), y=_n(F, y))
    return _ok()


def _subset(name, small, big, F):
    extra = small - big
    if extra:
        return _fail(name, missing=_ns(F, extra))
    return _ok()


def _n_sub_a(F):
    if not F.a_defined:
        return _fail("A_defined", outcome=F.outcome.kind)
    return _subset("N_sub_A", F.N, F.A, F)


def _nwa_eq(F):
    if F.N != F.W:
        return _fail("N_eq_W", N=_ns(F, F.N), W=_ns(F, F.W))
    value = _converged_value(F)
    if value is None:
        return _fail("converged", outcome=F.outcome.kind)
    if F.A != F.N:
        return _fail("A_eq_N", A=_ns(F, F.A), N=_ns(F, F.N))
    if lub_mask(F.p, F.N_mask) != value:
        return _fail("value_is_lub_N", value=_n(F, value))
    least = F.least_fix_above_a0
    if least != value:
        return _fail("least_fixpoint_above_a0", value=_n(F, value),
                     least=None if least is None else _n(F, least),
                     fixpoints_above_a0=_ns(F, [x for x in F.sets.fix if F.p.le(F.a0, x)]))
    return _ok()


def _bourbaki(F):
    value = _converged_value(F)
    if value is None:
        return _fail("converged", outcome=F.outcome.kind)
    if F.f.table[value] != value:
        return _fail("value_fixed", value=_n(F, value))
    top = lub_mask(F.p, F.N_mask)
    if top != value:
        return _fail("lub_N_is_value", value=_n(F, value))
    if F.N != F.A:
        return _fail("N_eq_A", N=_ns(F, F.N), A=_ns(F, F.A))
    return _ok()


def _kuratowski(F):
    top = lub_mask(F.p, F.N_mask)
    least = F.least_fix_above_a0
    if top is None or top != least:
        return _fail("lub_N_least_fixpoint", lub_N=None if top is None else _n(F, top),
                     least=None if least is None else _n(F, least))
    return _ok()


def _tarski(F):
    p, fix, post = F.p, F.sets.fix, F.sets.post
    if not fix:
        return _fail("fix_nonempty")
    if not _subposet_flag(p, fix, "is_complete_lattice"):
        return _fail("fix_complete_lattice", fix=_ns(F, fix))
    g = glb_mask(p, p.mask(post))
    if g is None or F.f.table[g] != g or g != F.least_fix:
        return _fail("glb_post_is_least_fixpoint", glb_post=None if g is None else _n(F, g),
                     least=None if F.least_fix is None else _n(F, F.least_fix))
    return _ok()


def _kleene(F):
    out = F.outcome
    if not isinstance(out, Converged):
        return _fail("converged", outcome=out.kind)
    if out.at.limit_blocks or F.trace.limit_steps:
        return _fail("no_limit_step", at=str(out.at))
    if out.at.finite_offset > len(F.p) - 1:
        return _fail("within_height", at=str(out.at))
    return _ok()


def _ward(F):
    fix = F.sets.fix
    if not fix:
        return _fail("fix_nonempty")
    if not _subposet_flag(F.p, fix, "is_complete_semilattice"):
        return _fail("fix_complete_semilattice", fix=_ns(F, fix))
    return _ok()


def _markowsky(F):
    fix = F.sets.fix
    if not fix or not _subposet_flag(F.p, fix, "is_chain_complete"):
        return _fail("fix_chain_complete", fix=_ns(F, fix))
    return _ok()


def _cousot(F):
    p, a0 = F.p, F.a0
    bounds = [y for y in F.sets.post if p.le(a0, y)]
    for k, v in F.trace.items():
        for y in bounds:
            if not p.le(v, y):
                return _fail("iterates_below_post_fixpoints", k=str(k), a_k=_n(F, v), y=_n(F, y))
    for name, xs in (("pre", F.sets.pre), ("post", F.sets.post)):
        if not _subposet_flag(p, xs, "is_complete_lattice"):
            return _fail(f"{name}_complete_lattice", members=_ns(F, xs))
    if F.p1:
        value = _converged_value(F)
        if value is None or value != F.least_fix_above_a0:
            return _fail("converges_to_least_fixpoint_above_a0",
                         outcome=F.outcome.kind, value=None if value is None else _n(F, value))
    return _ok()


def _fix_above(f: Endomap, a0: int) -> frozenset:
    p = f.poset
    return frozenset(x for x in p.elements if f.table[x] == x and p.le(a0, x))


def _same_iterates(F, G):
    if F.outcome != G.outcome or F.trace != G.trace:
        return _fail("iterates_equal", f_outcome=F.outcome.kind, g_outcome=G.outcome.kind)
    return _ok()


def _derived(G, combine):
    p = G.p
    if combine == "a0":
        return join_map(p, G.f, lambda x: G.a0)
    return join_map(p, G.f, lambda x: x)


def _devide(G):
    h = _derived(G, "a0")
    H = Facts(G.p, h, G.a0, G.budget)
    if not isinstance(H.outcome, Converged):
        return _fail("join_form_converges", outcome=H.outcome.kind)
    if G.p.le(G.a0, G.f.table[G.a0]):
        if _fix_above(h, G.a0) != _fix_above(G.f, G.a0):
            return _fail("same_fixpoints_above_a0", f=_ns(G, _fix_above(h, G.a0)), g=_ns(G, _fix_above(G.f, G.a0)))
        same = _same_iterates(H, G)
        if not same:
            return same
    return _ok()


def _join_remark(G):
    p, g = G.p, G.f
    h = _derived(G, "x")
    cls = classify_map(h)
    if not cls.monotone:
        return _fail("join_form_monotone")
    if not cls.extensive:
        return _fail("join_form_extensive")
    gs, hs = G.sets, fixpoint_sets(h)
    for x in sorted(gs.pre):
        if h.table[x] != g.table[x]:
            return _fail("equal_on_pre_g", x=_n(G, x))
    if not gs.fix <= hs.fix:
        return _fail("fix_g_sub_fix_f", missing=_ns(G, gs.fix - hs.fix))
    if hs.fix != gs.post:
        return _fail("fix_f_eq_post_g", fix_f=_ns(G, hs.fix), post_g=_ns(G, gs.post))
    lf, lg = least_fixpoint_oracle(h), least_fixpoint_oracle(g)
    if lf is None or lf != lg:
        return _fail("same_least_fixpoint", f=None if lf is None else _n(G, lf), g=None if lg is None else _n(G, lg))
    if p.le(G.a0, g.table[G.a0]):
        same = _same_iterates(Facts(p, h, G.a0, G.budget), G)
        if not same:
            return same
    return _ok()


def _salinas_p2(F):
    value = _converged_value(F)
    if value is None or F.f.table[value] != value:
        return _fail("converges_to_fixpoint", outcome=F.outcome.kind)
    if not _has_maximal(F.p, F.sets.fix):
        return _fail("fix_has_maximal")
    return _ok()


def _salinas_mub(F):
    if not F.sets.fix:
        return _fail("fix_nonempty")
    return _ok()


def _strict_on_w(F):
    p, t = F.p, F.f.table
    V = F.W_list[:-1]
    for x in V:
        if not p.lt(x, t[x]):
            return _fail("strictly_extensive", x=_n(F, x))
    for x in V:
        for y in V:
            if p.lt(x, y) and not p.lt(t[x], t[y]):
                return _fail("strictly_monotone", x=_n(F, x), y=_n(F, y))
    return _ok()


def _minimal_upper_bounds(F) -> bool:
    p = F.p
    if len(p) > 12:
        return True  # finite: every non-empty chain has a maximum
    for c in chain_masks(p, 1):
        ub = p.full_mask
        for i in bits(c):
            ub &= p.up[i]
        if not _has_minimal(p, list(bits(ub))):
            return False
    return True


def _pair_glb(F) -> bool:
    p, t = F.p, F.f.table
    return all(glb_mask(p, 1 << x | 1 << t[x]) is not None for x in p.elements)


H_STRICTLY_INDUCTIVE = ("strictly_inductive", lambda F: F.pcls.is_strictly_inductive)
H_P1 = ("p1", lambda F: F.p1)
H_MONOTONE = ("monotone", lambda F: F.mcls.monotone)
H_COMPLETE_LATTICE = ("complete_lattice", lambda F: F.pcls.is_complete_lattice)
H_MONO_W = ("monotone_on_W", lambda F: F.mono_W.ok)
H_SEQ_MONO = ("sequence_monotone", lambda F: F.seq_monotone.ok)
H_EXTENSIVE = ("extensive", lambda F: F.mcls.extensive)
H_P2 = ("p2", lambda F: F.mcls.p2)
# P2': the in-between z is looked for among W (see p2_prime_check)
H_P2_PRIME = ("p2_prime", lambda F: F.p2_prime_W.ok)
H_G_MONOTONE = ("g_monotone", lambda F: F.mcls.monotone)


def _t(tid, hyps, concl, needs_g=False):
    return Theorem(tid, dict(hyps), concl, needs_g)


T = TheoremId
THEOREMS: dict[TheoremId, Theorem] = {
    t.id: t
    for t in [
        _t(T.MON_EXT, [("well_ordered", lambda F: F.pcls.is_well_ordered),
                       ("strictly_monotone", lambda F: F.mcls.strictly_monotone)], _mon_ext),
        _t(T.A_MONOTONE, [H_P1, ("p2_on_A", lambda F: p2_check(F.f, F.A).ok)], _a_monotone),
        _t(T.HARTOGS_STAB, [H_SEQ_MONO], _hartogs),
        _t(T.ABIAN_W, [], _abian),
        _t(T.LUBW_FIX, [H_STRICTLY_INDUCTIVE, H_P1, H_MONO_W], _lubw_fix),
        _t(T.P2P_MONO_W, [H_P2_PRIME], _p2p_mono_w),
        _t(T.W_SUB_N, [], lambda F: _subset("W_sub_N", F.W, F.N, F)),
        _t(T.N_SUB_W, [H_STRICTLY_INDUCTIVE, H_P1, H_MONO_W], lambda F: _subset("N_sub_W", F.N, F.W, F)),
        _t(T.A_SUB_N, [H_STRICTLY_INDUCTIVE, ("a_defined", lambda F: F.a_defined)],
           lambda F: _subset("A_sub_N", F.A, F.N, F)),
        _t(T.N_SUB_A, [H_SEQ_MONO], _n_sub_a),
        _t(T.NWA_EQ, [H_STRICTLY_INDUCTIVE, H_P1, H_P2_PRIME], _nwa_eq),
        _t(T.BOURBAKI_EXT, [H_STRICTLY_INDUCTIVE, H_EXTENSIVE], _bourbaki),
        _t(T.KURATOWSKI_LEAST, [H_STRICTLY_INDUCTIVE, H_EXTENSIVE, H_MONOTONE], _kuratowski),
        _t(T.TARSKI_CL, [H_COMPLETE_LATTICE, H_MONOTONE], _tarski),
        _t(T.KLEENE_OMEGA, [H_COMPLETE_LATTICE, H_MONOTONE,
                            ("a0_bottom", lambda F: F.p.bottom == F.a0)], _kleene),
        _t(T.WARD_SEMI, [("complete_semilattice", lambda F: F.pcls.is_complete_semilattice), H_MONOTONE], _ward),
        _t(T.MARKOWSKY_CC, [("chain_complete", lambda F: F.pcls.is_chain_complete), H_MONOTONE], _markowsky),
        _t(T.COUSOT_BOUND, [H_COMPLETE_LATTICE, H_MONOTONE], _cousot),
        _t(T.DEVIDE_JOIN, [H_COMPLETE_LATTICE, H_G_MONOTONE], _devide, needs_g=True),
        _t(T.JOIN_REMARK, [H_COMPLETE_LATTICE, H_G_MONOTONE], _join_remark, needs_g=True),
        _t(T.SALINAS_P2, [H_STRICTLY_INDUCTIVE, H_P1, H_P2], _salinas_p2),
        _t(T.SALINAS_MUB, [("minimal_upper_bounds", _minimal_upper_bounds), H_P1, H_P2,
                           ("pair_glb", _pair_glb)], _salinas_mub),
        _t(T.STRICT_ON_W, [], _strict_on_w),
    ]
}

assert set(THEOREMS) == set(TheoremId)

NOTES = {
    T.SALINAS_P2: "the maximal-fixpoint clause is immediate on finite instances",
    T.MARKOWSKY_CC: "chain-completeness of fix(f) reduces to a least fixpoint on finite instances",
    T.DEVIDE_JOIN: "checks the map x -> a0 v g(x) built from g; the instance's f is not used",
    T.JOIN_REMARK: "checks the map x -> x v g(x) built from g; the instance's f is not used",
}


def hypothesis_names(theorem) -> list[str]:
    return list(THEOREMS[TheoremId(theorem)].hypotheses)


def facts_for(theorem: Theorem, inst: Instance, budget=None, cache=None) -> Facts:
    """Facts about the map the theorem talks about (g for the join-form theorems)."""
    key = "g" if theorem.needs_g else "f"
    if cache is not None and key in cache:
        return cache[key]
    if theorem.needs_g:
        if inst.g is None:
            raise MissingG(f"{theorem.id} needs an auxiliary map g")
        facts = Facts(inst.poset, inst.g, inst.a0, budget)
    else:
        facts = Facts(inst.poset, inst.f, inst.a0, budget)
    if cache is not None:
        cache[key] = facts
    return facts


def verify(theorem, inst: Instance, budget: int | None = None, drop=(), _cache=None) -> Verdict:
    """Check one theorem on one instance.

    ``drop`` names hypotheses to ignore; an unknown name raises
    :class:`UnknownHypothesis`.
    """
    thm = THEOREMS[TheoremId(theorem)]
    drop = (drop,) if isinstance(drop, str) else tuple(drop)
    for name in drop:
        if name not in thm.hypotheses:
            raise UnknownHypothesis(
                f"{thm.id} has no hypothesis {name!r}; known: {', '.join(thm.hypotheses) or 'none'}"
            )
    facts = facts_for(thm, inst, budget, _cache)
    hyps = {name: bool(check(facts)) for name, check in thm.hypotheses.items() if name not in drop}
    if not all(hyps.values()):
        return Verdict(thm.id, False, None, None, hyps, drop)
    result = thm.conclusion(facts)
    return Verdict(thm.id, True, result.ok, result.witness, hyps, drop)


def verify_all(inst: Instance, budget: int | None = None) -> list[Verdict]:
    """Every theorem applicable to the instance (the join-form ones need ``g``)."""
    cache = {}
    return [
        verify(tid, inst, budget, _cache=cache)
        for tid, thm in THEOREMS.items()
        if not thm.needs_g or inst.g is not None
    ]
