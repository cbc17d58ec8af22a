"""The canonical sets A (iterates), N (closure) and W (lubs of a0-chains).

On a finite poset every a0-chain is a prefix of the orbit
a0 < f(a0) < f(f(a0)) < ...: each non-greatest member's image must be its
immediate successor in the chain.  W is therefore the longest strictly
ascending orbit prefix, found in linear time.
"""
from __future__ import annotations

from dataclasses import dataclass

from .endomap import Check, Endomap
from .engine import Converged, DivergentPeriodic, IterationOutcome, iterate
from .order import FinitePoset, bits, is_chain_mask, lub_mask


def is_lub_closed_mask(p: FinitePoset, mask: int) -> Check:
    """Every non-empty subset of ``mask`` has a lub inside ``mask``.

    Checking pairs suffices: lub(P + {x}) = lub{lub(P), x}.
    """
    members = list(bits(mask))
    for i, x in enumerate(members):
        for y in members[i + 1:]:
            u = lub_mask(p, 1 << x | 1 << y)
            if u is None or not mask >> u & 1:
                return Check(False, (x, y))
    return Check(True)


def is_a0_chain(p: FinitePoset, f: Endomap, a0, c) -> Check:
    """Check the a0-chain clauses in order; the witness is ``(clause, detail)``."""
    a0 = p.id(a0)
    mask = p.mask(c)
    if not is_chain_mask(p, mask):
        bad = next((x, y) for x in bits(mask) for y in bits(mask) if not p.comparable(x, y))
        return Check(False, ("well_ordered", bad))
    if not mask >> a0 & 1 or p.up[a0] & mask != mask:
        return Check(False, ("least_a0", a0))
    closed = is_lub_closed_mask(p, mask)
    if not closed:
        return Check(False, ("lub_closed", closed.witness))
    ordered = sorted(bits(mask), key=lambda x: bin(p.down[x] & mask).count("1"))
    for z in ordered[:-1]:
        fz = f.table[z]
        if not mask >> fz & 1:
            return Check(False, ("image_in_chain", (z, fz)))
        if fz == z or not p.le(z, fz):
            return Check(False, ("strictly_ascending", (z, fz)))
        gap = p.strictly_between(z, fz) & mask
        if gap:
            return Check(False, ("no_gap", (z, next(bits(gap)), fz)))
    return Check(True)


def w_chain(p: FinitePoset, f: Endomap, a0) -> list[int]:
    """W in increasing order: the orbit of a0 while it strictly ascends."""
    x = p.id(a0)
    chain = [x]
    while True:
        fx = f.table[x]
        if fx == x or not p.le(x, fx):
            return chain
        chain.append(fx)
        x = fx


def compute_W(p: FinitePoset, f: Endomap, a0) -> frozenset[int]:
    return frozenset(w_chain(p, f, a0))


def compute_N_mask(p: FinitePoset, f: Endomap, a0: int) -> int:
    t = f.table
    z = 1 << a0
    while True:
        new = z
        for x in bits(z):
            new |= 1 << t[x]
        # u is the lub of some non-empty P within z iff u = lub(z & down(u))
        for u in bits(p.full_mask & ~new):
            below = z & p.down[u]
            if below and lub_mask(p, below) == u:
                new |= 1 << u
        if new == z:
            return z
        z = new


def compute_N(p: FinitePoset, f: Endomap, a0) -> frozenset[int]:
    """Smallest set containing a0, closed under f and under every lub that exists.

    Use :func:`is_lub_closed_mask` on the result to see whether the stricter
    reading (every non-empty subset *has* a lub) also holds.
    """
    return frozenset(bits(compute_N_mask(p, f, p.id(a0))))


@dataclass(frozen=True)
class CanonicalSets:
    """A, N, W with their inclusions.  A-related flags are None when A is undefined."""

    A: frozenset | None
    N: frozenset
    W: frozenset
    a_sub_n: bool | None
    w_sub_n: bool
    n_sub_w: bool
    n_sub_a: bool | None
    all_equal: bool | None
    n_strictly_closed: bool
    outcome: IterationOutcome

    def flags(self) -> dict[str, bool | None]:
        return {
            "A_sub_N": self.a_sub_n,
            "W_sub_N": self.w_sub_n,
            "N_sub_W": self.n_sub_w,
            "N_sub_A": self.n_sub_a,
            "A_eq_N_eq_W": self.all_equal,
            "N_strictly_lub_closed": self.n_strictly_closed,
        }


def a_is_defined(outcome: IterationOutcome) -> bool:
    return isinstance(outcome, (Converged, DivergentPeriodic))


def compare_ANW(p: FinitePoset, f: Endomap, a0, budget: int | None = None) -> CanonicalSets:
    a0 = p.id(a0)
    outcome, trace = iterate(p, f, a0, budget)
    n_mask = compute_N_mask(p, f, a0)
    N = frozenset(bits(n_mask))
    W = compute_W(p, f, a0)
    A = trace.distinct_values if a_is_defined(outcome) else None
    return CanonicalSets(
        A=A,
        N=N,
        W=W,
        a_sub_n=None if A is None else A <= N,
        w_sub_n=W <= N,
        n_sub_w=N <= W,
        n_sub_a=None if A is None else N <= A,
        all_equal=None if A is None else A == N == W,
        n_strictly_closed=is_lub_closed_mask(p, n_mask).ok,
        outcome=outcome,
    )


@dataclass(frozen=True)
class WStepReport:
    conditional: Check  # x in W and x <= f(x) implies f(x) in W
    f_closed: Check  # x in W implies f(x) in W


def w_step_closure(p: FinitePoset, f: Endomap, a0) -> WStepReport:
    W = compute_W(p, f, a0)
    cond = Check(True)
    closed = Check(True)
    for x in sorted(W):
        fx = f.table[x]
        if fx not in W:
            if closed:
                closed = Check(False, (x, fx))
            if cond and p.le(x, fx):
                cond = Check(False, (x, fx))
    return WStepReport(cond, closed)
