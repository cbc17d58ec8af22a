"""Self-maps of a finite poset and the condition classes used by the fixpoint theorems."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import UnknownElement
from .order import FinitePoset, bits


class Endomap:
    """A total map f : X -> X stored as a tuple indexed by element id."""

    def __init__(self, poset: FinitePoset, mapping: Sequence[int] | Mapping):
        if isinstance(mapping, Mapping):
            table = [None] * len(poset)
            for k, v in mapping.items():
                table[poset.id(k)] = poset.id(v)
            missing = [poset.names[i] for i, v in enumerate(table) if v is None]
            if missing:
                raise UnknownElement(f"map is undefined on {missing[0]!r}")
        else:
            if len(mapping) != len(poset):
                raise ValueError(f"map has {len(mapping)} entries for {len(poset)} elements")
            table = [poset.id(v) for v in mapping]
        self.poset = poset
        self.table = tuple(table)

    @classmethod
    def identity(cls, poset):
        return cls(poset, range(len(poset)))

    @classmethod
    def constant(cls, poset, value):
        return cls(poset, [poset.id(value)] * len(poset))

    def __call__(self, x) -> int:
        return self.table[self.poset.id(x)]

    def __eq__(self, other):
        if not isinstance(other, Endomap):
            return NotImplemented
        return self.poset == other.poset and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        names = self.poset.names
        return "Endomap({" + ", ".join(f"{names[i]}: {names[v]}" for i, v in enumerate(self.table)) + "})"

    def as_names(self) -> dict[str, str]:
        names = self.poset.names
        return {names[i]: names[v] for i, v in enumerate(self.table)}


@dataclass(frozen=True)
class Check:
    """Outcome of a quantified check; ``witness`` is set only on failure."""

    ok: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class MapClassification:
    monotone: bool
    strictly_monotone: bool
    extensive: bool
    strictly_extensive: bool
    p2: bool
    p2_prime: bool
    p1_at: bool | None


def _domain_mask(p: FinitePoset, domain) -> int:
    return p.full_mask if domain is None else p.mask(domain)


def monotone_on(f: Endomap, s: Iterable) -> Check:
    """Is f monotone on ``s``?  The first violating pair (x, y) is the witness."""
    p = f.poset
    m = p.mask(s)
    t = f.table
    for x in bits(m):
        for y in bits(m & p.up[x]):
            if not p.up[t[x]] >> t[y] & 1:
                return Check(False, (x, y))
    return Check(True)


def p2_check(f: Endomap, domain=None) -> Check:
    """f(x) <= f(y) whenever x <= f(x) <= y, for x, y in ``domain``."""
    p, t = f.poset, f.table
    dom = _domain_mask(p, domain)
    for x in bits(dom):
        fx = t[x]
        if not p.up[x] >> fx & 1:
            continue
        for y in bits(dom & p.up[fx]):
            if not p.up[fx] >> t[y] & 1:
                return Check(False, (x, y))
    return Check(True)


def p2_prime_check(f: Endomap, domain=None, gap_domain=None) -> Check:
    """f(x) <= f(y) whenever x < f(x) <= y and no z lies strictly between x and f(x).

    ``domain`` restricts x and y; ``gap_domain`` restricts where the
    in-between z is looked for.  With both left as None this is the plain
    covering-pair test over the whole poset.
    """
    p, t = f.poset, f.table
    dom = _domain_mask(p, domain)
    gaps = _domain_mask(p, gap_domain)
    for x in bits(dom):
        fx = t[x]
        if fx == x or not p.up[x] >> fx & 1:
            continue
        if gap_domain is None:
            if (x, fx) not in p.covers:
                continue
        elif p.strictly_between(x, fx) & gaps:
            continue
        for y in bits(dom & p.up[fx]):
            if not p.up[fx] >> t[y] & 1:
                return Check(False, (x, y))
    return Check(True)


def classify_map(f: Endomap, a0=None, domain=None) -> MapClassification:
    """Decide every condition class by exhaustive quantification.

    ``domain`` restricts the P2 and P2' quantifiers to a subset (used for the
    "for all x and y in A" form); the other flags always range over X.
    """
    p, t = f.poset, f.table
    n = len(p)
    monotone = strictly = True
    for x in range(n):
        for y in bits(p.up[x]):
            if not p.up[t[x]] >> t[y] & 1:
                monotone = strictly = False
                break
            if x != y and t[x] == t[y]:
                strictly = False
        if not monotone:
            break
    extensive = all(p.up[x] >> t[x] & 1 for x in range(n))
    strictly_extensive = all(p.up[x] >> t[x] & 1 and t[x] != x for x in range(n))
    p1_at = None
    if a0 is not None:
        a = p.id(a0)
        p1_at = bool(p.up[a] >> t[a] & 1)
    return MapClassification(
        monotone=monotone,
        strictly_monotone=strictly,
        extensive=extensive,
        strictly_extensive=strictly_extensive,
        p2=p2_check(f, domain).ok,
        p2_prime=p2_prime_check(f, domain).ok,
        p1_at=p1_at,
    )


@dataclass(frozen=True)
class FixpointSets:
    pre: frozenset[int]
    post: frozenset[int]
    fix: frozenset[int]

    def __iter__(self):
        return iter((self.pre, self.post, self.fix))


def fixpoint_sets(f: Endomap) -> FixpointSets:
    """Pre-fixpoints (x <= f(x)), post-fixpoints (x >= f(x)) and fixpoints."""
    p, t = f.poset, f.table
    pre = frozenset(x for x in p.elements if p.up[x] >> t[x] & 1)
    post = frozenset(x for x in p.elements if p.down[x] >> t[x] & 1)
    return FixpointSets(pre, post, pre & post)
