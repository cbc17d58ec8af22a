"""Finite posets: order relation, lubs/glbs, chains and structural classification.

Elements are identified by their index in ``FinitePoset.names``.  Every
public function also accepts an element's display name wherever an id is
expected, so ``lub(p, ["a", "b"])`` and ``lub(p, [1, 2])`` are equivalent.

Internally subsets are handled as Python int bitmasks; ``up[i]`` is the mask
of elements ``>= i`` and ``down[i]`` the mask of elements ``<= i``.
"""
from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

import numpy as np

from .errors import CycleDetected, NotReflexive, NotTransitive, SizeCap, UnknownElement

DEFAULT_SIZE_CAP = 64
DEFAULT_EXHAUSTIVE_BOUND = 12

HASSE = "hasse"
FULL = "full"


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinitePoset:
    """An immutable finite partial order.

    Use :func:`build_poset` to construct one from user input; the constructor
    trusts that ``leq`` is already a partial order.
    """

    def __init__(self, names: Sequence[str], leq: np.ndarray):
        n = len(names)
        leq = np.array(leq, dtype=bool)
        assert leq.shape == (n, n)
        leq.flags.writeable = False
        self.names = tuple(names)
        self.leq = leq
        self._index = {name: i for i, name in enumerate(self.names)}
        self.up = tuple(int(sum(1 << j for j in range(n) if leq[i, j])) for i in range(n))
        self.down = tuple(int(sum(1 << j for j in range(n) if leq[j, i])) for i in range(n))
        self.full_mask = (1 << n) - 1
        lt = leq & ~np.eye(n, dtype=bool)
        between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
        cov = lt & ~between
        self.covers = frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(cov)))

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return f"FinitePoset({list(self.names)!r}, covers={sorted(self.covers)!r})"

    def __eq__(self, other):
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.names == other.names and self.up == other.up

    def __hash__(self):
        return hash((self.names, self.up))

    @property
    def elements(self) -> range:
        return range(len(self.names))

    def id(self, x) -> int:
        """Resolve an element id or display name to its index."""
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            if 0 <= x < len(self.names):
                return int(x)
            raise UnknownElement(f"element index {x} not in poset of size {len(self)}")
        if isinstance(x, str) and x in self._index:
            return self._index[x]
        raise UnknownElement(f"unknown element {x!r}")

    def name(self, x) -> str:
        return self.names[self.id(x)]

    def mask(self, xs: Iterable) -> int:
        m = 0
        for x in xs:
            m |= 1 << self.id(x)
        return m

    def members(self, mask: int) -> list[int]:
        return list(bits(mask))

    def le(self, x, y) -> bool:
        return bool(self.up[self.id(x)] >> self.id(y) & 1)

    def lt(self, x, y) -> bool:
        x, y = self.id(x), self.id(y)
        return x != y and bool(self.up[x] >> y & 1)

    def comparable(self, x, y) -> bool:
        return self.le(x, y) or self.le(y, x)

    def is_cover(self, x, y) -> bool:
        return (self.id(x), self.id(y)) in self.covers

    def strictly_between(self, x, y) -> int:
        """Mask of elements z with x < z < y."""
        x, y = self.id(x), self.id(y)
        return (self.up[x] & self.down[y]) & ~((1 << x) | (1 << y))

    @cached_property
    def bottom(self) -> int | None:
        return lub_mask(self, 0)

    @cached_property
    def top(self) -> int | None:
        return glb_mask(self, 0)

    def dual(self) -> "FinitePoset":
        """The same elements under the reversed order."""
        return FinitePoset(self.names, self.leq.T)

    def subposet(self, xs: Iterable) -> "FinitePoset":
        """Induced suborder on ``xs`` (kept in index order)."""
        idx = sorted({self.id(x) for x in xs})
        return FinitePoset([self.names[i] for i in idx], self.leq[np.ix_(idx, idx)])

    @cached_property
    def classification(self) -> "PosetClassification":
        return classify_poset(self)


def _closure(rel: np.ndarray) -> np.ndarray:
    rel = rel.copy()
    for k in range(rel.shape[0]):
        rel |= rel[:, k : k + 1] & rel[k : k + 1, :]
    return rel


def build_poset(
    elements: Sequence[str],
    relation: Iterable[tuple[str, str]],
    relation_kind: str = HASSE,
    cap: int = DEFAULT_SIZE_CAP,
) -> FinitePoset:
    """Build a poset from element names and order pairs ``(x, y)`` meaning x <= y.

    With ``relation_kind="hasse"`` the order is the reflexive-transitive
    closure of the pairs; with ``"full"`` the pairs must already form a
    partial order (reflexive pairs included).
    """
    names = [str(e) for e in elements]
    if not names:
        raise ValueError("a poset needs at least one element")
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise ValueError(f"duplicate element name {dup!r}")
    if len(names) > cap:
        raise SizeCap(f"{len(names)} elements exceeds the cap of {cap}")
    if relation_kind not in (HASSE, FULL):
        raise ValueError(f"relation_kind must be {HASSE!r} or {FULL!r}, got {relation_kind!r}")
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    rel = np.zeros((n, n), dtype=bool)
    for pair in relation:
        x, y = pair
        for e in (x, y):
            if e not in index:
                raise UnknownElement(f"relation mentions unknown element {e!r}")
        rel[index[x], index[y]] = True

    if relation_kind == HASSE:
        rel = _closure(rel | np.eye(n, dtype=bool))
    else:
        missing = [i for i in range(n) if not rel[i, i]]
        if missing:
            raise NotReflexive(f"pair ({names[missing[0]]!r}, {names[missing[0]]!r}) missing")
        closed = _closure(rel)
        extra = np.argwhere(closed & ~rel)
        if len(extra):
            i, j = extra[0]
            raise NotTransitive(f"implied pair ({names[i]!r}, {names[j]!r}) missing")
    sym = np.argwhere(rel & rel.T & ~np.eye(n, dtype=bool))
    if len(sym):
        i, j = sym[0]
        raise CycleDetected(f"{names[i]!r} and {names[j]!r} are mutually below each other")
    return FinitePoset(names, rel)


# -- bounds -----------------------------------------------------------------

def lub_mask(p: FinitePoset, mask: int) -> int | None:
    ub = p.full_mask
    for i in bits(mask):
        ub &= p.up[i]
    for u in bits(ub):
        if p.up[u] & ub == ub:
            return u
    return None


def glb_mask(p: FinitePoset, mask: int) -> int | None:
    lb = p.full_mask
    for i in bits(mask):
        lb &= p.down[i]
    for u in bits(lb):
        if p.down[u] & lb == lb:
            return u
    return None


def lub(p: FinitePoset, s: Iterable) -> int | None:
    """Least upper bound of ``s``, or None when it does not exist.

    ``lub(p, [])`` is the bottom element when there is one.
    """
    return lub_mask(p, p.mask(s))


def glb(p: FinitePoset, s: Iterable) -> int | None:
    return glb_mask(p, p.mask(s))


def upper_bounds(p: FinitePoset, s: Iterable) -> list[int]:
    ub = p.full_mask
    for i in bits(p.mask(s)):
        ub &= p.up[i]
    return list(bits(ub))


def is_chain_mask(p: FinitePoset, mask: int) -> bool:
    for i in bits(mask):
        if mask & ~(p.up[i] | p.down[i]):
            return False
    return True


def is_chain(p: FinitePoset, s: Iterable) -> bool:
    return is_chain_mask(p, p.mask(s))


def chain_masks(p: FinitePoset, min_size: int = 0) -> Iterator[int]:
    n = len(p)

    def extend(start, mask, size):
        if size >= min_size:
            yield mask
        for j in range(start, n):
            if mask & ~(p.up[j] | p.down[j]) == 0:
                yield from extend(j + 1, mask | 1 << j, size + 1)

    yield from extend(0, 0, 0)


def enumerate_chains(p: FinitePoset, min_size: int = 0) -> Iterator[frozenset[int]]:
    """Yield every chain (totally ordered subset) with at least ``min_size`` members."""
    if min_size < 0:
        raise ValueError("min_size must be >= 0")
    for m in chain_masks(p, min_size):
        yield frozenset(bits(m))


# -- classification ---------------------------------------------------------

@dataclass(frozen=True)
class PosetClassification:
    is_lattice: bool
    is_complete_lattice: bool
    is_complete_semilattice: bool
    is_chain_complete: bool
    is_strictly_inductive: bool
    is_well_ordered: bool
    has_bottom: bool
    has_top: bool
    # True when the completeness flags came from full subset/chain enumeration
    decided_exhaustively: bool


def _pairwise(p: FinitePoset, bound) -> bool:
    n = len(p)
    return all(bound(p, 1 << i | 1 << j) is not None for i in range(n) for j in range(i + 1, n))


def classify_poset(p: FinitePoset, exhaustive_bound: int = DEFAULT_EXHAUSTIVE_BOUND) -> PosetClassification:
    n = len(p)
    has_bottom = p.bottom is not None
    has_top = p.top is not None
    joins = _pairwise(p, lub_mask)
    meets = _pairwise(p, glb_mask)
    is_lattice = n > 0 and joins and meets
    total = all(p.comparable(i, j) for i in range(n) for j in range(i + 1, n))

    if n > exhaustive_bound:
        return PosetClassification(
            is_lattice=is_lattice,
            is_complete_lattice=is_lattice,
            is_complete_semilattice=n > 0 and joins,
            is_chain_complete=has_bottom,
            is_strictly_inductive=True,
            is_well_ordered=total,
            has_bottom=has_bottom,
            has_top=has_top,
            decided_exhaustively=False,
        )

    all_lubs = all_glbs = nonempty_lubs = well_ordered = True
    for m in range(1 << n):
        has_lub = lub_mask(p, m) is not None
        all_lubs &= has_lub
        all_glbs &= glb_mask(p, m) is not None
        if m:
            nonempty_lubs &= has_lub
            # finite well order: every non-empty subset has a least element
            least = [i for i in bits(m) if p.up[i] & m == m]
            well_ordered &= bool(least)
    chain_complete = strictly_inductive = True
    for c in chain_masks(p):
        has_lub = lub_mask(p, c) is not None
        chain_complete &= has_lub
        if c:
            strictly_inductive &= has_lub
    return PosetClassification(
        is_lattice=is_lattice,
        is_complete_lattice=all_lubs and all_glbs,
        is_complete_semilattice=nonempty_lubs,
        is_chain_complete=chain_complete,
        is_strictly_inductive=strictly_inductive,
        is_well_ordered=well_ordered,
        has_bottom=has_bottom,
        has_top=has_top,
        decided_exhaustively=True,
    )


# -- lattices given by behaviour --------------------------------------------

class ImplicitLattice(ABC):
    """A lattice given by its operations rather than an element list.

    Subclasses declare ``height``: an upper bound on the length of any strictly
    ascending sequence, which bounds how long ascending iteration can run.
    """

    height: int

    @abstractmethod
    def leq(self, x, y) -> bool: ...

    @abstractmethod
    def join(self, x, y): ...

    @abstractmethod
    def bottom(self): ...

    def top(self):
        return None

    def eq(self, x, y) -> bool:
        return x == y


class PosetLattice(ImplicitLattice):
    """View a finite lattice poset through the ImplicitLattice interface."""

    def __init__(self, poset: FinitePoset):
        if not poset.classification.is_lattice:
            raise ValueError("poset is not a lattice")
        self.poset = poset
        self.height = len(poset)

    def leq(self, x, y):
        return self.poset.le(x, y)

    def join(self, x, y):
        return lub_mask(self.poset, 1 << x | 1 << y)

    def bottom(self):
        return self.poset.bottom

    def top(self):
        return self.poset.top


def lattice_law_violations(lat: ImplicitLattice, triples: Iterable[tuple[Hashable, Hashable, Hashable]]):
    """Check the join-semilattice laws on sample triples.

    Returns a list of ``(law, witness)`` pairs; empty means every law held.
    """
    out = []
    bot = lat.bottom()
    for x, y, z in triples:
        if not lat.eq(lat.join(x, y), lat.join(y, x)):
            out.append(("commutative", (x, y)))
        if not lat.eq(lat.join(lat.join(x, y), z), lat.join(x, lat.join(y, z))):
            out.append(("associative", (x, y, z)))
        if not lat.eq(lat.join(x, x), x):
            out.append(("idempotent", (x,)))
        if not lat.eq(lat.join(bot, x), x):
            out.append(("bottom_identity", (x,)))
        if not (lat.leq(x, lat.join(x, y)) and lat.leq(y, lat.join(x, y))):
            out.append(("leq_join", (x, y)))
        if lat.leq(x, y) != lat.eq(lat.join(x, y), y):
            out.append(("leq_iff_join", (x, y)))
    return out


def longest_ascending(lat: ImplicitLattice, samples: Sequence[Hashable]) -> int:
    """Length of the longest strictly ascending sequence drawn from ``samples``."""
    uniq = list(dict.fromkeys(samples))
    # count of elements below gives a linear extension order
    order = sorted(uniq, key=lambda u: sum(lat.leq(v, u) for v in uniq))
    best = [1] * len(order)
    for a, u in enumerate(order):
        for b in range(a):
            if best[b] + 1 > best[a] and lat.leq(order[b], u) and not lat.eq(order[b], u):
                best[a] = best[b] + 1
    return max(best, default=0)


def pairs(p: FinitePoset) -> Iterator[tuple[int, int]]:
    """All ordered pairs of element indices in lexicographic order."""
    return itertools.product(p.elements, repeat=2)
