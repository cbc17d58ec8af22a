"""Instances (X, f, a0[, g]): seeded random generation and exhaustive enumeration."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..endomap import Endomap
from ..errors import SizeCap
from ..order import DEFAULT_SIZE_CAP, FinitePoset, _closure, bits

RANDOM_ORDER = "RANDOM_ORDER"
RANDOM_LATTICE = "RANDOM_LATTICE"
CHAIN = "CHAIN"
ANTICHAIN_TOWER = "ANTICHAIN_TOWER"
SHAPES = (RANDOM_ORDER, RANDOM_LATTICE, CHAIN, ANTICHAIN_TOWER)

LATTICE_RETRIES = 32


@dataclass(frozen=True)
class Instance:
    poset: FinitePoset
    f: Endomap
    a0: int
    g: Endomap | None = None

    def __post_init__(self):
        object.__setattr__(self, "a0", self.poset.id(self.a0))
        for m in (self.f, self.g):
            if m is not None and m.poset != self.poset:
                raise ValueError("map and instance poset differ")


def _names(n):
    return [f"e{i}" for i in range(n)]


def poset_from_up(up: tuple[int, ...], names=None) -> FinitePoset:
    n = len(up)
    leq = np.array([[bool(up[i] >> j & 1) for j in range(n)] for i in range(n)], dtype=bool).reshape(n, n)
    return FinitePoset(names or [str(i) for i in range(n)], leq)


def _dag_poset(rng, n, density) -> np.ndarray:
    perm = rng.permutation(n)
    rel = np.eye(n, dtype=bool)
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < density:
                rel[perm[a], perm[b]] = True
    return _closure(rel)


def _macneille(leq: np.ndarray, limit: int) -> list[int] | None:
    """Cuts of the Dedekind-MacNeille completion as bitmasks, or None past ``limit``.

    Cuts are exactly the intersections of principal down-sets (the empty
    intersection being the whole set).
    """
    n = leq.shape[0]
    full = (1 << n) - 1
    principal = {int(sum(1 << j for j in range(n) if leq[j, i])) for i in range(n)}
    cuts = {full} | principal
    frontier = list(cuts)
    while frontier:
        nxt = []
        for a in frontier:
            for b in principal:
                c = a & b
                if c not in cuts:
                    cuts.add(c)
                    nxt.append(c)
                    if len(cuts) > limit:
                        return None
        frontier = nxt
    return sorted(cuts, key=lambda c: (bin(c).count("1"), c))


def _is_lattice_leq(leq: np.ndarray) -> bool:
    n = leq.shape[0]
    up = [int(sum(1 << j for j in range(n) if leq[i, j])) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            ub = up[i] & up[j]
            if not any(up[u] & ub == ub for u in bits(ub)):
                return False
    return True


def _random_lattice(rng, size) -> np.ndarray | None:
    """A random ``size``-element lattice, or None if this attempt failed.

    First tries bottom + random middle + top; otherwise completes random
    posets of every smaller size and keeps one whose completion has exactly
    ``size`` elements.
    """
    if size <= 2:
        return np.triu(np.ones((size, size), dtype=bool))
    density = rng.uniform(0.1, 0.7)
    leq = np.ones((size, size), dtype=bool)
    leq[1:-1, 1:-1] = _dag_poset(rng, size - 2, density)
    leq[1:, 0] = False
    leq[-1, :-1] = False
    if _is_lattice_leq(leq):
        return leq
    for k in rng.permutation(np.arange(1, size + 1)):
        base = _dag_poset(rng, int(k), density)
        cuts = _macneille(base, size)
        if cuts is not None and len(cuts) == size:
            return np.array([[a & b == a for b in cuts] for a in cuts], dtype=bool)
    return None


def _tower(rng, size) -> np.ndarray:
    cuts = sorted(rng.choice(np.arange(1, size), size=int(rng.integers(0, size)), replace=False)) if size > 1 else []
    bounds = [0, *cuts, size]
    level = np.zeros(size, dtype=int)
    for lv, (a, b) in enumerate(zip(bounds, bounds[1:])):
        level[a:b] = lv
    return (level[:, None] < level[None, :]) | np.eye(size, dtype=bool)


def generate_instance(seed: int, size: int, shape: str = RANDOM_ORDER, cap: int = DEFAULT_SIZE_CAP) -> Instance:
    """Deterministic random instance; f, g and a0 are uniform over the elements."""
    if not 1 <= size <= cap:
        raise SizeCap(f"size {size} outside 1..{cap}")
    if shape not in SHAPES:
        raise ValueError(f"unknown shape {shape!r}; expected one of {', '.join(SHAPES)}")
    rng = np.random.default_rng([seed & (2**64 - 1), size, SHAPES.index(shape)])
    if shape == RANDOM_ORDER:
        leq = _dag_poset(rng, size, rng.uniform(0.15, 0.6))
    elif shape == CHAIN:
        leq = np.triu(np.ones((size, size), dtype=bool))
    elif shape == ANTICHAIN_TOWER:
        leq = _tower(rng, size)
    else:
        for attempt in range(LATTICE_RETRIES):
            sub = np.random.default_rng([seed & (2**64 - 1), size, SHAPES.index(shape), attempt + 1])
            leq = _random_lattice(sub, size)
            if leq is not None:
                rng = sub
                break
        else:
            raise RuntimeError(f"no {size}-element lattice after {LATTICE_RETRIES} retries (seed {seed})")
    p = FinitePoset(_names(size), leq)
    f = Endomap(p, rng.integers(0, size, size).tolist())
    g = Endomap(p, rng.integers(0, size, size).tolist())
    a0 = int(rng.integers(0, size))
    return Instance(p, f, a0, g)


# -- exhaustive enumeration -------------------------------------------------

def labeled_posets(n: int) -> Iterator[FinitePoset]:
    """Every partial order on the labels 0..n-1, each exactly once."""
    for up in _labeled_ups(n):
        yield poset_from_up(up)


def _labeled_ups(n: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    new = n - 1
    for up in _labeled_ups(n - 1):
        down = [sum(1 << j for j in range(n - 1) if up[j] >> i & 1) for i in range(n - 1)]
        masks = range(1 << (n - 1))
        down_closed = [m for m in masks if all(down[i] & ~m == 0 for i in bits(m))]
        up_closed = [m for m in masks if all(up[i] & ~m == 0 for i in bits(m))]
        for d in down_closed:
            for u in up_closed:
                if d & u or any(up[i] & u != u for i in bits(d)):
                    continue
                new_up = tuple(up[i] | (1 << new if d >> i & 1 else 0) for i in range(n - 1))
                yield new_up + (u | 1 << new,)


def all_maps(p: FinitePoset) -> Iterator[Endomap]:
    for table in itertools.product(range(len(p)), repeat=len(p)):
        yield Endomap(p, table)


def all_instances(max_size: int, min_size: int = 1, with_g: bool = False) -> Iterator[Instance]:
    """Every (poset, map, a0) with min_size <= |X| <= max_size.

    With ``with_g`` the enumerated map is supplied as ``g`` (and also as
    ``f``), which is what the join-form theorems consume.
    """
    for n in range(min_size, max_size + 1):
        for p in labeled_posets(n):
            for m in all_maps(p):
                for a0 in range(n):
                    yield Instance(p, m, a0, m if with_g else None)
