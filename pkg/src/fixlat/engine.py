"""Ordinal-indexed iteration a_k of a map from a starting point a_0.

Successor steps apply the map; a limit step takes the lub of every iterate
produced so far.  Indices are restricted to the shape omega*m + n: block m
runs successor steps from its entry value until the sequence stabilises or
revisits a value already seen in the same block, at which point the block
is closed and the next limit is taken.

Since a finite carrier has finitely many (limit value, seen-set) states, a
repeated state after a limit step proves the sequence never stabilises.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator

from .endomap import Check, Endomap
from .errors import AscentViolation
from .order import FinitePoset, ImplicitLattice, bits, lub_mask


@dataclass(frozen=True, order=True)
class OrdinalIndex:
    """The ordinal omega*limit_blocks + finite_offset."""

    limit_blocks: int = 0
    finite_offset: int = 0

    def __str__(self):
        if self.limit_blocks == 0:
            return str(self.finite_offset)
        return f"ω·{self.limit_blocks}+{self.finite_offset}"

    @property
    def is_limit(self) -> bool:
        return self.limit_blocks > 0 and self.finite_offset == 0


@dataclass(frozen=True)
class Block:
    """One omega-block of the trace; ``values[n]`` is the iterate at omega*m + n."""

    values: tuple
    from_limit: bool


@dataclass(frozen=True)
class IterateTrace:
    blocks: tuple[Block, ...]
    distinct_values: frozenset

    def items(self) -> Iterator[tuple[OrdinalIndex, Hashable]]:
        for m, block in enumerate(self.blocks):
            for n, v in enumerate(block.values):
                yield OrdinalIndex(m, n), v

    def values(self) -> list:
        return [v for _, v in self.items()]

    @property
    def limit_steps(self) -> int:
        return sum(b.from_limit for b in self.blocks)

    def __len__(self):
        return sum(len(b.values) for b in self.blocks)


class IterationOutcome:
    kind: str

    def as_record(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Converged(IterationOutcome):
    """a_{at+1} = a_at = value, with ``at`` the smallest such index."""

    at: OrdinalIndex
    value: Hashable
    kind: str = field(default="CONVERGED", init=False)

    def as_record(self):
        return {"kind": self.kind, "at": self.at, "value": self.value}


@dataclass(frozen=True)
class UndefinedAtLimit(IterationOutcome):
    at: OrdinalIndex
    prefix_set: frozenset
    kind: str = field(default="UNDEFINED_AT_LIMIT", init=False)

    def as_record(self):
        return {"kind": self.kind, "at": self.at, "prefix_set": self.prefix_set}


@dataclass(frozen=True)
class DivergentPeriodic(IterationOutcome):
    """The state reached after the limit at ``first_limit_state[0]`` recurs every
    ``period_blocks`` blocks."""

    first_limit_state: tuple[OrdinalIndex, Hashable]
    period_blocks: int
    kind: str = field(default="DIVERGENT_PERIODIC", init=False)

    def as_record(self):
        at, value = self.first_limit_state
        return {"kind": self.kind, "first_limit": at, "first_limit_value": value,
                "period_blocks": self.period_blocks}


@dataclass(frozen=True)
class Exhausted(IterationOutcome):
    budget: int
    kind: str = field(default="BUDGET_EXHAUSTED", init=False)

    def as_record(self):
        return {"kind": self.kind, "budget": self.budget}


def default_budget(carrier) -> int:
    if isinstance(carrier, FinitePoset):
        return 10 * len(carrier) ** 2
    return carrier.height + 1


def iterate(carrier, f: Endomap | Callable, a0, budget: int | None = None):
    """Run the iteration and return ``(outcome, trace)``.

    ``budget`` caps the number of computed iterates (successor and limit
    steps alike); running out is reported as an :class:`Exhausted` outcome.
    """
    if budget is None:
        budget = default_budget(carrier)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if isinstance(carrier, FinitePoset):
        return _iterate_finite(carrier, f, carrier.id(a0), budget)
    if isinstance(carrier, ImplicitLattice):
        return _iterate_implicit(carrier, f, a0, budget)
    raise TypeError(f"unsupported carrier {type(carrier).__name__}")


def _iterate_finite(p: FinitePoset, f, a0: int, budget: int):
    step = f.table.__getitem__ if isinstance(f, Endomap) else (lambda x: p.id(f(x)))
    blocks: list[Block] = []
    seen = 1 << a0
    limit_states: dict[tuple[int, int], int] = {}
    values = [a0]
    in_block = {a0}
    m = steps = 0

    def done(outcome):
        if values:
            blocks.append(Block(tuple(values), m > 0))
        return outcome, IterateTrace(tuple(blocks), frozenset(bits(seen)))

    while True:
        if steps >= budget:
            return done(Exhausted(budget))
        cur = values[-1]
        nxt = step(cur)
        steps += 1
        values.append(nxt)
        seen |= 1 << nxt
        if nxt == cur:
            return done(Converged(OrdinalIndex(m, len(values) - 2), cur))
        if nxt not in in_block:
            in_block.add(nxt)
            continue
        # the block cycles forever: close it and take the limit
        blocks.append(Block(tuple(values), m > 0))
        m += 1
        values = []
        if steps >= budget:
            return done(Exhausted(budget))
        limit = lub_mask(p, seen)
        steps += 1
        if limit is None:
            return done(UndefinedAtLimit(OrdinalIndex(m, 0), frozenset(bits(seen))))
        seen |= 1 << limit
        values = [limit]
        in_block = {limit}
        state = (limit, seen)
        if state in limit_states:
            first = limit_states[state]
            return done(DivergentPeriodic((OrdinalIndex(first, 0), limit), m - first))
        limit_states[state] = m


def _iterate_implicit(lat: ImplicitLattice, f: Callable, a0, budget: int):
    values = [a0]
    steps = 0
    outcome = None
    while steps < budget:
        cur = values[-1]
        nxt = f(cur)
        steps += 1
        values.append(nxt)
        if lat.eq(nxt, cur):
            outcome = Converged(OrdinalIndex(0, len(values) - 2), cur)
            break
        if not lat.leq(cur, nxt):
            raise AscentViolation(
                f"iterate {len(values) - 1} is not above iterate {len(values) - 2}; "
                "the map is not monotone or the start is not a pre-fixpoint"
            )
    if outcome is None:
        outcome = Exhausted(budget)
    return outcome, IterateTrace((Block(tuple(values), False),), frozenset(values))


def compute_A(carrier, f, a0, budget: int | None = None) -> frozenset:
    """Distinct iterates up to the outcome point.

    Exact when the outcome is CONVERGED or DIVERGENT_PERIODIC; otherwise only
    the iterates materialised before the run stopped.
    """
    _, trace = iterate(carrier, f, a0, budget)
    return trace.distinct_values


def sequence_is_monotone(trace: IterateTrace, carrier) -> Check:
    """a_k <= a_l for every recorded k < l; witness is the first failing (k, l)."""
    le = carrier.le if isinstance(carrier, FinitePoset) else carrier.leq
    items = list(trace.items())
    for i, (k, ak) in enumerate(items):
        for l, al in items[i + 1:]:
            if not le(ak, al):
                return Check(False, (k, l))
    return Check(True)


def format_trace(trace: IterateTrace, outcome: IterationOutcome, show=str) -> list[str]:
    """Text rendering: one ``index: element`` line per iterate, then the outcome."""
    lines = [f"{k}: {show(v)}" for k, v in trace.items()]
    rec = outcome.as_record()
    if isinstance(outcome, Converged):
        lines.append(f"outcome: CONVERGED at {outcome.at} value {show(outcome.value)}")
    elif isinstance(outcome, UndefinedAtLimit):
        prefix = ", ".join(show(v) for v in sorted(outcome.prefix_set))
        lines.append(f"outcome: UNDEFINED_AT_LIMIT at {outcome.at} prefix {{{prefix}}}")
    elif isinstance(outcome, DivergentPeriodic):
        lines.append(
            f"outcome: DIVERGENT_PERIODIC first limit {rec['first_limit']} value "
            f"{show(rec['first_limit_value'])} period {outcome.period_blocks} block(s)"
        )
    else:
        lines.append(f"outcome: BUDGET_EXHAUSTED budget {outcome.budget}")
    return lines
