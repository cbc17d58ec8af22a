"""Forward sign analysis over a control-flow graph, solved by plain Kleene iteration.

The analysis state maps every node to the signs of every variable on exit
from that node.  One global transfer F recomputes all nodes at once, and the
iteration engine runs F from the all-BOT state until it stabilises.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import reduce

from .engine import Converged, IterateTrace, IterationOutcome, iterate
from .errors import BudgetExhausted, MalformedProgram
from .order import ImplicitLattice


class Sign(Enum):
    BOT = "BOT"
    NEG = "NEG"
    ZERO = "ZERO"
    POS = "POS"
    TOP = "TOP"

    def __str__(self):
        return self.value

    def leq(self, other: "Sign") -> bool:
        return self is Sign.BOT or other is Sign.TOP or self is other

    def join(self, other: "Sign") -> "Sign":
        if self.leq(other):
            return other
        if other.leq(self):
            return self
        return Sign.TOP

    @classmethod
    def of_int(cls, v: int) -> "Sign":
        return cls.NEG if v < 0 else cls.POS if v > 0 else cls.ZERO

    @classmethod
    def parse(cls, text: str) -> "Sign":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown sign {text!r}; expected one of BOT, NEG, ZERO, POS, TOP") from None


BOT, NEG, ZERO, POS, TOP = Sign.BOT, Sign.NEG, Sign.ZERO, Sign.POS, Sign.TOP


def abstract_add(s: Sign, t: Sign) -> Sign:
    if s is BOT or t is BOT:
        return BOT
    if s is ZERO:
        return t
    if t is ZERO:
        return s
    if s is t:  # NEG+NEG, POS+POS, TOP+TOP
        return s
    return TOP


def abstract_mul(s: Sign, t: Sign) -> Sign:
    if s is BOT or t is BOT:
        return BOT
    if s is ZERO or t is ZERO:
        return ZERO
    if s is TOP or t is TOP:
        return TOP
    return POS if s is t else NEG


@dataclass(frozen=True)
class Instr:
    kind: str
    var: str | None = None
    value: int | None = None
    src: str | None = None
    lhs: str | None = None
    rhs: str | None = None

    def operands(self) -> list[str]:
        return [v for v in (self.var, self.src, self.lhs, self.rhs) if v is not None]


_REQUIRED = {
    "assign_const": ("var", "value"),
    "assign_var": ("var", "src"),
    "assign_add": ("var", "lhs", "rhs"),
    "assign_mul": ("var", "lhs", "rhs"),
    "skip": (),
}


@dataclass(frozen=True)
class Program:
    vars: tuple[str, ...]
    nodes: tuple[tuple[str, Instr], ...]
    edges: tuple[tuple[str, str], ...]
    entry: str

    def __post_init__(self):
        ids = [n for n, _ in self.nodes]
        if len(set(ids)) != len(ids):
            raise MalformedProgram("duplicate node id")
        if len(set(self.vars)) != len(self.vars):
            raise MalformedProgram("duplicate variable")
        if self.entry not in ids:
            raise MalformedProgram(f"entry node {self.entry!r} does not exist")
        for a, b in self.edges:
            for n in (a, b):
                if n not in ids:
                    raise MalformedProgram(f"edge endpoint {n!r} does not exist")
        for nid, ins in self.nodes:
            if ins.kind not in _REQUIRED:
                raise MalformedProgram(f"node {nid!r}: unknown instruction {ins.kind!r}")
            for fld in _REQUIRED[ins.kind]:
                if getattr(ins, fld) is None:
                    raise MalformedProgram(f"node {nid!r}: {ins.kind} needs {fld!r}")
            for v in ins.operands():
                if v not in self.vars:
                    raise MalformedProgram(f"node {nid!r}: undeclared variable {v!r}")

    @classmethod
    def from_doc(cls, doc: dict) -> "Program":
        nodes = tuple((n["id"], Instr(**n["instr"])) for n in doc["nodes"])
        return cls(tuple(doc["vars"]), nodes, tuple(tuple(e) for e in doc["edges"]), doc["entry"])

    @property
    def node_ids(self) -> list[str]:
        return [n for n, _ in self.nodes]

    def predecessors(self) -> list[list[int]]:
        index = {n: i for i, n in enumerate(self.node_ids)}
        preds = [[] for _ in self.nodes]
        for a, b in self.edges:
            preds[index[b]].append(index[a])
        return preds

    def reachable(self) -> set[str]:
        succ = {}
        for a, b in self.edges:
            succ.setdefault(a, []).append(b)
        seen, todo = {self.entry}, [self.entry]
        while todo:
            for b in succ.get(todo.pop(), []):
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        return seen


SignState = tuple  # tuple over nodes of tuples over vars of Sign


class SignStateLattice(ImplicitLattice):
    """Pointwise product of the sign lattice over nodes x variables."""

    def __init__(self, n_nodes: int, n_vars: int):
        self.shape = (n_nodes, n_vars)
        self.height = n_nodes * n_vars * 2 + 1

    def leq(self, u, v):
        return all(a.leq(b) for ru, rv in zip(u, v) for a, b in zip(ru, rv))

    def join(self, u, v):
        return tuple(tuple(a.join(b) for a, b in zip(ru, rv)) for ru, rv in zip(u, v))

    def bottom(self):
        n, k = self.shape
        return tuple((BOT,) * k for _ in range(n))

    def top(self):
        n, k = self.shape
        return tuple((TOP,) * k for _ in range(n))


def _transfer(ins: Instr, env: tuple, col: dict) -> tuple:
    if ins.kind == "skip":
        return env
    if ins.kind == "assign_const":
        val = Sign.of_int(ins.value)
    elif ins.kind == "assign_var":
        val = env[col[ins.src]]
    elif ins.kind == "assign_add":
        val = abstract_add(env[col[ins.lhs]], env[col[ins.rhs]])
    else:
        val = abstract_mul(env[col[ins.lhs]], env[col[ins.rhs]])
    out = list(env)
    out[col[ins.var]] = val
    return tuple(out)


class GlobalTransfer:
    """F(state): join predecessor exits (plus the entry state) and apply each node."""

    def __init__(self, prog: Program, entry_state: dict[str, Sign] | None = None):
        self.prog = prog
        self.col = {v: i for i, v in enumerate(prog.vars)}
        entry_state = entry_state or {}
        for v in entry_state:
            if v not in self.col:
                raise MalformedProgram(f"entry state names undeclared variable {v!r}")
        self.entry_env = tuple(entry_state.get(v, TOP) for v in prog.vars)
        self.entry = prog.node_ids.index(prog.entry)
        self.preds = prog.predecessors()
        self.lattice = SignStateLattice(len(prog.nodes), len(prog.vars))

    def in_states(self, state) -> list[tuple]:
        k = len(self.prog.vars)
        envs = []
        for i in range(len(self.prog.nodes)):
            incoming = [state[j] for j in self.preds[i]]
            if i == self.entry:
                incoming.append(self.entry_env)
            env = reduce(lambda a, b: tuple(x.join(y) for x, y in zip(a, b)), incoming, (BOT,) * k)
            envs.append(env)
        return envs

    def __call__(self, state):
        return tuple(_transfer(ins, env, self.col) for (_, ins), env in zip(self.prog.nodes, self.in_states(state)))


@dataclass(frozen=True)
class DataflowResult:
    program: Program
    state: tuple
    in_state: tuple
    trace: IterateTrace
    outcome: IterationOutcome

    @property
    def iterations(self) -> int:
        """Applications of F until the repeated state was observed."""
        return len(self.trace) - 1

    def table(self) -> dict[str, dict[str, Sign]]:
        """Exit signs per node."""
        return {nid: dict(zip(self.program.vars, row)) for nid, row in zip(self.program.node_ids, self.state)}


def solve(prog: Program, entry_state: dict[str, Sign] | None = None, budget: int | None = None) -> DataflowResult:
    """Iterate F from the all-BOT state to its least fixpoint.

    Raises BudgetExhausted if the iteration does not stabilise within
    ``budget`` applications (default: lattice height + 1), which can only
    happen if a transfer function is not monotone.
    """
    F = GlobalTransfer(prog, entry_state)
    lat = F.lattice
    outcome, trace = iterate(lat, F, lat.bottom(), budget)
    if not isinstance(outcome, Converged):
        raise BudgetExhausted(f"no fixpoint after {outcome.budget} applications of the transfer function")
    state = outcome.value
    return DataflowResult(prog, state, tuple(F.in_states(state)), trace, outcome)
