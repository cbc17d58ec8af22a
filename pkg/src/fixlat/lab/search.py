"""Falsification harness: sweep instances for refutations or hypothesis-drop witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from ..errors import UnsupportedCarrier
from .instances import RANDOM_ORDER, Instance, all_instances, generate_instance
from .theorems import REFUTED, THEOREMS, TheoremId, Verdict, verify

FULL = "FULL"
DROP = "DROP_HYPOTHESIS"
DEFAULT_WITNESSES = 5


@dataclass(frozen=True)
class Witness:
    instance: Instance
    verdict: Verdict
    provenance: dict

    def header(self) -> str:
        """One-line provenance header for a reproduction bundle."""
        return "fixlat-repro " + " ".join(f"{k}={v}" for k, v in self.provenance.items())


@dataclass
class SearchReport:
    theorem: TheoremId
    mode: str
    dropped: tuple
    checked: int = 0
    hypotheses_held: int = 0
    skipped: int = 0
    witnesses: list[Witness] = field(default_factory=list)

    @property
    def refuted(self) -> bool:
        """FULL mode found a counterexample to a proved statement."""
        return self.mode == FULL and bool(self.witnesses)

    def bundle(self) -> str | None:
        from ..formats import dumps_instance

        if not self.witnesses:
            return None
        w = self.witnesses[0]
        return dumps_instance(w.instance, w.header())


def seeded_instances(seeds: Iterable[int], sizes: Iterable[int], shapes: Iterable[str]) -> Iterator[tuple[Instance, dict]]:
    sizes, shapes = list(sizes), list(shapes)
    for seed in seeds:
        for size in sizes:
            for shape in shapes:
                yield generate_instance(seed, size, shape), {"seed": seed, "size": size, "shape": shape}


def exhaustive_instances(max_size: int, with_g: bool) -> Iterator[tuple[Instance, dict]]:
    for i, inst in enumerate(all_instances(max_size, with_g=with_g)):
        yield inst, {"seed": f"exhaustive:{i}", "size": len(inst.poset), "shape": "ALL_LABELED"}


def search(
    theorem,
    drop: str | Iterable[str] | None = None,
    seeds: Iterable[int] = range(1000),
    sizes: Iterable[int] = (6,),
    shapes: Iterable[str] = (RANDOM_ORDER,),
    exhaustive_max_size: int | None = None,
    k: int = DEFAULT_WITNESSES,
    budget: int | None = None,
    accept: Callable[[Verdict], bool] | None = None,
) -> SearchReport:
    """Look for instances whose (possibly weakened) hypotheses hold but whose conclusion fails.

    With ``drop`` unset this is FULL mode: any hit refutes a proved statement,
    so the run stops at the first one.  With ``drop`` the first ``k`` hits are
    collected.  ``exhaustive_max_size`` switches from seeded generation to
    every labeled instance up to that size.  ``accept`` filters which hits
    count as witnesses.
    """
    tid = TheoremId(theorem)
    thm = THEOREMS[tid]
    dropped = () if drop is None else ((drop,) if isinstance(drop, str) else tuple(drop))
    report = SearchReport(tid, DROP if dropped else FULL, dropped)
    limit = 1 if not dropped else k
    if exhaustive_max_size is not None:
        source = exhaustive_instances(exhaustive_max_size, thm.needs_g)
    else:
        source = seeded_instances(seeds, sizes, shapes)
    # validate hypothesis names before the sweep
    for name in dropped:
        if name not in thm.hypotheses:
            verify(tid, next(iter(source))[0], budget, dropped)
    for inst, prov in source:
        report.checked += 1
        try:
            v = verify(tid, inst, budget, dropped)
        except UnsupportedCarrier:
            report.skipped += 1
            continue
        if v.hypotheses_hold:
            report.hypotheses_held += 1
        if v.status == REFUTED and (accept is None or accept(v)):
            provenance = {**prov, "theorem": tid.value, "mode": report.mode}
            if dropped:
                provenance["drop"] = ",".join(dropped)
            report.witnesses.append(Witness(inst, v, provenance))
            if len(report.witnesses) >= limit:
                break
    return report
