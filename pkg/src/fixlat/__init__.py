"""Fixpoints of self-maps on finite posets: iteration, canonical sets, theorem checks."""
from .chains import compare_ANW, compute_N, compute_W, is_a0_chain
from .dataflow import Program, Sign, solve
from .endomap import Endomap, classify_map, fixpoint_sets
from .engine import OrdinalIndex, compute_A, iterate, sequence_is_monotone
from .lab.instances import Instance, generate_instance
from .lab.search import search
from .lab.theorems import TheoremId, Verdict, verify, verify_all
from .order import FinitePoset, build_poset, classify_poset, enumerate_chains, glb, lub

__all__ = [
    "Endomap", "FinitePoset", "Instance", "OrdinalIndex", "Program", "Sign", "TheoremId", "Verdict",
    "build_poset", "classify_map", "classify_poset", "compare_ANW", "compute_A", "compute_N",
    "compute_W", "enumerate_chains", "fixpoint_sets", "generate_instance", "glb", "is_a0_chain",
    "iterate", "lub", "search", "sequence_is_monotone", "solve", "verify", "verify_all",
]
