"""Home-space analysis for Petri nets over semilinear configuration sets."""

__version__ = "0.1.0"

from .formats import ParseError, format_net, format_semilinear, parse_net, parse_semilinear
from .homespace import (
    HomeSpace,
    HomeSpaceQuery,
    NotHomeSpace,
    WitnessChain,
    brute_force_check,
    build_freeze_net,
    check,
)
from .nets import Action, PetriNet, Trace, fire, fire_sequence, reachable_set_bounded
from .reach import Budget, CallStats, ReachQuery, Reachable, Unreachable, decide
from .semilinear import LinearSet, MinBasis, SemilinearSet
from .upward import Answer, Basis, Inconclusive, Undecided, min_basis, minimize
from .vectors import OMEGA, PartialVector
from .witness import (
    WitnessResult,
    base_decrease_min_basis,
    decrease_min_basis,
    witness_linear,
    witness_singleton,
)

# reach.Unknown and homespace.Unknown are distinct verdicts with the same
# name: import them from their defining modules.
__all__ = [
    "Action",
    "Answer",
    "Basis",
    "Budget",
    "CallStats",
    "HomeSpace",
    "HomeSpaceQuery",
    "Inconclusive",
    "LinearSet",
    "MinBasis",
    "NotHomeSpace",
    "OMEGA",
    "ParseError",
    "PartialVector",
    "PetriNet",
    "ReachQuery",
    "Reachable",
    "SemilinearSet",
    "Trace",
    "Undecided",
    "Unreachable",
    "WitnessChain",
    "WitnessResult",
    "base_decrease_min_basis",
    "brute_force_check",
    "build_freeze_net",
    "check",
    "decide",
    "decrease_min_basis",
    "fire",
    "fire_sequence",
    "format_net",
    "format_semilinear",
    "min_basis",
    "minimize",
    "parse_net",
    "parse_semilinear",
    "reachable_set_bounded",
    "witness_linear",
    "witness_singleton",
    "__version__",
]
