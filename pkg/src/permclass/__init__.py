"""Equivalence classes of permutations under pattern-replacement moves.

The light modules (permutations, patterns) import eagerly. Everything that
pulls in the compiled engine loads on first attribute access, so the CLI can
size the numba thread pool before numba is imported.
"""

import importlib

from .errors import (CapError, FormulaError, InvalidWordError, OutOfRangeError, PermclassError,
                     PrefixError, ResourceError, StaleOccurrenceError)
from .perm import Parity, Permutation, all_permutations, parity, rank, unrank
from .patterns import Move, Occurrence, ReplacementSet, apply_move, neighbors, occurrences

__version__ = "0.1.0"

__all__ = [
    "__version__", "PermclassError", "InvalidWordError", "CapError", "OutOfRangeError",
    "StaleOccurrenceError", "FormulaError", "PrefixError", "ResourceError",
    "Parity", "Permutation", "all_permutations", "parity", "rank", "unrank",
    "Move", "Occurrence", "ReplacementSet", "apply_move", "neighbors", "occurrences",
]

_LAZY = {
    "ClassPartition": "classes", "ClassSummary": "classes", "EngineOptions": "classes",
    "enumerate_classes": "classes", "are_equivalent": "classes", "class_of": "classes",
    "nontrivial_count": "classes",
    "PseudoPermutation": "pseudo", "enumerate_pseudo_classes": "pseudo",
    "pseudo_parity": "pseudo", "representative": "pseudo", "rotational_profile": "pseudo",
    "verify_es_theorem": "erdos", "normalize_prefix_chain": "erdos", "es_pattern_set": "erdos",
    "run_experiment": "harness", "FormulaId": "harness", "formula_value": "harness",
    "ResultCache": "harness",
}


def __getattr__(name):
    mod = _LAZY.get(name)
    if mod is None:
        raise AttributeError(f"module 'permclass' has no attribute {name!r}")
    value = getattr(importlib.import_module(f".{mod}", __name__), name)
    globals()[name] = value
    return value
