"""Maximal consistent subsets versus extensions of logic-based argumentation frameworks."""

from ._backend import BACKEND
from .af import AbstractAF, Semantics, extensions, load_af
from .argcore import Argument, ArgumentSet, enumerate_arguments
from .attacks import Relation, build_framework
from .formula import ModelSet, parse_formula
from .kb import KnowledgeBase, load_kb, mc_subsets, min_inconsistent_subsets
from .limits import DEFAULT_LIMITS, CapExceeded, Limits
from .mcext import check_bijection, skeptical_infer, verify_claims

__version__ = "0.1.0"

__all__ = [
    "AbstractAF", "Argument", "ArgumentSet", "BACKEND", "CapExceeded", "DEFAULT_LIMITS", "KnowledgeBase",
    "Limits", "ModelSet", "Relation", "Semantics", "build_framework", "check_bijection",
    "enumerate_arguments", "extensions", "load_af", "load_kb", "mc_subsets", "min_inconsistent_subsets",
    "parse_formula", "skeptical_infer", "verify_claims",
]
