"""Unification in the description logic FL0."""
from .core import (
    TOP,
    GoalSubsumption,
    Name,
    Particle,
    apply,
    concept,
    normalize,
    render,
    restrict_to_constant,
    subsumes,
    verify_unifier,
)
from .frontend import ProblemSource, parse_file, parse_text
from .solver import SolveResult, Statistics, VerificationFailure, solve

__all__ = [
    "TOP", "GoalSubsumption", "Name", "Particle", "apply", "concept", "normalize", "render",
    "restrict_to_constant", "subsumes", "verify_unifier", "ProblemSource", "parse_file",
    "parse_text", "SolveResult", "Statistics", "VerificationFailure", "solve",
]
