"""Goal construction for a fixed choice and the Implicit Solver rules.

Each rule inspects a single flat subsumption together with the choice, so a
subsumption's fate (solved, failed, or a residual simplified form) depends
only on the choice values of its own atoms and of the decomposition
variables of its right side.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .choice import CONSTANT, NOTHING, TOP
from .core import TOP as TOP_CONCEPT
from .core import Name, Particle
from .flatten import Flat, GenericGoal

CRITICAL_RULES = (5, 7, 8)


@dataclass
class Goal:
    constant: Name
    choice: dict  # var -> ChoiceValue
    unsolved: list
    increasing: list
    starts: list  # variables X with start subsumption X ⊑? A


@dataclass
class ImplicitOutcome:
    verdict: str  # "solved" | "failed" | "residual"
    goal: Goal
    unifier: Optional[dict] = None
    rule: Optional[int] = None
    culprit: Optional[Flat] = None


def build_goal(g: GenericGoal, choice: Mapping) -> Goal:
    starts = [x for x in g.variables if choice[x] == CONSTANT]
    return Goal(g.constant, dict(choice), list(g.flats), list(g.increasing), starts)


def critical(lhs: frozenset, rhs: Name, a: Name, choice: Mapping, g: GenericGoal) -> Optional[int]:
    """Number of the failing critical rule (5, 7 or 8), if any."""
    support = a in lhs or any(choice[x] == CONSTANT for x in lhs if x != a)
    if rhs == a:
        return None if support else 5
    if choice[rhs] == CONSTANT and not support:
        return 7
    if not lhs and choice[rhs] != TOP:
        return 8
    if lhs == {a}:
        if choice[rhs] == NOTHING:
            return 8
        if any(choice[c] != TOP for c in g.decompositions.get(rhs, {}).values()):
            return 8
    return None


def simplify(f: Flat, a: Name, choice: Mapping, g: GenericGoal) -> tuple:
    """Run rules 1-8 on one flat subsumption.

    Returns ``("failed", rule)``, ``("solved", rule)`` or ``("open", flat)``.
    """
    lhs = set(f.lhs)
    rhs = f.rhs
    while True:
        rule = critical(frozenset(lhs), rhs, a, choice, g)
        if rule is not None:
            return "failed", rule
        if rhs != a and choice[rhs] == TOP:
            return "solved", 1
        tops = {x for x in lhs if x != a and choice[x] == TOP}
        if tops:
            lhs -= tops
            continue
        if rhs in lhs:
            return "solved", 3
        if rhs == a and any(x != a and choice[x] == CONSTANT for x in lhs):
            return "solved", 4
        if a in lhs and rhs != a and choice[rhs] != CONSTANT:
            lhs.discard(a)
            continue
        return "open", Flat(frozenset(lhs), rhs)


def flat_relevant_variables(f: Flat, g: GenericGoal) -> set:
    """Variables whose choice values decide ``simplify`` on ``f``."""
    out = {x for x in f.lhs if x.is_variable}
    if f.rhs.is_variable:
        out.add(f.rhs)
        if g.constant in f.lhs:
            out |= set(g.decompositions.get(f.rhs, {}).values())
    return out


def run_implicit(goal: Goal, g: GenericGoal) -> ImplicitOutcome:
    """Critical checks and simplification of every unsolved flat.

    All-solved goals yield the unifier built from the choice and the
    increasing subsumptions.
    """
    a = goal.constant
    residual = []
    for f in goal.unsolved:
        status, payload = simplify(f, a, goal.choice, g)
        if status == "failed":
            return ImplicitOutcome("failed", goal, rule=payload, culprit=f)
        if status == "open":
            residual.append(payload)
    out = Goal(a, goal.choice, residual, goal.increasing, goal.starts)
    if not residual:
        return ImplicitOutcome("solved", out, unifier=construct_unifier(g, goal.choice))
    return ImplicitOutcome("residual", out)


def construct_unifier(g: GenericGoal, choice: Mapping) -> dict:
    """Unifier conforming to the choice once no flat is left unsolved.

    Variables are visited children first: ⊤ for TOP, the constant for
    CONSTANT, plus ``∀r.P`` for every ``P`` of a decomposition ``X^r``.
    """
    a = Particle((), g.constant)
    gamma: dict = {}
    for x in reversed(g.variables):
        if choice[x] == TOP:
            gamma[x] = TOP_CONCEPT
            continue
        parts = {a} if choice[x] == CONSTANT else set()
        for r, child in g.decompositions.get(x, {}).items():
            parts |= {p.prefixed((r,)) for p in gamma.get(child, TOP_CONCEPT)}
        gamma[x] = frozenset(parts)
    return gamma
