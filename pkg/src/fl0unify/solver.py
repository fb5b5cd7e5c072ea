"""Main loop: one generic goal per constant, choice enumeration, Implicit
Solver, shortcuts, and the final verification of the combined unifier."""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .choice import ChoiceSearch, ContradictoryFix, as_mapping, choice_string, fix_choices
from .core import TOP, Name, combine, failing_goals, normalize, split_goal, verify_unifier
from .flatten import FlatModel, flatten_one, generic_goal, split_and_project
from .frontend import ProblemSource
from .implicit import build_goal, flat_relevant_variables, run_implicit, simplify
from .shortcuts import compute, extract_unifier

log = logging.getLogger("fl0unify")


class VerificationFailure(Exception):
    """A unifier produced by the solver failed the independent check."""


@dataclass
class Statistics:
    max_variables: int = 0
    preprocessing_decided: int = 0
    shortcut_phases: int = 0
    elapsed_ms: float = 0.0
    constants_processed: list = field(default_factory=list)

    def add(self, other: "Statistics") -> None:
        self.max_variables = max(self.max_variables, other.max_variables)
        self.preprocessing_decided += other.preprocessing_decided
        self.shortcut_phases += other.shortcut_phases
        self.constants_processed += other.constants_processed

    def counters(self) -> dict:
        """Everything except timing; identical across reruns."""
        return {
            "max_variables": self.max_variables,
            "preprocessing_decided": self.preprocessing_decided,
            "shortcut_phases": self.shortcut_phases,
            "constants_processed": [a.id for a in self.constants_processed],
        }


@dataclass
class SolveResult:
    unifiable: bool
    substitution: Optional[dict]  # every variable of the flat model
    stats: Statistics
    model: FlatModel
    failed_constant: Optional[Name] = None
    auxiliary: dict = field(default_factory=dict)  # decomposition variables of the generic goals

    @property
    def user_substitution(self) -> Optional[dict]:
        if self.substitution is None:
            return None
        return {x: self.substitution.get(x, TOP) for x in self.model.user_variables}


def original_goals(src: ProblemSource) -> list:
    """The input axioms as particle goal subsumptions."""
    out = []
    for ax in src.axioms:
        lhs, rhs = normalize(ax.lhs), normalize(ax.rhs)
        out += split_goal(lhs, rhs)
        if ax.kind == "equiv":
            out += split_goal(rhs, lhs)
    return out


def solve_for_constant(model: FlatModel, a: Name, stats: Optional[Statistics] = None) -> Optional[dict]:
    """Search a unifier of the problem projected to constant ``a``."""
    stats = stats if stats is not None else Statistics()
    stats.constants_processed.append(a)
    g = generic_goal(model, a)
    stats.max_variables = max(stats.max_variables, len(g.variables))
    log.info("constant %s: generic goal with %d variables, %d flat and %d increasing subsumptions",
             a.id, len(g.variables), len(g.flats), len(g.increasing))
    if log.isEnabledFor(logging.DEBUG):
        log.debug("%s", g.describe())
    try:
        state = fix_choices(g)
    except ContradictoryFix as exc:
        log.info("constant %s: fixing rules contradict (%s)", a.id, exc)
        return None
    log.info("constant %s: %d fixed, %d binary, %d ternary variables (%d choices)",
             a.id, len(state.fixed), len(state.binary), len(state.ternary), state.size)

    def flat_check(f):
        return lambda values: simplify(f, a, values, g)[0] != "failed"

    constraints = [(flat_relevant_variables(f, g), flat_check(f)) for f in g.flats]
    search = ChoiceSearch(g, state, constraints)
    decided = 0
    try:
        for choice in search:
            mapping = as_mapping(state, choice)
            if log.isEnabledFor(logging.DEBUG):
                log.debug("choice %s", choice_string(state, choice))
            outcome = run_implicit(build_goal(g, mapping), g)
            if outcome.verdict == "solved":
                decided += 1
                log.info("constant %s: solved by the Implicit Solver at choice %s", a.id, choice_string(state, choice))
                return outcome.unifier
            if outcome.verdict == "failed":
                decided += 1
                continue
            stats.shortcut_phases += 1
            store = compute(outcome.goal, g)
            if store is not None:
                log.info("constant %s: initial shortcut computed at choice %s (%d shortcuts)",
                         a.id, choice_string(state, choice), len(store.computed))
                return extract_unifier(store, outcome.goal, g)
            log.debug("shortcuts failed")
        log.info("constant %s: no choice leads to a unifier", a.id)
        return None
    finally:
        stats.preprocessing_decided += decided + search.pruned


def _constant_worker(args):
    model, a = args
    stats = Statistics()
    return solve_for_constant(model, a, stats), stats


def solve(src: ProblemSource, parallel: bool = False) -> SolveResult:
    """Decide unifiability; a positive answer carries a verified unifier."""
    t0 = time.perf_counter()
    model = flatten_one(src)
    stats = Statistics()
    variables = list(model.user_variables) + list(model.system_variables)
    constants = sorted(model.constants, key=lambda n: n.id)

    def finish(result: SolveResult) -> SolveResult:
        result.stats.elapsed_ms = (time.perf_counter() - t0) * 1000.0
        return result

    if not constants:
        gamma = {x: TOP for x in variables}
        _check(src, model, gamma)
        return finish(SolveResult(True, gamma, stats, model))

    parts = []
    if parallel and len(constants) > 1:
        with ProcessPoolExecutor() as pool:
            results = list(pool.map(_constant_worker, [(model, a) for a in constants]))
        for a, (part, st) in zip(constants, results):
            stats.add(st)
            if part is None:
                return finish(SolveResult(False, None, stats, model, failed_constant=a))
            parts.append((a, part))
    else:
        for a in constants:
            part = solve_for_constant(model, a, stats)
            if part is None:
                return finish(SolveResult(False, None, stats, model, failed_constant=a))
            parts.append((a, part))

    for a, part in parts:
        projected = split_and_project(model, a)
        bad = failing_goals(projected, part)
        if bad:
            raise VerificationFailure(f"unifier for constant {a.id} violates {bad[0]}")
    combined = combine({x: TOP for x in variables}, *(p for _, p in parts))
    keep = set(variables)
    gamma = {x: c for x, c in combined.items() if x in keep}
    aux = {x: c for x, c in combined.items() if x not in keep}
    _check(src, model, gamma)
    return finish(SolveResult(True, gamma, stats, model, auxiliary=aux))


def _check(src: ProblemSource, model: FlatModel, gamma: dict) -> None:
    if not verify_unifier(model.goals(), gamma):
        bad = failing_goals(model.goals(), gamma)
        raise VerificationFailure(f"combined unifier violates {bad[0]}")
    user = {x: gamma.get(x, TOP) for x in model.user_variables}
    if not verify_unifier(original_goals(src), user):
        bad = failing_goals(original_goals(src), user)
        raise VerificationFailure(f"unifier restricted to user variables violates {bad[0]}")
