import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fl0unify.choice import CONSTANT, NOTHING, TOP, ChoiceSearch, ContradictoryFix, as_mapping, fix_choices
from fl0unify.core import Particle, constant, verify_unifier
from fl0unify.flatten import Flat, flatten_one, generic_goal
from fl0unify.implicit import build_goal, run_implicit, simplify
from fl0unify.testkit import gen_problem, random_params

A = constant("A")


@pytest.fixture
def g(running_example):
    return generic_goal(flatten_one(running_example), A)


def choose(g, values):
    return dict(zip(g.variables, values))


def test_rule_seven_rejects_choice(g):
    out = run_implicit(build_goal(g, choose(g, (1, 1, 1, 0, 0))), g)
    assert out.verdict == "failed" and out.rule == 7
    assert out.culprit.rhs.id == "X_var__c_A"


def test_residual_goal(g):
    x, xr, xa, y, yr = g.variables
    goal = build_goal(g, choose(g, (1, 1, 1, 1, 0)))
    assert goal.starts == [x, xr, xa, y]
    out = run_implicit(goal, g)
    assert out.verdict == "residual"
    # Y^r is TOP under this choice, so rule 2 drops it from the first flat
    assert set(out.goal.unsolved) == {Flat(frozenset([x]), xr), Flat(frozenset([y]), xa), Flat(frozenset([xr]), y)}


def test_start_counts(g):
    assert build_goal(g, choose(g, (0,) * 5)).starts == []
    assert len(build_goal(g, choose(g, (2, 1, 0, 0, 0))).starts) == 1


def test_individual_rules(g):
    x, xr, xa, y, yr = g.variables
    ch = choose(g, (2, 2, 0, 1, 0))
    assert simplify(Flat(frozenset([x]), xa), A, ch, g) == ("solved", 1)
    assert simplify(Flat(frozenset([yr, x]), xr), A, ch, g) == ("open", Flat(frozenset([x]), xr))
    assert simplify(Flat(frozenset([x, xr]), xr), A, ch, g) == ("solved", 3)
    assert simplify(Flat(frozenset([y]), A), A, ch, g) == ("solved", 4)
    assert simplify(Flat(frozenset([x]), A), A, ch, g) == ("failed", 5)
    assert simplify(Flat(frozenset([A, x]), xr), A, ch, g) == ("open", Flat(frozenset([x]), xr))
    assert simplify(Flat(frozenset(), x), A, ch, g) == ("failed", 8)
    assert simplify(Flat(frozenset([A]), x), A, ch, g) == ("failed", 8)
    # deleting a TOP atom exposes the rule-8 shape ⊤ ⊑ X
    assert simplify(Flat(frozenset([yr]), x), A, ch, g) == ("failed", 8)


def test_rule_eight_checks_decompositions(g):
    x, xr, xa, y, yr = g.variables
    ch = choose(g, (1, 1, 1, 0, 0))
    assert simplify(Flat(frozenset([A]), x), A, ch, g) == ("failed", 8)
    ch = choose(g, (1, 0, 1, 0, 0))
    assert simplify(Flat(frozenset([A]), x), A, ch, g) == ("open", Flat(frozenset([A]), x))


def test_empty_unsolved_builds_conforming_unifier(g):
    x, xr, xa, y, yr = g.variables
    ch = choose(g, (1, 1, 1, 1, 0))
    goal = build_goal(g, ch)
    goal.unsolved = []
    out = run_implicit(goal, g)
    assert out.verdict == "solved"
    gamma = out.unifier
    assert gamma[x] == frozenset([Particle((), A), Particle(("r",), A)])
    assert gamma[yr] == frozenset()


def _conforms(gamma, choice, a):
    """TOP gives ⊤ and CONSTANT exactly the variables holding A.  A NOTHING
    variable without non-⊤ decompositions is left ⊤ by the construction."""
    for x, v in choice.items():
        c = gamma.get(x, frozenset())
        if v == TOP and c:
            return False
        if (v == CONSTANT) != (Particle((), a) in c):
            return False
    return True


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_solved_unifiers_verify_and_conform(seed):
    m = flatten_one(gen_problem(random_params(random.Random(seed))))
    for a in m.constants:
        g = generic_goal(m, a)
        try:
            state = fix_choices(g)
        except ContradictoryFix:
            continue
        for i, choice in enumerate(ChoiceSearch(g, state)):
            if i > 300:
                break
            mapping = as_mapping(state, choice)
            out = run_implicit(build_goal(g, mapping), g)
            if out.verdict == "solved":
                assert verify_unifier(g.goal_subsumptions(), out.unifier)
                assert _conforms(out.unifier, mapping, a)
            elif out.verdict == "residual":
                # residual flats are in normal form: no rule applies any more
                for f in out.goal.unsolved:
                    assert simplify(f, a, mapping, g) == ("open", f)
                    assert len(out.goal.unsolved) <= len(g.flats)
