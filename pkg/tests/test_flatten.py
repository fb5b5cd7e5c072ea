import itertools

from hypothesis import given, settings

from fl0unify.core import GoalSubsumption, Particle, concept, constant, variable
from fl0unify.flatten import Flat, Increasing, flatten_one, flatten_two, generic_goal, split_and_project
from fl0unify.frontend import parse_text
from fl0unify.testkit import GeneratorParams, gen_problem, random_params
from hypothesis import strategies as st

A = constant("A")
X, Y = variable("X_var"), variable("Y_var")


def names_of(g):
    return {x.id: x for x in g.variables} | {"A": g.constant}


def flats(g, *specs):
    """``"X_var__d_r & X_var -> Y_var"`` style flats over the goal's names."""
    n = names_of(g)
    out = set()
    for s in specs:
        lhs, rhs = s.split("->")
        atoms = frozenset(n[t.strip()] for t in lhs.split("&") if t.strip())
        out.add(Flat(atoms, n[rhs.strip()]))
    return out


def test_already_flat_model_is_unchanged():
    m = flatten_one(parse_text("(sub X_var (all r A))"))
    assert m.definitions == [] and m.subsumptions == [(concept("X_var"), concept("r.A"))]


def test_distribution_needs_no_system_variable():
    m = flatten_one(parse_text("(sub (all r (and A B)) A)"))
    assert m.definitions == [] and m.subsumptions == [(concept("r.A", "r.B"), concept("A"))]


def test_system_variables_skip_taken_names():
    m = flatten_one(parse_text("(sub Var0 (all r (all s A)))"))
    assert [v.id for v, _ in m.definitions] == ["Var1"]


def test_every_model_concept_has_depth_at_most_one():
    for seed in range(50):
        m = flatten_one(gen_problem(GeneratorParams(2, 3, 2, 2, 4, seed)))
        for l, r in m.subsumptions + m.equivalences:
            assert all(len(p.word) <= 1 for p in l | r)
        for v, body in m.definitions:
            assert len(body) == 1 and all(len(p.word) == 1 for p in body)


def test_split_and_project_running_example(running_example):
    subs = split_and_project(flatten_one(running_example), A)
    assert len(subs) == 3


def test_split_projects_foreign_constants_and_drops_top():
    src = parse_text("(equiv X_var (all r B))\n(sub A A)\n(sub A B)")
    subs = split_and_project(flatten_one(src), A)
    assert GoalSubsumption(concept("A"), Particle((), A)) in subs
    assert GoalSubsumption(frozenset(), Particle((), X)) in subs
    assert all(s.rhs is not None for s in subs)
    assert len(subs) == 2


def test_generic_goal_running_example(running_example):
    g = generic_goal(flatten_one(running_example), A)
    assert [x.id for x in g.variables] == ["X_var", "X_var__d_r", "X_var__c_A", "Y_var", "Y_var__d_r"]
    assert set(g.flats) == flats(
        g,
        "X_var__d_r -> A",
        "Y_var__d_r & X_var -> X_var__d_r",
        "Y_var -> X_var__c_A",
        "X_var__d_r -> Y_var",
    )
    n = names_of(g)
    assert set(g.increasing) == {
        Increasing(X, "r", n["X_var__d_r"]),
        Increasing(Y, "r", n["Y_var__d_r"]),
    }


def test_rule_three_on_value_restriction():
    g = flatten_two([GoalSubsumption(concept("r.A"), Particle((), X))], A, ["r"])
    assert set(g.flats) == flats(g, "A -> X_var__d_r", " -> X_var__c_A")


def test_already_flat_goal_has_no_increasing():
    goals = [GoalSubsumption(concept("X_var", "A"), Particle((), Y))]
    g = flatten_two(goals, A, ["r"])
    assert g.increasing == [] and g.flats == [Flat(frozenset([X, A]), Y)]


def test_decomposition_variables_are_reused():
    goals = [
        GoalSubsumption(concept("X_var"), Particle(("r",), A)),
        GoalSubsumption(concept("X_var"), Particle(("r", "r"), A)),
    ]
    g = flatten_two(goals, A, ["r"])
    assert len([i for i in g.increasing if i.parent == X]) == 1


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_flattening_weight_strictly_decreases(seed):
    src = gen_problem(random_params(__import__("random").Random(seed)))
    m = flatten_one(src)
    for a in m.constants:
        trace = []
        g = flatten_two(split_and_project(m, a), a, m.roles, trace=trace)
        for before, after in trace:
            assert all(w < before for w in after)
        for f in g.flats:
            assert f.lhs <= set(g.variables) | {a} and f.rhs in set(g.variables) | {a}
        for x in g.variables:
            assert all(c in g.variables for c in g.children(x))
