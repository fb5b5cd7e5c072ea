import pytest
from hypothesis import given

from fl0unify.core import All, And, Atom, Kind, Top, normalize
from fl0unify.frontend import (
    FluSyntaxError, InvalidName, UnsupportedConstructor, parse_axiom_subset, parse_file,
    parse_text, render_flu, render_solution, substitution_from_source,
)
from fl0unify.testkit import GeneratorParams, gen_problem
from strategies import trees, CONSTANTS, VARIABLES
from hypothesis import strategies as st


def test_simple_subsumption():
    src = parse_text(b"(sub X_var (all r A))")
    (ax,) = src.axioms
    assert ax.kind == "sub"
    assert src.names["X_var"].kind is Kind.USER
    assert src.names["A"].kind is Kind.CONSTANT
    assert src.roles == ["r"]
    assert ax.rhs == All("r", Atom(src.names["A"]))


def test_equivalence_with_top():
    src = parse_text("(equiv (and A B) top)")
    (ax,) = src.axioms
    assert ax.kind == "equiv" and ax.rhs == Top()
    assert [c.id for c in src.constants] == ["A", "B"]


def test_existential_is_rejected():
    with pytest.raises(UnsupportedConstructor):
        parse_text("(sub (some r A) B)")


@pytest.mark.parametrize("text", ["(sub A", "(sub A B C)", "(and A B)", "(sub (all r) A)", "(sub (and A) B)", "sub A B"])
def test_malformed_input(text):
    with pytest.raises(FluSyntaxError):
        parse_text(text)


def test_syntax_error_position():
    with pytest.raises(FluSyntaxError) as e:
        parse_text("(sub A B)\n(sub A")
    assert e.value.line == 2


def test_variable_role_is_rejected():
    with pytest.raises(InvalidName):
        parse_text("(sub (all r_var A) A)")


def test_comments_roles_and_duplicates():
    src = parse_text("; header\n(roles s r)\n(sub A B) ; tail\n(sub A B)\n")
    assert src.roles == ["s", "r"]
    assert len(src.axioms) == 2


def test_suffix_is_case_sensitive():
    src = parse_text("(sub X_VAR X_var)")
    assert src.names["X_VAR"].is_constant and src.names["X_var"].is_variable


def test_ofn_subset():
    src = parse_axiom_subset("SubClassOf(X_var ObjectAllValuesFrom(r A))\nEquivalentClasses(A owl:Thing)\n")
    assert src == parse_text("(sub X_var (all r A))\n(equiv A top)")


def test_ofn_rejects_existential():
    with pytest.raises(UnsupportedConstructor):
        parse_axiom_subset("SubClassOf(ObjectSomeValuesFrom(r A) B)")


def test_ofn_and_flu_fixtures_agree(data):
    for stem in ["running_example", "nested_equivalence", "two_constants_cycle"]:
        assert parse_file(data / f"{stem}.flu") == parse_file(data / f"{stem}.ofn")


@given(st.lists(st.tuples(st.sampled_from(["sub", "equiv"]), trees(CONSTANTS + VARIABLES), trees(CONSTANTS + VARIABLES)), min_size=1, max_size=3))
def test_render_round_trip(axioms):
    def render(t):
        if isinstance(t, Top):
            return "top"
        if isinstance(t, Atom):
            return t.name.id
        if isinstance(t, And):
            return "(and " + " ".join(render(a) for a in t.args) + ")"
        return f"(all {t.role} {render(t.body)})"

    text = "".join(f"({k} {render(l)} {render(r)})\n" for k, l, r in axioms)
    src = parse_text(text)
    assert parse_text(render_flu(src)) == src
    assert [(a.kind, normalize(a.lhs), normalize(a.rhs)) for a in src.axioms] == \
        [(k, normalize(l), normalize(r)) for k, l, r in axioms]


def test_generated_problems_round_trip():
    for seed in range(100):
        src = gen_problem(GeneratorParams(2, 3, 2, 2, 4, seed))
        assert parse_text(render_flu(src)) == src


def test_kind_toggles_with_suffix_only():
    a = parse_text("(sub (all r Foo) Bar)")
    b = parse_text("(sub (all r Foo_var) Bar)")
    assert a.names["Foo"].is_constant and b.names["Foo_var"].is_variable
    assert a.roles == b.roles and len(a.axioms) == len(b.axioms)


def test_solution_round_trip(running_example):
    sol = parse_text("(equiv X_var (and A (all r A)))\n(equiv Y_var A)\n")
    sigma = substitution_from_source(sol)
    again = substitution_from_source(parse_text(render_solution(sigma)))
    assert again == sigma
