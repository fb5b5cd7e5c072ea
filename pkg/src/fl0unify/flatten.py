"""Flattening I (abstraction of nested value restrictions with system
variables) and flattening II (per-constant generic goal with decomposition
variables and increasing subsumptions).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import (
    TOP,
    GoalSubsumption,
    Kind,
    Name,
    Particle,
    constant_decomposition_variable,
    decomposition_variable,
    normalize,
    render,
    restrict_to_constant,
    sorted_particles,
    split_goal,
)
from .frontend import ProblemSource


@dataclass
class FlatModel:
    """Problem after flattening I; every particle has role depth <= 1."""

    subsumptions: list = field(default_factory=list)  # (lhs, rhs) normal forms
    equivalences: list = field(default_factory=list)  # (lhs, rhs) normal forms
    definitions: list = field(default_factory=list)  # (system variable, body)
    roles: list = field(default_factory=list)
    constants: list = field(default_factory=list)
    user_variables: list = field(default_factory=list)
    system_variables: list = field(default_factory=list)

    def goals(self) -> list:
        """All constraints as particle goal subsumptions (no projection)."""
        return split_and_project(self, None)

    def describe(self) -> str:
        lines = [f"{render(l)} ⊑ {render(r)}" for l, r in self.subsumptions]
        lines += [f"{render(l)} ≡ {render(r)}" for l, r in self.equivalences]
        lines += [f"{v.id} ≡ {render(b)}" for v, b in self.definitions]
        return "\n".join(lines)


def flatten_one(src: ProblemSource) -> FlatModel:
    """Distribute value restrictions and abstract every particle of depth > 1.

    ``∀r1.r2...rk.A`` becomes ``∀r1.V1`` with fresh definitions
    ``V1 ≡ ∀r2.V2``, ..., ``V(k-1) ≡ ∀rk.A``.  Definitions are never shared
    between occurrences.
    """
    taken = set(src.names)
    model = FlatModel(roles=list(src.roles))
    counter = 0

    def fresh() -> Name:
        nonlocal counter
        while f"Var{counter}" in taken:
            counter += 1
        v = Name(f"Var{counter}", Kind.SYSTEM)
        counter += 1
        model.system_variables.append(v)
        return v

    def chain(word: tuple, head: Name) -> Name:
        v = fresh()
        slot = len(model.definitions)
        model.definitions.append(None)
        inner = head if len(word) == 1 else chain(word[1:], head)
        model.definitions[slot] = (v, frozenset([Particle(word[:1], inner)]))
        return v

    def abstract(c: frozenset) -> frozenset:
        out = set()
        for p in sorted_particles(c):
            if len(p.word) <= 1:
                out.add(p)
            else:
                out.add(Particle(p.word[:1], chain(p.word[1:], p.head)))
        return frozenset(out)

    for ax in src.axioms:
        lhs = abstract(normalize(ax.lhs))
        rhs = abstract(normalize(ax.rhs))
        (model.equivalences if ax.kind == "equiv" else model.subsumptions).append((lhs, rhs))

    model.constants = [n for n in src.names.values() if n.is_constant]
    model.user_variables = [n for n in src.names.values() if n.is_variable]
    return model


def split_and_project(model: FlatModel, a: Optional[Name]) -> list:
    """Split every constraint into goals with one particle on the right.

    With a constant ``a``, every other constant is replaced by ⊤ and goals
    whose right side became ⊤ are dropped.
    """
    pairs = list(model.subsumptions)
    for l, r in model.equivalences:
        pairs += [(l, r), (r, l)]
    for v, body in model.definitions:
        var = frozenset([Particle((), v)])
        pairs += [(var, body), (body, var)]
    out = []
    for lhs, rhs in pairs:
        if a is not None:
            lhs = restrict_to_constant(lhs, a, keep_variables=True)
            rhs = restrict_to_constant(rhs, a, keep_variables=True)
        out.extend(split_goal(lhs, rhs))
    return out


# --- flattening II -------------------------------------------------------------

@dataclass(frozen=True)
class Flat:
    """``Y1 ⊓ ... ⊓ Yn ⊑? X`` over variables and the current constant."""

    lhs: frozenset
    rhs: Name

    def __str__(self) -> str:
        left = " ⊓ ".join(sorted(n.id for n in self.lhs)) or "⊤"
        return f"{left} ⊑? {self.rhs.id}"


@dataclass(frozen=True)
class Increasing:
    """``parent ⊑ ∀role.child``."""

    parent: Name
    role: str
    child: Name

    def __str__(self) -> str:
        return f"{self.parent.id} ⊑? ∀{self.role}.{self.child.id}"


@dataclass
class GenericGoal:
    constant: Name
    flats: list
    increasing: list
    variables: list  # lineage preorder: every parent directly followed by its subtree
    roles: list
    decompositions: dict = field(default_factory=dict)  # parent -> {role: child}
    constant_decompositions: dict = field(default_factory=dict)  # parent -> X_A

    def children(self, x: Name) -> list:
        out = list(self.decompositions.get(x, {}).values())
        if x in self.constant_decompositions:
            out.append(self.constant_decompositions[x])
        return out

    def goal_subsumptions(self) -> list:
        """Flats and increasing subsumptions as goals for the verifier."""
        out = [
            GoalSubsumption(frozenset(Particle((), n) for n in f.lhs), Particle((), f.rhs))
            for f in self.flats
        ]
        out += [
            GoalSubsumption(frozenset([Particle((), inc.parent)]), Particle((inc.role,), inc.child))
            for inc in self.increasing
        ]
        return out

    def describe(self) -> str:
        lines = [f"generic goal for {self.constant.id}: {len(self.variables)} variables"]
        lines += [f"  flat {f}" for f in self.flats]
        lines += [f"  increasing {i}" for i in self.increasing]
        return "\n".join(lines)


def weight(lhs: Iterable[Particle], rhs: Optional[Particle]) -> int:
    """Total role-word length; every flattening step strictly lowers it."""
    return sum(len(p.word) for p in lhs) + (len(rhs.word) if rhs is not None else 0)


def flatten_two(
    subs: Iterable[GoalSubsumption],
    a: Name,
    roles: Optional[Iterable[str]] = None,
    trace: Optional[list] = None,
) -> GenericGoal:
    """Rewrite goals over the single constant ``a`` into a generic goal.

    ``roles`` defaults to the roles occurring in ``subs``.  If ``trace`` is a
    list, one ``(weight before, [weights after])`` entry is appended per rule
    application.
    """
    subs = list(subs)
    if roles is None:
        found: list = []
        for s in subs:
            for p in sorted_particles(s.lhs | s.rhs_concept):
                for r in p.word:
                    if r not in found:
                        found.append(r)
        roles = found
    roles = list(roles)

    decompositions: dict = {}
    constant_decompositions: dict = {}
    increasing: list = []
    roots: list = []

    def note_root(n: Name) -> None:
        if n.is_variable and n not in roots:
            roots.append(n)

    for s in subs:
        for p in sorted_particles(s.lhs):
            note_root(p.head)
        if s.rhs is not None:
            note_root(s.rhs.head)

    def decomp(x: Name, r: str) -> Name:
        table = decompositions.setdefault(x, {})
        if r not in table:
            child = decomposition_variable(x, r)
            table[r] = child
            increasing.append(Increasing(x, r, child))
        return table[r]

    def minus_r(p: Particle, r: str) -> Optional[Particle]:
        if not p.word:
            return Particle((), decomp(p.head, r)) if p.head.is_variable else None
        if p.word[0] == r:
            return Particle(p.word[1:], p.head)
        return None

    def minus_r_lhs(lhs: frozenset, r: str) -> frozenset:
        return frozenset(q for q in (minus_r(p, r) for p in sorted_particles(lhs)) if q is not None)

    def project(lhs: frozenset) -> frozenset:
        return frozenset(p for p in lhs if not p.word and (p.head == a or p.head.is_variable))

    flats: dict = {}
    queue = deque((s.lhs, s.rhs) for s in subs)
    while queue:
        lhs, rhs = queue.popleft()
        if rhs is None:
            continue
        if rhs.head.is_constant and rhs.head != a:
            raise ValueError(f"constant {rhs.head.id} occurs in a goal projected to {a.id}")
        if rhs.word:
            r = rhs.word[0]
            new = [(minus_r_lhs(lhs, r), Particle(rhs.word[1:], rhs.head))]
        elif not any(p.word for p in lhs):
            flat = Flat(frozenset(p.head for p in lhs if p.head == a or p.head.is_variable), rhs.head)
            flats.setdefault(flat, None)
            continue
        elif rhs.head == a:
            new = [(project(lhs), rhs)]
        else:
            x = rhs.head
            new = [(minus_r_lhs(lhs, r), Particle((), decomp(x, r))) for r in roles]
            if x not in constant_decompositions:
                xa = constant_decomposition_variable(x, a)
                constant_decompositions[x] = xa
            new.append((project(lhs), Particle((), constant_decompositions[x])))
        if trace is not None:
            trace.append((weight(lhs, rhs), [weight(l, r) for l, r in new]))
        queue.extend(new)

    flat_list = list(flats)
    occurring = set()
    for f in flat_list:
        occurring |= {n for n in f.lhs | {f.rhs} if n.is_variable}
    for inc in increasing:
        occurring |= {inc.parent, inc.child}

    order: list = []

    def visit(x: Name) -> None:
        if x in occurring:
            order.append(x)
        for child in decompositions.get(x, {}).values():
            visit(child)
        if x in constant_decompositions:
            visit(constant_decompositions[x])

    for x in roots:
        visit(x)

    return GenericGoal(a, flat_list, increasing, order, roles, decompositions, constant_decompositions)


def generic_goal(model: FlatModel, a: Name) -> GenericGoal:
    return flatten_two(split_and_project(model, a), a, model.roles)
