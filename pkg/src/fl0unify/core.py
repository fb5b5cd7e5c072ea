"""FL0 concept algebra.

Concepts are kept in normal form: a frozenset of particles, where a particle
``∀v.A`` is a role word ``v`` applied to a concept name ``A``.  The empty set
is ⊤.  Subsumption between normal forms is plain set inclusion.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union


class Kind(enum.Enum):
    CONSTANT = "constant"
    USER = "user"
    SYSTEM = "system"
    DECOMPOSITION = "decomposition"
    CONSTANT_DECOMPOSITION = "constant_decomposition"


@dataclass(frozen=True)
class Name:
    """A concept name.  Identity is the ``id`` string alone."""

    id: str
    kind: Kind = field(default=Kind.CONSTANT, compare=False)
    parent: Optional["Name"] = field(default=None, compare=False, repr=False)
    role: Optional[str] = field(default=None, compare=False, repr=False)
    constant: Optional["Name"] = field(default=None, compare=False, repr=False)

    @property
    def is_variable(self) -> bool:
        return self.kind is not Kind.CONSTANT

    @property
    def is_constant(self) -> bool:
        return self.kind is Kind.CONSTANT

    def __str__(self) -> str:
        return self.id


def constant(id: str) -> Name:
    return Name(id, Kind.CONSTANT)


def variable(id: str, kind: Kind = Kind.USER) -> Name:
    return Name(id, kind)


def decomposition_variable(parent: Name, role: str) -> Name:
    return Name(f"{parent.id}__d_{role}", Kind.DECOMPOSITION, parent=parent, role=role)


def constant_decomposition_variable(parent: Name, a: Name) -> Name:
    return Name(f"{parent.id}__c_{a.id}", Kind.CONSTANT_DECOMPOSITION, parent=parent, constant=a)


@dataclass(frozen=True)
class Particle:
    word: tuple[str, ...]
    head: Name

    def prefixed(self, word: tuple[str, ...]) -> "Particle":
        return Particle(word + self.word, self.head)

    def __str__(self) -> str:
        if not self.word:
            return self.head.id
        return f"∀{'.'.join(self.word)}.{self.head.id}"


Concept = frozenset  # frozenset[Particle]; the empty set is ⊤
TOP: frozenset = frozenset()


def particle_key(p: Particle) -> tuple:
    return (len(p.word), p.word, p.head.id)


def sorted_particles(c: Iterable[Particle]) -> list[Particle]:
    return sorted(c, key=particle_key)


def render(c: Iterable[Particle]) -> str:
    """Human-readable rendering, e.g. ``A ⊓ ∀r.A``."""
    ps = sorted_particles(c)
    return " ⊓ ".join(str(p) for p in ps) if ps else "⊤"


# --- concept syntax trees -------------------------------------------------

@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Atom:
    name: Name


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class All:
    role: str
    body: object


Tree = Union[Top, Atom, And, All]


def normalize(tree: Tree) -> frozenset:
    """Distribute value restrictions over conjunction and drop ⊤."""
    if isinstance(tree, Top):
        return TOP
    if isinstance(tree, Atom):
        return frozenset([Particle((), tree.name)])
    if isinstance(tree, And):
        out: set = set()
        for arg in tree.args:
            out |= normalize(arg)
        return frozenset(out)
    if isinstance(tree, All):
        return frozenset(p.prefixed((tree.role,)) for p in normalize(tree.body))
    raise TypeError(f"not a concept tree: {tree!r}")


def particle_tree(p: Particle) -> Tree:
    t: Tree = Atom(p.head)
    for r in reversed(p.word):
        t = All(r, t)
    return t


def to_tree(c: Iterable[Particle]) -> Tree:
    ps = sorted_particles(c)
    if not ps:
        return Top()
    if len(ps) == 1:
        return particle_tree(ps[0])
    return And(tuple(particle_tree(p) for p in ps))


def concept(*particles: Union[str, Particle, Name], names: Optional[Mapping[str, Name]] = None) -> frozenset:
    """Build a normal form from compact particle strings like ``"r.s.A"``.

    Convenience for tests and scripts; a head ending in ``_var`` is a user
    variable unless ``names`` says otherwise.
    """
    out = []
    for p in particles:
        if isinstance(p, Particle):
            out.append(p)
        elif isinstance(p, Name):
            out.append(Particle((), p))
        else:
            *word, head = p.split(".")
            if names and head in names:
                n = names[head]
            else:
                n = variable(head) if head.endswith("_var") else constant(head)
            out.append(Particle(tuple(word), n))
    return frozenset(out)


# --- operations -----------------------------------------------------------

def subsumes(c: frozenset, d: frozenset) -> bool:
    """``c ⊑ d`` for reduced normal forms: every particle of d occurs in c."""
    return d <= c


def restrict_to_constant(c: Iterable[Particle], a: Name, keep_variables: bool = False) -> frozenset:
    """Drop particles whose head is a constant other than ``a``.

    Without ``keep_variables`` variable-headed particles are dropped too, which
    is the ground form used to decide subsumption one constant at a time.
    """
    return frozenset(
        p for p in c if p.head == a or (keep_variables and p.head.is_variable)
    )


Substitution = dict  # dict[Name, frozenset[Particle]]


def apply(sigma: Mapping[Name, frozenset], c: Iterable[Particle]) -> frozenset:
    """Apply a substitution; unmapped variables are read as ⊤."""
    out: set = set()
    for p in c:
        if p.head.is_variable:
            for q in sigma.get(p.head, TOP):
                out.add(q.prefixed(p.word))
        else:
            out.add(p)
    return frozenset(out)


@dataclass(frozen=True)
class GoalSubsumption:
    """``lhs ⊑? rhs`` with a single particle (or ⊤ as ``None``) on the right."""

    lhs: frozenset
    rhs: Optional[Particle]

    @property
    def rhs_concept(self) -> frozenset:
        return TOP if self.rhs is None else frozenset([self.rhs])

    def __str__(self) -> str:
        return f"{render(self.lhs)} ⊑? {render(self.rhs_concept)}"


def split_goal(lhs: frozenset, rhs: frozenset) -> list[GoalSubsumption]:
    """One goal subsumption per right-hand particle."""
    return [GoalSubsumption(lhs, p) for p in sorted_particles(rhs)]


def verify_unifier(goals: Iterable[GoalSubsumption], sigma: Mapping[Name, frozenset]) -> bool:
    """Independent check that ``sigma`` solves every goal subsumption."""
    for g in goals:
        if not subsumes(apply(sigma, g.lhs), apply(sigma, g.rhs_concept)):
            return False
    return True


def failing_goals(goals: Iterable[GoalSubsumption], sigma: Mapping[Name, frozenset]) -> list[GoalSubsumption]:
    return [g for g in goals if not subsumes(apply(sigma, g.lhs), apply(sigma, g.rhs_concept))]


def variables_of(c: Iterable[Particle]) -> set:
    return {p.head for p in c if p.head.is_variable}


def constants_of(c: Iterable[Particle]) -> set:
    return {p.head for p in c if p.head.is_constant}


def combine(*sigmas: Mapping[Name, frozenset]) -> dict:
    """Per-variable union of particle sets."""
    out: dict = {}
    for s in sigmas:
        for x, c in s.items():
            out[x] = out.get(x, TOP) | c
    return out
