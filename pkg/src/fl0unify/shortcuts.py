"""Shortcut computation: the exponential phase for a residual goal.

A shortcut is a set of atoms (variables, and the constant only in the
initial shortcut) closed under the unsolved flat subsumptions.  Shortcuts
are admitted round by round once every role of their decomposition
variables is resolved by an earlier shortcut; admitting the initial
shortcut means the goal is unifiable, and the stored resolvers spell out a
unifier.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from .choice import TOP
from .core import TOP as TOP_CONCEPT
from .core import Kind, Name, Particle
from .flatten import Flat, GenericGoal
from .implicit import Goal


@dataclass(eq=False)
class Shortcut:
    members: frozenset  # Names; the constant only in the initial shortcut
    resolvers: dict = field(default_factory=dict)  # role -> Shortcut
    mask: int = 0
    index: int = 0  # admission order
    round: int = 0

    def __repr__(self) -> str:
        names = ",".join(sorted(m.id for m in self.members))
        return f"Shortcut#{self.index}({{{names}}})"


@dataclass
class ShortcutStore:
    computed: list
    good_vars: set
    initial: Shortcut
    rounds: int


def satisfies(members: Iterable[Name], f: Flat) -> bool:
    """If the right side is a member, some left-side atom is a member too."""
    members = set(members)
    return f.rhs not in members or bool(members & f.lhs)


def resolves(s2: Iterable[Name], s1: Iterable[Name], r: str, g: GenericGoal) -> bool:
    """Whether ``s2`` resolves ``s1`` w.r.t. role ``r``."""
    s1, s2 = set(s1), set(s2)
    r_decomps = [y for y in s1 if y.kind is Kind.DECOMPOSITION and y.role == r]
    if not r_decomps:
        return False
    if any(y.parent not in s2 for y in r_decomps):
        return False
    for x in s2:
        xr = g.decompositions.get(x, {}).get(r)
        if xr is not None and xr not in s1:
            return False
    return True


def _popcount(a: np.ndarray) -> np.ndarray:
    out = np.zeros(a.shape, dtype=np.int64)
    b = a.copy()
    while True:
        nz = b != 0
        if not nz.any():
            return out
        out += nz
        b &= b - 1


def _reverse_bits(a: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(a)
    for i in range(n):
        out |= ((a >> i) & 1) << (n - 1 - i)
    return out


class _Universe:
    """Bit layout of the atoms of one residual goal."""

    def __init__(self, goal: Goal, g: GenericGoal):
        self.a = goal.constant
        self.atoms = [x for x in g.variables if goal.choice[x] != TOP]
        self.bit = {x: 1 << i for i, x in enumerate(self.atoms)}
        self.n = len(self.atoms)
        self.a_bit = 1 << self.n
        self.flats = []
        for f in goal.unsolved:
            lhs = 0
            for x in f.lhs:
                lhs |= self.a_bit if x == self.a else self.bit[x]
            rhs = self.a_bit if f.rhs == self.a else self.bit[f.rhs]
            self.flats.append((lhs, rhs))
        self.base = 0  # atoms that are not decomposition variables
        self.decomp_role: dict = {}  # bit -> role
        self.decomp_parent: dict = {}  # bit -> parent bit
        self.role_decomps: dict = {r: 0 for r in g.roles}
        self.has_role: dict = {r: 0 for r in g.roles}  # X with X^r defined (any value)
        self.child_of: dict = {r: {} for r in g.roles}  # X bit -> X^r bit (if X^r in universe)
        for x in self.atoms:
            b = self.bit[x]
            if x.kind is Kind.DECOMPOSITION:
                self.decomp_role[b] = x.role
                self.decomp_parent[b] = self.bit[x.parent]
                self.role_decomps[x.role] |= b
            else:
                self.base |= b
            for r, child in g.decompositions.get(x, {}).items():
                self.has_role[r] |= b
                if child in self.bit:
                    self.child_of[r][b] = self.bit[child]
        self.initial = self.a_bit
        for x in goal.starts:
            self.initial |= self.bit[x]

    def ok(self, mask: int) -> bool:
        for lhs, rhs in self.flats:
            if mask & rhs and not mask & lhs:
                return False
        return True

    def members(self, mask: int) -> frozenset:
        out = {x for x in self.atoms if mask & self.bit[x]}
        if mask & self.a_bit:
            out.add(self.a)
        return frozenset(out)

    def roles_of(self, mask: int) -> list:
        return [r for r, m in self.role_decomps.items() if mask & m]

    def need(self, mask: int, r: str) -> int:
        out = 0
        m = mask & self.role_decomps[r]
        while m:
            low = m & -m
            out |= self.decomp_parent[low]
            m ^= low
        return out

    def forbidden(self, mask: int, r: str) -> int:
        """Atoms that may not sit in a resolver of ``mask`` for role ``r``."""
        allowed = 0
        for xb, cb in self.child_of[r].items():
            if mask & cb:
                allowed |= xb
        return self.has_role[r] & ~allowed

    def shortcut_masks(self) -> np.ndarray:
        """All nonempty shortcuts over the variables, in admission order:
        by size, then lexicographically by atom position.

        Subsets are grown one atom at a time; a flat is checked as soon as
        its last atom is decided, so only satisfying prefixes survive.
        """
        n = self.n
        if n == 0:
            return np.zeros(0, dtype=np.int64)
        if n > 62:
            raise MemoryError(f"shortcut universe of {n} atoms is too large")
        checks_at: dict = {}
        for lhs, rhs in self.flats:
            lhs &= ~self.a_bit
            last = (lhs | rhs).bit_length() - 1
            checks_at.setdefault(last, []).append((lhs, rhs))
        masks = np.zeros(1, dtype=np.int64)
        for i in range(n):
            masks = np.concatenate([masks, masks | np.int64(1 << i)])
            for lhs, rhs in checks_at.get(i, ()):
                masks = masks[((masks & rhs) == 0) | ((masks & lhs) != 0)]
        masks = masks[masks != 0]
        order = np.lexsort((-_reverse_bits(masks, n), _popcount(masks)))
        return masks[order]


def _initial_position(masks: np.ndarray, u: _Universe) -> int:
    """Index in ``masks`` before which the initial shortcut is tried.

    The constant counts as the last atom, so the initial shortcut comes
    after every same-size shortcut whose atoms sort before its own.  With
    bits reversed, "sorts before" is "numerically larger".
    """
    if masks.size == 0:
        return 0
    size = bin(u.initial).count("1")
    key_init = _reverse_bits(np.array([u.initial], dtype=np.int64), u.n + 1)[0]
    keys = _reverse_bits(masks, u.n) << 1
    pop = _popcount(masks)
    after = (pop > size) | ((pop == size) & (keys < key_init))
    return int(np.argmax(after)) if after.any() else len(masks)


def compute(goal: Goal, g: GenericGoal, max_rounds: Optional[int] = None) -> Optional[ShortcutStore]:
    """Grow the set of resolved shortcuts until the initial one appears.

    Returns None when a round admits nothing new.
    """
    u = _Universe(goal, g)
    masks = u.shortcut_masks()
    init_at = _initial_position(masks, u)
    computed: list = []
    admitted = set()
    covered = 0  # union of admitted shortcuts, for good variables
    good = 0
    rnd = 0

    def resolver_for(mask: int, r: str) -> Optional[Shortcut]:
        need = u.need(mask, r)
        forb = u.forbidden(mask, r)
        for s in computed:
            if s.mask & need == need and not s.mask & forb:
                return s
        return None

    def try_admit(mask: int) -> Optional[Shortcut]:
        nonlocal covered
        resolvers = {}
        for r in u.roles_of(mask):
            s = resolver_for(mask, r)
            if s is None:
                return None
            resolvers[r] = s
        sc = Shortcut(u.members(mask), resolvers, mask, len(computed), rnd)
        computed.append(sc)
        admitted.add(mask)
        covered |= mask
        return sc

    def try_initial() -> Optional[Shortcut]:
        if u.initial in admitted or (u.initial & ~u.a_bit) & ~allowed:
            return None
        if not u.ok(u.initial):
            return None
        return try_admit(u.initial)

    while True:
        if max_rounds is not None and rnd >= max_rounds:
            return None
        allowed = u.base | good
        added = 0
        initial_tried = False
        for j in np.flatnonzero((masks & ~allowed) == 0).tolist():
            if j >= init_at and not initial_tried:
                initial_tried = True
                sc = try_initial()
                if sc is not None:
                    return ShortcutStore(computed, _good_names(u, good), sc, rnd)
            m = int(masks[j])
            if m in admitted:
                continue
            if try_admit(m) is not None:
                added += 1
        if not initial_tried:
            sc = try_initial()
            if sc is not None:
                return ShortcutStore(computed, _good_names(u, good), sc, rnd)
        if not added:
            return None
        new_good = 0
        for b, pb in u.decomp_parent.items():
            if covered & pb:
                new_good |= b
        good |= new_good
        rnd += 1


def _good_names(u: _Universe, good: int) -> set:
    return {x for x in u.atoms if good & u.bit[x]}


def extract_unifier(store: ShortcutStore, goal: Goal, g: GenericGoal) -> dict:
    """Walk the resolver links from the initial shortcut, assigning the
    constant there and ``∀r.P`` to the resolver of a shortcut holding ``P``."""
    a = Particle((), goal.constant)
    gamma = {x: set() for x in g.variables}
    seen = set()
    stack = [(store.initial, a)]
    while stack:
        sc, p = stack.pop()
        if (sc.index, p) in seen:
            continue
        seen.add((sc.index, p))
        for x in sc.members:
            if x.is_variable:
                gamma[x].add(p)
        for r, res in sc.resolvers.items():
            stack.append((res, p.prefixed((r,))))
    return {x: frozenset(ps) for x, ps in gamma.items()}


def satisfies_decreasing(gamma: dict, g: GenericGoal) -> bool:
    """{P | ∀r.P ∈ γ(X)} ⊆ γ(X^r) for every defined decomposition."""
    for x, table in g.decompositions.items():
        for r, child in table.items():
            tail = {Particle(p.word[1:], p.head) for p in gamma.get(x, TOP_CONCEPT) if p.word[:1] == (r,)}
            if not tail <= gamma.get(child, TOP_CONCEPT):
                return False
    return True
