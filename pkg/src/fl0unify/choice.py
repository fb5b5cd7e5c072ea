"""Choice tables: every variable of a generic goal is guessed to be ⊤
(TOP), to contain the constant (CONSTANT), or neither (NOTHING)."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from .core import Kind, Name
from .flatten import GenericGoal


class ChoiceValue(enum.IntEnum):
    TOP = 0
    CONSTANT = 1
    NOTHING = 2


TOP, CONSTANT, NOTHING = ChoiceValue.TOP, ChoiceValue.CONSTANT, ChoiceValue.NOTHING
ALL_VALUES = frozenset(ChoiceValue)


class ContradictoryFix(Exception):
    """The fixing rules force a variable to two different values."""

    def __init__(self, var: Name):
        self.var = var
        super().__init__(f"no admissible choice value for {var.id}")


@dataclass
class ChoiceState:
    variables: list  # all variables, registry order
    fixed: dict = field(default_factory=dict)  # var -> ChoiceValue
    binary: dict = field(default_factory=dict)  # var -> (low, high)
    ternary: list = field(default_factory=list)

    @property
    def digits(self) -> list:
        """Enumeration digits, most significant first: ternary, then binary."""
        return list(self.ternary) + list(self.binary)

    def domain(self, x: Name) -> tuple:
        if x in self.fixed:
            return (self.fixed[x],)
        if x in self.binary:
            return self.binary[x]
        return (TOP, CONSTANT, NOTHING)

    @property
    def size(self) -> int:
        return 2 ** len(self.binary) * 3 ** len(self.ternary)


Choice = tuple  # ChoiceValue per variable, aligned with ChoiceState.variables


def as_mapping(state: ChoiceState, choice: Sequence) -> dict:
    return dict(zip(state.variables, choice))


def fix_choices(g: GenericGoal) -> ChoiceState:
    """Apply the six fixing rules to a fixpoint.

    Raises ContradictoryFix when some variable is left without a value.
    """
    a = g.constant
    dom = {x: set(ALL_VALUES) for x in g.variables}

    def narrow(x: Name, allowed: Iterable) -> bool:
        before = len(dom[x])
        dom[x] &= set(allowed)
        if not dom[x]:
            raise ContradictoryFix(x)
        return len(dom[x]) != before

    for f in g.flats:
        if not f.lhs and f.rhs.is_variable:
            narrow(f.rhs, {TOP})
        if f.lhs == {a} and f.rhs.is_variable:
            narrow(f.rhs, {TOP, CONSTANT})
        if f.rhs == a and len(f.lhs) == 1:
            (x,) = f.lhs
            if x.is_variable:
                narrow(x, {CONSTANT})

    changed = True
    while changed:
        changed = False
        for x in g.variables:
            children = g.children(x)
            xa = g.constant_decompositions.get(x)
            if dom[x] == {TOP}:
                for c in children:
                    changed |= narrow(c, {TOP})
            if xa is not None and len(dom[x]) == 1 and dom[x] != {CONSTANT}:
                changed |= narrow(xa, {TOP})
            if xa is not None and dom[xa] == {TOP}:
                changed |= narrow(x, {TOP, NOTHING})

    state = ChoiceState(list(g.variables))
    for x in g.variables:
        d = sorted(dom[x])
        if len(d) == 1:
            state.fixed[x] = d[0]
        elif len(d) == 2:
            state.binary[x] = tuple(d)
        else:
            state.ternary.append(x)
    return state


def _assemble(state: ChoiceState, digit_values: Sequence) -> Choice:
    values = dict(state.fixed)
    values.update(zip(state.digits, digit_values))
    return tuple(values[x] for x in state.variables)


def first_choice(state: ChoiceState) -> Choice:
    return _assemble(state, [state.domain(x)[0] for x in state.digits])


def next_choice(state: ChoiceState, current: Sequence) -> Optional[Choice]:
    """Lexicographic successor (binary digits move fastest); None when exhausted."""
    cur = as_mapping(state, current)
    digits = state.digits
    vals = [cur[x] for x in digits]
    for i in range(len(digits) - 1, -1, -1):
        d = state.domain(digits[i])
        k = d.index(vals[i])
        if k + 1 < len(d):
            vals[i] = d[k + 1]
            return _assemble(state, vals)
        vals[i] = d[0]
    return None


def iter_choices(state: ChoiceState) -> Iterator[Choice]:
    c: Optional[Choice] = first_choice(state)
    while c is not None:
        yield c
        c = next_choice(state, c)


def _pair_ok(g: GenericGoal, child: Name, parent_value: int, child_value: int) -> bool:
    if child.kind is Kind.CONSTANT_DECOMPOSITION:
        return (child_value == CONSTANT) == (parent_value == CONSTANT)
    return parent_value != TOP or child_value == TOP


def is_consistent(g: GenericGoal, choice: Mapping) -> bool:
    """Parent/decomposition agreement of a total choice."""
    for x in g.variables:
        for c in g.children(x):
            if not _pair_ok(g, c, choice[x], choice[c]):
                return False
    return True


class ChoiceSearch:
    """Consistent choices in enumeration order, by backtracking.

    ``constraints`` is a list of ``(variables, predicate)``; the predicate gets
    the partial assignment once all its variables are set, and a False answer
    discards every completion.  Discarded consistent choices are counted in
    ``pruned`` so that the total matches a plain filter over
    ``iter_choices``.
    """

    def __init__(
        self,
        g: GenericGoal,
        state: ChoiceState,
        constraints: Sequence = (),
    ):
        self.g = g
        self.state = state
        self.digits = state.digits
        self.pruned = 0
        self.visited = 0
        pos = {x: i for i, x in enumerate(self.digits)}
        for x in state.fixed:
            pos[x] = -1
        self._pos = pos
        self._pairs_at: dict = {}
        self._checks_at: dict = {}
        for x in g.variables:
            for c in g.children(x):
                at = max(pos[x], pos[c])
                self._pairs_at.setdefault(at, []).append((x, c))
        for vars_, pred in constraints:
            at = max((pos[v] for v in vars_), default=-1)
            self._checks_at.setdefault(at, []).append(pred)
        self._parent = {c: x for x in g.variables for c in g.children(x)}
        self._roots = [x for x in g.variables if x not in self._parent]

    def _ok(self, at: int, values: dict) -> Optional[str]:
        for x, c in self._pairs_at.get(at, ()):
            if not _pair_ok(self.g, c, values[x], values[c]):
                return "inconsistent"
        for pred in self._checks_at.get(at, ()):
            if not pred(values):
                return "pruned"
        return None

    def completions(self, values: dict, depth: int) -> int:
        """Number of consistent completions of digits from ``depth`` on."""
        free = set(self.digits[depth:])

        def ways(x: Name) -> dict:
            dom = self.state.domain(x) if x in free else (values[x],)
            kids = [(c, ways(c)) for c in self.g.children(x)]
            out = {}
            for v in dom:
                total = 1
                for c, wc in kids:
                    total *= sum(n for cv, n in wc.items() if _pair_ok(self.g, c, v, cv))
                out[v] = total
            return out

        result = 1
        for r in self._roots:
            result *= sum(ways(r).values())
        return result

    def __iter__(self) -> Iterator[Choice]:
        values = dict(self.state.fixed)
        if self._ok(-1, values) == "inconsistent":
            return
        if self._ok(-1, values) == "pruned":
            self.pruned += self.completions(values, 0)
            return
        yield from self._walk(values, 0)

    def _walk(self, values: dict, depth: int) -> Iterator[Choice]:
        if depth == len(self.digits):
            self.visited += 1
            yield tuple(values[x] for x in self.state.variables)
            return
        x = self.digits[depth]
        for v in self.state.domain(x):
            values[x] = v
            verdict = self._ok(depth, values)
            if verdict == "inconsistent":
                continue
            if verdict == "pruned":
                self.pruned += self.completions(values, depth + 1)
                continue
            yield from self._walk(values, depth + 1)
        del values[x]


def choice_string(state: ChoiceState, choice: Sequence) -> str:
    return "(" + ",".join(str(int(v)) for v in choice) + ")"
