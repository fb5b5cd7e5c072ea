"""Random problems and a bounded brute-force unifier search.

The oracle shares nothing with the solver beyond the core algebra: it
enumerates, per constant, every assignment of particle sets of bounded role
depth to the variables and checks the projected goals directly.  Any hit is
re-checked with ``verify_unifier`` on the full problem, so ``found`` is a
proof of unifiability; a miss only says no unifier exists within the bound.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import TOP, Particle, combine, restrict_to_constant, verify_unifier
from .frontend import ProblemSource, parse_text
from .solver import original_goals

CONSTANTS = ("A", "B")
VARIABLES = ("X_var", "Y_var", "Z_var")
ROLES = ("r", "s")


@dataclass(frozen=True)
class GeneratorParams:
    n_constants: int = 1
    n_variables: int = 2
    n_roles: int = 1
    max_depth: int = 2
    n_subsumptions: int = 2
    seed: int = 0

    def __post_init__(self):
        limits = dict(n_constants=2, n_variables=3, n_roles=2, max_depth=2, n_subsumptions=4)
        for name, hi in limits.items():
            v = getattr(self, name)
            if not 0 <= v <= hi:
                raise ValueError(f"{name}={v} outside [0, {hi}]")
        if self.n_subsumptions < 1:
            raise ValueError("n_subsumptions must be at least 1")
        if self.n_constants + self.n_variables == 0:
            raise ValueError("need at least one concept name")


def _particle_text(word: list, head: str) -> str:
    t = head
    for r in reversed(word):
        t = f"(all {r} {t})"
    return t


def _concept_text(parts: list) -> str:
    if not parts:
        return "top"
    if len(parts) == 1:
        return parts[0]
    return "(and " + " ".join(parts) + ")"


def gen_problem_text(params: GeneratorParams) -> str:
    rng = random.Random(params.seed)
    names = list(CONSTANTS[: params.n_constants]) + list(VARIABLES[: params.n_variables])
    roles = list(ROLES[: params.n_roles])

    def particle() -> str:
        depth = rng.randint(0, params.max_depth) if roles else 0
        return _particle_text([rng.choice(roles) for _ in range(depth)], rng.choice(names))

    lines = []
    for _ in range(params.n_subsumptions):
        lhs = _concept_text([particle() for _ in range(rng.randint(0, 3))])
        rhs = _concept_text([particle() for _ in range(rng.randint(1, 2))])
        kind = "equiv" if rng.random() < 0.2 else "sub"
        lines.append(f"({kind} {lhs} {rhs})")
    return "\n".join(lines) + "\n"


def gen_problem(params: GeneratorParams) -> ProblemSource:
    return parse_text(gen_problem_text(params))


def random_params(rng: random.Random) -> GeneratorParams:
    return GeneratorParams(
        n_constants=rng.randint(1, 2),
        n_variables=rng.randint(0, 3),
        n_roles=rng.randint(1, 2),
        max_depth=rng.randint(0, 2),
        n_subsumptions=rng.randint(1, 4),
        seed=rng.randrange(2**32),
    )


# --- oracle -------------------------------------------------------------------

class BudgetExceeded(Exception):
    """The instance is too large for exhaustive search."""


@dataclass
class OracleResult:
    found: bool
    substitution: Optional[dict] = None
    assignments_tried: int = 0


def _words(roles: list, max_len: int) -> list:
    out = []
    for k in range(max_len + 1):
        out += [tuple(w) for w in itertools.product(roles, repeat=k)]
    return out


def oracle_search(
    src: ProblemSource,
    depth_bound: int = 2,
    max_bits: int = 24,
    max_universe: int = 12,
    chunk: int = 1 << 18,
) -> OracleResult:
    """Exhaustive search for a unifier with role depth <= ``depth_bound``.

    Per constant the candidate values of a variable are the subsets of the
    particles ``∀w.A`` with ``|w| <= depth_bound``; ``max_universe`` caps that
    set and ``max_bits`` caps the product over all variables (the search space
    is ``2 ** (universe * variables)``).
    """
    goals = original_goals(src)
    variables = [n for n in src.names.values() if n.is_variable]
    constants = sorted((n for n in src.names.values() if n.is_constant), key=lambda n: n.id)
    roles = list(src.roles)
    if not constants:
        sigma = {x: TOP for x in variables}
        assert verify_unifier(goals, sigma)
        return OracleResult(True, sigma, 1)

    cand_words = _words(roles, depth_bound)
    k = len(cand_words)
    if k > max_universe:
        raise BudgetExceeded(f"{k} candidate particles per constant exceeds {max_universe}")
    problem_depth = max((len(p.word) for g in goals for p in g.lhs | g.rhs_concept), default=0)
    all_words = _words(roles, problem_depth + depth_bound)
    if len(all_words) > 62:
        raise BudgetExceeded("role words do not fit a 64-bit mask")
    word_bit = {w: 1 << i for i, w in enumerate(all_words)}

    # image[v][s]: mask of {v.w | w in subset s} over the candidate words
    images: dict = {}

    def image(v: tuple) -> np.ndarray:
        if v not in images:
            table = np.zeros(1 << k, dtype=np.int64)
            for s in range(1 << k):
                m = 0
                for j in range(k):
                    if s >> j & 1:
                        m |= word_bit[v + cand_words[j]]
                table[s] = m
            images[v] = table
        return images[v]

    parts = []
    tried = 0
    for a in constants:
        projected = []
        for g in goals:
            lhs = restrict_to_constant(g.lhs, a, keep_variables=True)
            rhs = restrict_to_constant(g.rhs_concept, a, keep_variables=True)
            if rhs:
                projected.append((lhs, rhs))
        used = [x for x in variables if any(p.head == x for l, r in projected for p in l | r)]
        bits = k * len(used)
        if bits > max_bits:
            raise BudgetExceeded(f"{bits} search bits exceeds {max_bits}")
        slot = {x: i for i, x in enumerate(used)}
        total = 1 << bits
        hit = None
        for start in range(0, total, chunk):
            combos = np.arange(start, min(start + chunk, total), dtype=np.int64)
            subsets = [(combos >> (i * k)) & ((1 << k) - 1) for i in range(len(used))]

            def mask_of(c: frozenset) -> np.ndarray:
                m = np.zeros(combos.shape, dtype=np.int64)
                for p in c:
                    if p.head.is_variable:
                        m |= image(p.word)[subsets[slot[p.head]]]
                    else:
                        m |= word_bit[p.word]
                return m

            ok = np.ones(combos.shape, dtype=bool)
            for lhs, rhs in projected:
                ok &= (mask_of(rhs) & ~mask_of(lhs)) == 0
            idx = np.flatnonzero(ok)
            if idx.size:
                hit = int(combos[idx[0]])
                tried += int(idx[0]) + 1
                break
            tried += combos.size
        if hit is None:
            return OracleResult(False, None, tried)
        part = {}
        for x in variables:
            if x in slot:
                s = (hit >> (slot[x] * k)) & ((1 << k) - 1)
                part[x] = frozenset(Particle(cand_words[j], a) for j in range(k) if s >> j & 1)
            else:
                part[x] = TOP
        parts.append(part)

    sigma = combine({x: TOP for x in variables}, *parts)
    if not verify_unifier(goals, sigma):
        raise AssertionError("oracle assignment failed verification")
    return OracleResult(True, sigma, tried)
