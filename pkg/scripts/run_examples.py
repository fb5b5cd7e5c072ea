"""Run the worked examples and print a deterministic record of each stage.

    python3 scripts/run_examples.py [--timing]

Without ``--timing`` the output contains no clock readings, so two runs can
be compared byte for byte.
"""
import argparse
import time
from pathlib import Path

from fl0unify.choice import as_mapping, fix_choices, first_choice, is_consistent
from fl0unify.cli import dump_generic, dump_model
from fl0unify.core import render
from fl0unify.flatten import flatten_one, generic_goal
from fl0unify.frontend import parse_file, render_solution
from fl0unify.implicit import build_goal, run_implicit
from fl0unify.shortcuts import compute, extract_unifier
from fl0unify.solver import solve

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def running_example_stages() -> str:
    src = parse_file(DATA / "running_example.flu")
    m = flatten_one(src)
    a = m.constants[0]
    g = generic_goal(m, a)
    lines = [dump_generic(src, a.id).rstrip()]
    state = fix_choices(g)
    lines.append("first choice " + str(tuple(int(v) for v in first_choice(state))))
    for values in [(0, 1, 0, 0, 0), (1, 1, 1, 0, 0), (1, 1, 1, 1, 0)]:
        choice = dict(zip(g.variables, values))
        if not is_consistent(g, choice):
            lines.append(f"{values}: inconsistent")
            continue
        out = run_implicit(build_goal(g, choice), g)
        lines.append(f"{values}: {out.verdict} rule={out.rule}")
        if out.verdict == "residual":
            lines += [f"  unsolved {f}" for f in out.goal.unsolved]
            lines.append("  starts " + " ".join(x.id for x in out.goal.starts))
            store = compute(out.goal, g)
            for s in store.computed:
                res = ",".join(f"{r}->#{t.index}" for r, t in sorted(s.resolvers.items()))
                lines.append(f"  shortcut #{s.index} round {s.round} {sorted(x.id for x in s.members)} {res}")
            gamma = extract_unifier(store, out.goal, g)
            lines += [f"  {x.id} := {render(gamma[x])}" for x in g.variables]
    return "\n".join(lines)


def solve_record(name: str, timing: bool) -> str:
    src = parse_file(DATA / name)
    res = solve(src)
    lines = ["unifiable" if res.unifiable else f"not unifiable at {res.failed_constant.id}"]
    if res.unifiable:
        lines.append(render_solution(res.substitution, res.model.user_variables).rstrip())
    lines.append(str(res.stats.counters()))
    if timing:
        lines.append(f"elapsed {res.stats.elapsed_ms:.1f} ms")
    return "\n".join(l for l in lines if l)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--timing", action="store_true")
    args = ap.parse_args()
    sections = [
        ("flat model", lambda: dump_model(parse_file(DATA / "flattening.flu")).rstrip()),
        ("flat model, literal reading", lambda: dump_model(parse_file(DATA / "flattening_literal.flu")).rstrip()),
        ("running example", running_example_stages),
    ]
    for name in ["running_example.flu", "nested_equivalence.flu", "two_constants_cycle.flu", "variables_only.flu"]:
        sections.append((name, lambda n=name: solve_record(n, args.timing)))
    for title, fn in sections:
        t0 = time.perf_counter()
        body = fn()
        print(f"== {title}")
        print(body)
        if args.timing:
            print(f"-- {1000 * (time.perf_counter() - t0):.1f} ms")


if __name__ == "__main__":
    main()
