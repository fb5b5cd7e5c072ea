"""Command line: ``solve``, ``verify``, ``dump`` and the debugging ``oracle``.

Exit codes: 0 unifiable (or verified), 1 not unifiable (or not verified),
2 input error, 3 internal verification failure.  Logs go to stderr.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .core import Particle, to_tree, verify_unifier
from .flatten import flatten_one, generic_goal
from .frontend import FrontendError, parse_file, render_concept, render_solution, render_tree, substitution_from_source
from .solver import VerificationFailure, original_goals, solve

EXIT_UNIFIABLE, EXIT_NOT_UNIFIABLE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
FINE = 5  # below DEBUG so that "fine" also shows the per-choice trace

log = logging.getLogger("fl0unify")


@dataclass
class RunConfig:
    input: Path
    format: str = "auto"
    log_level: str = "info"
    output: Optional[Path] = None
    emit_stats: bool = False
    show_system_vars: bool = False
    parallel: bool = False


def _setup_logging(level: str) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(FINE if level == "fine" else logging.INFO)
    log.propagate = False


def _load(path, fmt="auto"):
    try:
        return parse_file(path, fmt)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
    except (FrontendError, ValueError) as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
    return None


def cmd_solve(cfg: RunConfig) -> int:
    _setup_logging(cfg.log_level)
    src = _load(cfg.input, cfg.format)
    if src is None:
        return EXIT_INPUT
    try:
        res = solve(src, parallel=cfg.parallel)
    except VerificationFailure as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if res.unifiable:
        print("unifiable")
        names = list(res.model.user_variables)
        sigma = res.substitution
        if cfg.show_system_vars:
            sigma = {**res.auxiliary, **sigma}
            names += list(res.model.system_variables) + sorted(res.auxiliary, key=lambda n: n.id)
        text = render_solution(sigma, names)
        sys.stdout.write(text)
        if cfg.output is not None:
            cfg.output.write_text(render_solution(res.substitution, res.model.user_variables), encoding="utf-8")
    else:
        failed = res.failed_constant.id if res.failed_constant is not None else "?"
        print(f"not unifiable (fails for constant {failed})")
    if cfg.emit_stats:
        s = res.stats
        print(f"max_variables: {s.max_variables}")
        print(f"preprocessing_decided: {s.preprocessing_decided}")
        print(f"shortcut_phases: {s.shortcut_phases}")
        print(f"elapsed_ms: {s.elapsed_ms:.1f}")
    return EXIT_UNIFIABLE if res.unifiable else EXIT_NOT_UNIFIABLE


def cmd_verify(problem: Path, solution: Path) -> int:
    src = _load(problem)
    sol = _load(solution, "flu")
    if src is None or sol is None:
        return EXIT_INPUT
    try:
        sigma = substitution_from_source(sol)
    except FrontendError as exc:
        print(f"error: {solution}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    # names from the solution file are matched to the problem by id
    by_id = {x.id: c for x, c in sigma.items()}
    sigma = {x: by_id[x.id] for x in src.variables if x.id in by_id}
    ok = verify_unifier(original_goals(src), sigma)
    print("verified" if ok else "not a unifier")
    return EXIT_UNIFIABLE if ok else EXIT_NOT_UNIFIABLE


def dump_model(src) -> str:
    m = flatten_one(src)
    lines = []
    if m.roles:
        lines.append("(roles " + " ".join(m.roles) + ")")
    lines += [f"(sub {render_concept(l)} {render_concept(r)})" for l, r in m.subsumptions]
    lines += [f"(equiv {render_concept(l)} {render_concept(r)})" for l, r in m.equivalences]
    lines += [f"(equiv {v.id} {render_concept(b)})" for v, b in m.definitions]
    return "\n".join(lines) + "\n"


def dump_generic(src, const_id: str) -> str:
    m = flatten_one(src)
    match = [a for a in m.constants if a.id == const_id]
    if not match:
        raise FrontendError(f"no constant named {const_id}")
    g = generic_goal(m, match[0])
    lines = [f"; generic goal for {const_id}: " + " ".join(x.id for x in g.variables)]
    for f in g.flats:
        lhs = to_tree(frozenset(Particle((), n) for n in f.lhs))
        lines.append(f"(sub {render_tree(lhs)} {f.rhs.id})")
    for inc in g.increasing:
        lines.append(f"(sub {inc.parent.id} (all {inc.role} {inc.child.id}))")
    return "\n".join(lines) + "\n"


def cmd_dump(path: Path, stage: str, fmt: str = "auto") -> int:
    src = _load(path, fmt)
    if src is None:
        return EXIT_INPUT
    try:
        if stage == "model":
            sys.stdout.write(dump_model(src))
        elif stage.startswith("generic:"):
            sys.stdout.write(dump_generic(src, stage.split(":", 1)[1]))
        else:
            print(f"error: unknown stage {stage!r}", file=sys.stderr)
            return EXIT_INPUT
    except FrontendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


def cmd_oracle(path: Path, depth: int, fmt: str = "auto") -> int:
    from .testkit import BudgetExceeded, oracle_search

    src = _load(path, fmt)
    if src is None:
        return EXIT_INPUT
    try:
        res = oracle_search(src, depth)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}")
        return EXIT_INTERNAL
    if res.found:
        print(f"found (depth <= {depth})")
        sys.stdout.write(render_solution(res.substitution, src.variables))
        return EXIT_UNIFIABLE
    print(f"not found within depth {depth}")
    return EXIT_NOT_UNIFIABLE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fl0unify", description="FL0 unification")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide unifiability and print a unifier")
    s.add_argument("file", type=Path)
    s.add_argument("--format", choices=["flu", "ofn", "auto"], default="auto")
    s.add_argument("--stats", action="store_true")
    s.add_argument("--log-level", choices=["info", "fine"], default="info")
    s.add_argument("--output", type=Path)
    s.add_argument("--show-system-vars", action="store_true")
    s.add_argument("--parallel", action="store_true")

    v = sub.add_parser("verify", help="check a solution file against a problem")
    v.add_argument("problem", type=Path)
    v.add_argument("solution", type=Path)

    d = sub.add_parser("dump", help="print an intermediate stage")
    d.add_argument("file", type=Path)
    d.add_argument("--stage", required=True, help="model or generic:<CONSTANT>")
    d.add_argument("--format", choices=["flu", "ofn", "auto"], default="auto")

    o = sub.add_parser("oracle", help="bounded brute-force search (debugging)")
    o.add_argument("file", type=Path)
    o.add_argument("--depth", type=int, default=2)
    o.add_argument("--format", choices=["flu", "ofn", "auto"], default="auto")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "solve":
        cfg = RunConfig(args.file, args.format, args.log_level, args.output,
                        args.stats, args.show_system_vars, args.parallel)
        return cmd_solve(cfg)
    if args.command == "verify":
        return cmd_verify(args.problem, args.solution)
    if args.command == "dump":
        return cmd_dump(args.file, args.stage, args.format)
    return cmd_oracle(args.file, args.depth, args.format)


if __name__ == "__main__":
    sys.exit(main())
