import logging

from fl0unify import cli
from fl0unify.cli import main
from fl0unify.core import verify_unifier
from fl0unify.frontend import parse_file, parse_text, substitution_from_source
from fl0unify.solver import VerificationFailure, original_goals


def test_nested_equivalence_solves(data, capsys):
    assert main(["solve", str(data / "nested_equivalence.flu"), "--stats"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("unifiable\n") and "max_variables:" in out
    sol = substitution_from_source(parse_text("".join(l + "\n" for l in out.splitlines() if l.startswith("(equiv"))))
    src = parse_file(data / "nested_equivalence.flu")
    by_id = {x.id: c for x, c in sol.items()}
    assert verify_unifier(original_goals(src), {x: by_id[x.id] for x in src.variables})


def test_cycle_is_not_unifiable(data, capsys):
    assert main(["solve", str(data / "two_constants_cycle.ofn")]) == 1
    assert "not unifiable" in capsys.readouterr().out


def test_missing_file(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "missing.flu")]) == 2


def test_syntax_error_exit(tmp_path):
    p = tmp_path / "bad.flu"
    p.write_text("(sub (some r A) B)")
    assert main(["solve", str(p)]) == 2


def test_verify(data, tmp_path):
    problem = str(data / "running_example.flu")
    assert main(["verify", problem, str(data / "running_example.sol")]) == 0
    top = tmp_path / "top.sol"
    top.write_text("(equiv X_var top)\n(equiv Y_var top)\n")
    assert main(["verify", problem, str(top)]) == 1
    ident = tmp_path / "ident.flu"
    ident.write_text("(sub A A)\n")
    empty = tmp_path / "empty.sol"
    empty.write_text("")
    assert main(["verify", str(ident), str(empty)]) == 0
    bad = tmp_path / "bad.sol"
    bad.write_text("(sub X_var A)\n")
    assert main(["verify", problem, str(bad)]) == 2


def test_solution_round_trip(data, tmp_path):
    for name in ["running_example.flu", "nested_equivalence.ofn", "variables_only.flu"]:
        out = tmp_path / (name + ".sol")
        assert main(["solve", str(data / name), "--output", str(out)]) == 0
        assert main(["verify", str(data / name), str(out)]) == 0


def test_dump_model(data, capsys):
    assert main(["dump", str(data / "flattening.flu"), "--stage", "model"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert sum(l.startswith("(sub") for l in lines) == 1
    assert sum(l.startswith("(equiv Var") for l in lines) == 6


def test_dump_flat_input_echoes(tmp_path, capsys):
    p = tmp_path / "flat.flu"
    p.write_text("(sub X_var (all r A))\n")
    assert main(["dump", str(p), "--stage", "model"]) == 0
    assert capsys.readouterr().out == "(roles r)\n(sub X_var (all r A))\n"


def test_dump_generic(data, capsys):
    assert main(["dump", str(data / "running_example.flu"), "--stage", "generic:A"]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l.startswith("(sub")]
    assert sorted(lines) == sorted([
        "(sub X_var__d_r A)",
        "(sub (and X_var Y_var__d_r) X_var__d_r)",
        "(sub Y_var X_var__c_A)",
        "(sub X_var__d_r Y_var)",
        "(sub X_var (all r X_var__d_r))",
        "(sub Y_var (all r Y_var__d_r))",
    ])
    assert main(["dump", str(data / "running_example.flu"), "--stage", "generic:Q"]) == 2


def test_fine_logging_goes_to_stderr(data, capsys):
    assert main(["solve", str(data / "running_example.flu"), "--log-level", "fine"]) == 0
    cap = capsys.readouterr()
    assert "choice (" in cap.err and "choice (" not in cap.out


def test_show_system_vars(data, capsys):
    main(["solve", str(data / "running_example.flu"), "--show-system-vars"])
    assert "X_var__d_r" in capsys.readouterr().out


def test_oracle_command(data, capsys):
    assert main(["oracle", str(data / "running_example.flu"), "--depth", "2"]) == 0
    assert main(["oracle", str(data / "two_constants_cycle.flu"), "--depth", "1"]) == 1


def test_internal_failure_exit(data, monkeypatch):
    def boom(src, parallel=False):
        raise VerificationFailure("forced")
    monkeypatch.setattr(cli, "solve", boom)
    assert main(["solve", str(data / "running_example.flu")]) == 3
