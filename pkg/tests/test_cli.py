import io
import logging

import pytest

from cellform.bnb import solve_subproblem
from cellform.cli import main
from cellform.dinkelbach import raw_ratio
from cellform.instances import load_instance, write_instance
from cellform.model import encode
from cellform.rational import Ratio
from cellform.solutions import (Regime, parse_solution, write_solution)


@pytest.fixture
def inst_file(tmp_path, ref_instance):
    f = tmp_path / "ref57.cfp"
    f.write_text(write_instance(ref_instance))
    return f


@pytest.fixture
def sol_file(tmp_path, two_cell):
    f = tmp_path / "two_cells.sol"
    f.write_text(write_solution(two_cell))
    return f


# ---------------------------------------------------------------- validate


def test_validate_single_file(inst_file, capsys):
    assert main(["validate", str(inst_file)]) == 0
    out = capsys.readouterr().out
    assert out == (f"{inst_file}: m=5 p=7 n1=20 density=20/35 (= 0.5714) ok\n")


def test_validate_directory_summary(tmp_path, inst_file, capsys):
    (tmp_path / "bad.cfp").write_text("2 2\n1 0\n")
    (tmp_path / "warn.cfp").write_text("2 2\n1 0\n0 0\n")
    assert main(["validate", str(tmp_path)]) == 1
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert any(l.startswith(f"{tmp_path / 'bad.cfp'}: error: ") for l in lines)
    assert "  warning: machine 2 uses no parts" in lines
    assert "  warning: part 2 visits no machines" in lines
    assert lines[-1] == "3 files, 2 ok, 1 failed"


def test_validate_missing_file(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "nope.cfp")]) == 1
    assert "error:" in capsys.readouterr().out


# ---------------------------------------------------------------- efficacy


def test_efficacy_report(inst_file, sol_file, capsys):
    assert main(["efficacy", str(inst_file), str(sol_file)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "n1=20 n1_in=15 n0_in=4 efficacy=15/24 (= 0.6250)"
    assert out[1] == "no-residual: feasible"
    assert out[2] == "allow-residual: feasible"


def test_efficacy_reports_violations(inst_file, tmp_path, capsys):
    bad = tmp_path / "res.sol"
    bad.write_text("2\n1 2 2 1 0\n1 2 2 2 2 2 1\n")
    assert main(["efficacy", str(inst_file), str(bad)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[1] == "no-residual: infeasible (machine 5 is residual)"
    assert out[2] == "allow-residual: feasible"


# ---------------------------------------------------------------- solve


def test_solve_writes_solution_and_reports(inst_file, capsys):
    assert main(["solve", str(inst_file)]) == 0
    captured = capsys.readouterr()
    line = captured.out.strip()
    assert line.startswith("status=Optimal efficacy=16/23 (0.6957) cells=2 ")
    assert "iters=" in line and "nodes=" in line and "time_ms=" in line
    sol_path = inst_file.with_suffix(".sol")
    assert f"wrote {sol_path}" in captured.err
    sol = parse_solution(sol_path.read_text(), load_instance(inst_file))
    assert sol.efficacy == Ratio(16, 23)


def test_solve_explicit_output_and_seed(inst_file, tmp_path, capsys):
    out_path = tmp_path / "out" / "best.sol"
    out_path.parent.mkdir()
    assert main(["solve", str(inst_file), "--seed-lambda", "15/24",
                 "--regime", "allow-residual", "-o", str(out_path)]) == 0
    assert out_path.exists()
    assert "status=Optimal efficacy=16/23" in capsys.readouterr().out


def test_solve_verbose_logs_iterations(inst_file, caplog, capsys):
    with caplog.at_level(logging.INFO, logger="cellform.dinkelbach"):
        assert main(["-v", "solve", str(inst_file),
                     "--seed-lambda", "15/24"]) == 0
    msgs = [r.getMessage() for r in caplog.records]
    assert any(m.startswith("iter=1 lambda=15/24 F=39") for m in msgs)
    assert any(m.startswith("iter=2 lambda=16/23 F=0") for m in msgs)
    capsys.readouterr()


def test_solve_bad_seed(inst_file, capsys):
    assert main(["solve", str(inst_file), "--seed-lambda", "bogus"]) == 1
    assert "error:" in capsys.readouterr().err


def test_solve_time_limit_zero_reports_timelimit(inst_file, capsys):
    assert main(["solve", str(inst_file), "--time-limit", "0"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("status=TimeLimit ")


# ---------------------------------------------------------------- oracle


def test_oracle_report(inst_file, tmp_path, capsys):
    out_path = tmp_path / "opt.sol"
    assert main(["oracle", str(inst_file), "-o", str(out_path)]) == 0
    captured = capsys.readouterr()
    assert captured.out.strip() == \
        "n1=20 n1_in=16 n0_in=3 efficacy=16/23 (= 0.6957)"
    sol = parse_solution(out_path.read_text(), load_instance(inst_file))
    assert sol.efficacy == Ratio(16, 23)


def test_oracle_size_guard(tmp_path, capsys):
    big = tmp_path / "big.cfp"
    big.write_text("8 2\n" + "1 1\n" * 8)
    assert main(["oracle", str(big)]) == 1
    assert "error: oracle limited to" in capsys.readouterr().err


# ---------------------------------------------------------------- bench


def test_bench_manifest(tmp_path, inst_file, capsys):
    man = tmp_path / "man.csv"
    man.write_text(
        "path,regime,expected,name\n"
        f"{inst_file.name},no-residual,0.6957,ref57\n"
        "ghost.cfp,no-residual,0.5,ghost\n")
    csv_path = tmp_path / "rows.csv"
    assert main(["bench", str(man), "--csv", str(csv_path)]) == 0
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines[0].split()[:5] == ["name", "m", "p", "regime", "expected"]
    row = next(l for l in lines if l.startswith("ref57")).split()
    assert row[:8] == ["ref57", "5", "7", "no-residual", "0.6957", "0.6957",
                       "yes", "Optimal"]
    assert "matched 1/1 expectations (2 rows)" in captured.out
    assert any(l.startswith("error: ghost: ") for l in lines)
    assert csv_path.read_text().splitlines()[0] == \
        "name,m,p,regime,expected,achieved,match,status,iters,nodes,time_ms"


def test_bench_expectation_miss_fails(tmp_path, inst_file, capsys):
    man = tmp_path / "man.csv"
    man.write_text("path,regime,expected\n"
                   f"{inst_file.name},no-residual,0.7000\n")
    assert main(["bench", str(man)]) == 1
    assert "matched 0/1" in capsys.readouterr().out


# ---------------------------------------------------------------- export-lp


def test_export_lp_default_output(inst_file, capsys):
    assert main(["export-lp", str(inst_file), "--lambda", "15/24"]) == 0
    lp_path = inst_file.with_suffix(".lp")
    assert capsys.readouterr().out.strip() == \
        f"wrote {lp_path} (45 variables, 222 rows)"
    text = lp_path.read_text()
    assert text.splitlines()[0] == "\\ objective_offset = -300"
    assert text.count("\n") == len(text.split("\n")) - 1


def test_export_lp_lambda_default_zero(inst_file, tmp_path, capsys):
    out = tmp_path / "model.lp"
    assert main(["export-lp", str(inst_file), "-o", str(out)]) == 0
    assert out.read_text().startswith("Maximize")
    capsys.readouterr()


# ---------------------------------------------------------------- lp loop


def test_solve_lp_export_backend(inst_file, ref_instance, tmp_path,
                                 monkeypatch, capsys):
    lp_dir = tmp_path / "rounds"
    lp_dir.mkdir()
    # play the external solver up front: the zero-seeded trajectory is
    # deterministic, so every round's assignment can be precomputed
    lam = Ratio(0, 1)
    rounds = 0
    while True:
        rounds += 1
        res = solve_subproblem(ref_instance, lam, Regime.NO_RESIDUAL)
        assign = encode(ref_instance, res.solution)
        lines = []
        for i in range(5):
            for k in range(i + 1, 5):
                lines.append(f"x_{i+1}_{k+1} {assign.x[i][k]}")
        for i in range(5):
            for j in range(7):
                lines.append(f"y_{i+1}_{j+1} {assign.y[i][j]}")
        (lp_dir / f"ref57.iter{rounds}.assign").write_text(
            "\n".join(lines) + "\n")
        if res.best_F == 0:
            break
        lam = raw_ratio(ref_instance, res.solution)

    monkeypatch.setattr("sys.stdin", io.StringIO("\n" * (rounds + 1)))
    out_path = tmp_path / "lp.sol"
    assert main(["solve", str(inst_file), "--backend", "lp-export",
                 "--seed-lambda", "zero", "--lp-dir", str(lp_dir),
                 "-o", str(out_path)]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith(
        f"status=Optimal efficacy=16/23 (0.6957) cells=2 iters={rounds} ")
    for r in range(1, rounds + 1):
        lp = lp_dir / f"ref57.iter{r}.lp"
        assert lp.exists()
        assert f"wrote {lp}" in captured.err
    assert parse_solution(out_path.read_text(),
                          ref_instance).efficacy == Ratio(16, 23)


def test_solve_lp_export_without_input_fails(inst_file, tmp_path,
                                             monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(""))
    assert main(["solve", str(inst_file), "--backend", "lp-export",
                 "--lp-dir", str(tmp_path / "r")]) == 1
    assert "error: no assignment supplied" in capsys.readouterr().err


# ---------------------------------------------------------------- usage


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["solve"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["solve", "x.cfp", "--regime", "sideways"])
    assert err.value.code == 2


def test_missing_instance_is_error_not_crash(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "ghost.cfp")]) == 1
    assert "error:" in capsys.readouterr().err
