import json

import pytest

from ovmoments.cli import main
from ovmoments.reports import Report


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_table_crank(capsys):
    code, out, _ = run(capsys, "table", "--kind", "crank1", "--k", "2", "--n-max", "4")
    assert code == 0
    assert out.splitlines()[5].split() == ["4", "70", "70"]


def test_table_sptbar_csv(capsys):
    code, out, _ = run(capsys, "table", "--kind", "sptbar", "--n-max", "4", "--format", "csv")
    assert code == 0 and "4,26,26" in out.splitlines()


def test_table_json_roundtrip(capsys):
    code, out, _ = run(capsys, "table", "--kind", "rank", "--k", "2", "--n-max", "6", "--format", "json")
    rep = Report.from_json(out)
    assert code == 0 and rep.passed
    assert rep.to_json(include_time=False) == out.strip()
    assert rep.data["rows"][4] == [4, "44", "44"]


def test_table_beyond_oracle_range(capsys):
    code, out, _ = run(capsys, "table", "--kind", "m2rank", "--k", "4", "--n-max", "60", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "n,N2_4"


def test_table_odd_k(capsys):
    code, _, err = run(capsys, "table", "--kind", "rank", "--k", "3", "--n-max", "4")
    assert code == 2 and "vanish" in err


def test_verify_pass_and_json(capsys):
    code, out, _ = run(capsys, "verify", "dimensions", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["status"] == "pass" and d["schema"] == "ovmoments.report/1"


def test_verify_fail_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "hecke-exact", "--n-max", "10", "--perturb", "alpha:3:1")
    assert code == 1 and "ell=5 n=3" in out


def test_verify_deterministic(capsys):
    a = run(capsys, "verify", "corollary1", "--n-max", "30", "--json", "--no-time")[1]
    b = run(capsys, "verify", "corollary1", "--n-max", "30", "--json", "--no-time", "--jobs", "2")[1]
    assert a == b


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2


def test_verify_bad_perturbation(capsys):
    code, _, err = run(capsys, "verify", "pde", "--perturb", "rank")
    assert code == 2


def test_solve_compare(capsys):
    code, out, _ = run(capsys, "solve", "--k", "2", "--variant", "dyson", "--compare-paper")
    assert code == 0 and "0 coefficient(s) differ" in out and "192/77" in out
    code, out, _ = run(capsys, "solve", "--k", "4", "--variant", "dyson", "--compare-published", "--json")
    d = json.loads(out)
    assert code == 0 and d["diff"] == [] and d["relation"]["M_8"] == ["-2715648/2125853"]


def test_solve_k5_structured_error(capsys):
    code, _, err = run(capsys, "solve", "--k", "5", "--variant", "dyson")
    d = json.loads(err)
    assert code == 2 and d["error"] == "basis-too-small" and "smaller than the dimension" in d["message"]


def test_solve_congruence(capsys):
    code, out, _ = run(capsys, "solve", "--k", "3", "--modulus", "5", "--multiplier", "5")
    assert code == 0 and out.strip().endswith("(2 + n + 2*n^2)*M_2 + (3 + 4*n + n^2)*M2_2 == 0 (mod 5)")


def test_solve_substitution(capsys):
    code, out, _ = run(capsys, "solve", "--k", "3", "--variant", "m2", "--substitute", "delta_q^2(M2_2)=M_2*M_4/P")
    assert code == 0 and "M_2*M_4/P" in out


def test_cache_dir_flag(capsys, tmp_path):
    code, _, _ = run(capsys, "--cache-dir", str(tmp_path), "table", "--kind", "pbar", "--n-max", "10")
    assert code == 0 and any(tmp_path.iterdir())
