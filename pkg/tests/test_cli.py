import json

import pytest

from asai.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_eigen_base_change(capsys):
    code, rep = run_json(capsys, "eigen", "--form", "bc11.json", "--field", "4", "--lmax", "20")
    assert code == 0
    assert json.dumps(rep)


def test_eigen_stabilized(capsys):
    code, rep = run_json(capsys, "eigen", "--form", "bc11.json", "--field", "4", "--lmax", "20", "--stabilize")
    assert code == 0


def test_local(capsys):
    code, rep = run_json(capsys, "local", "--form", "bc11.json", "--field", "4", "--ell", "3")
    assert code == 0


def test_value_series_and_euler(capsys):
    _, a = run_json(capsys, "value", "--form", "bc11.json", "--field", "4", "--s", "6", "--n", "200")
    _, b = run_json(capsys, "value", "--form", "bc11.json", "--field", "4", "--s", "6", "--n", "200", "--euler")
    diff = abs(float(a["value_re"]) - float(b["value_re"]))
    assert diff <= float(a["tail_bound"]) + float(b["tail_bound"])


def test_factorize_pass_table(capsys):
    code, rep = run_json(capsys, "factorize", "--form", "data/bc11.json", "--field", "4", "--lmax", "100")
    assert code == 0 and rep["passed"] and all(r["ok"] for r in rep["rows"])


def test_factorize_csv(capsys):
    code, out = run(capsys, "factorize", "--form", "bc11.json", "--field", "4", "--lmax", "30", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "ell,kind,ok"


def test_eis(capsys):
    code, rep = run_json(capsys, "eis", "--k", "2", "--beta", "1/5", "--tau", "0.1,1.1", "--s", "-1")
    assert code == 0


@pytest.mark.parametrize("what", ["ab", "c", "G", "ginf", "consts"])
def test_kernel(capsys, what):
    code, rep = run_json(capsys, "kernel", "--what", what, "--k", "2", "--j", "1", "--n", "1", "--s", "3.5")
    assert code == 0


def test_kernel_ab_exact(capsys):
    _, rep = run_json(capsys, "kernel", "--what", "ab", "--k", "0")
    assert rep == {"a": "1", "b": "0"}


def test_measure(capsys):
    code, rep = run_json(capsys, "measure", "--tower", "tower_example.json", "--chi", "5:4:1", "--j", "2")
    assert code == 0 and rep["certified"]


def test_predict(capsys):
    code, rep = run_json(capsys, "predict", "--k", "2", "--j", "1", "--chi", "5:4:1", "--lambda", "7")
    assert code == 0 and rep["zero"] is False
    code, rep = run_json(capsys, "predict", "--k", "2", "--j", "0", "--chi", "5:4:1", "--lambda", "7")
    assert rep["zero"] is True and rep["value"] == 0


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eis", "--bogus"])
    assert exc.value.code == 2


def test_unknown_command_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["predict", "--k", "2", "--j", "0", "--lambda", "10"],           # lambda not a unit
    ["predict", "--k", "2", "--j", "0", "--lambda", "3", "--p", "4"],
    ["eis", "--k", "2", "--beta", "1/5", "--tau", "0.1,1.1", "--precision", "32"],
    ["eigen", "--form", "bc11.json"],                                 # elliptic form without --field
    ["measure", "--tower", "no_such_file.json"],
])
def test_precondition_errors(capsys, argv):
    code, rep = run_json(capsys, *argv)
    assert code == 2
    assert set(rep) == {"error", "message"}


def test_selftest_subset_passes(capsys):
    code, rep = run_json(capsys, "selftest", "--quick", "--only", "1,2,3,6,9")
    assert code == 0 and rep["passed"]


@pytest.mark.slow
def test_selftest_quick_reports_unattainable_criterion(capsys):
    code, rep = run_json(capsys, "selftest", "--quick")
    assert code == 1
    failed = [r["number"] for r in rep["results"] if not r["passed"]]
    assert failed == [11]


def test_output_is_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["selftest", "--quick", "--only", "1,3,10", "--seed", "7", "--out", str(p)]) == 0
    capsys.readouterr()
    assert paths[0].read_bytes() == paths[1].read_bytes()
    for p in paths:
        main(["kernel", "--what", "consts", "--k", "3", "--j", "2", "--out", str(p)])
    assert paths[0].read_bytes() == paths[1].read_bytes()
