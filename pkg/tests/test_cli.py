import pytest

from qcc.cli import EXIT_INPUT, EXIT_OK, EXIT_TOO_LARGE, main


@pytest.fixture
def suite(tmp_path):
    d = tmp_path / "suite"
    assert main(["bench", "--all", "--out", str(d)]) == EXIT_OK
    return d


def test_bench_writes_suite(suite):
    assert len(list(suite.glob("*.qc"))) == 12


def test_compile_emits_qasm(suite, tmp_path, capsys):
    out = tmp_path / "bv4.qasm"
    code = main(["compile", str(suite / "bv4.qc"), "--machine", "ibmq5", "--opt", "comm",
                 "--emit", str(out), "--report", "--dump-reliability", str(tmp_path / "r.csv")])
    assert code == EXIT_OK
    assert out.read_text().startswith("OPENQASM 2.0;")
    assert "estimated reliability" in capsys.readouterr().err
    assert (tmp_path / "r.csv").read_text().startswith("control,")


def test_compile_is_byte_identical(suite, tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"o{k}.quil"
        main(["compile", str(suite / "adder.qc"), "-m", "line4", "--seed", "3", "-o", str(p)])
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_too_large_exit_code(suite, capsys):
    assert main(["compile", str(suite / "bv8.qc"), "-m", "line4"]) == EXIT_TOO_LARGE
    assert capsys.readouterr().err.startswith("X:")


def test_input_errors(tmp_path, suite):
    bad = tmp_path / "bad.qc"
    bad.write_text("qubits 2\ncnot 0 0\n")
    assert main(["compile", str(bad), "-m", "line4"]) == EXIT_INPUT
    assert main(["compile", str(tmp_path / "missing.qc"), "-m", "line4"]) == EXIT_INPUT
    assert main(["compile", str(suite / "bv4.qc"), "-m", "nowhere"]) == EXIT_INPUT
    assert main(["compile", str(suite / "bv4.qc"), "-m", "ibmq5", "--target", "iontrap"]) == EXIT_INPUT
    assert main(["compare", str(suite / "bv4.qc"), "-m", "ion5", "--levels", "fast"]) == EXIT_INPUT
    assert main(["bench", "nope"]) == EXIT_INPUT


def test_target_consistent_is_accepted(suite, tmp_path):
    assert main(["compile", str(suite / "bv4.qc"), "-m", "ion5", "--target", "iontrap",
                 "-o", str(tmp_path / "x")]) == EXIT_OK


def test_simulate_noiseless(suite, capsys):
    assert main(["simulate", str(suite / "toffoli.qc"), "-m", "ion5", "--shots", "500",
                 "--noiseless"]) == EXIT_OK
    assert capsys.readouterr().out == "bitstring,count\n111,500\n"


def test_compare_and_sweep(suite, tmp_path, capsys):
    assert main(["compare", str(suite / "bv4.qc"), "-m", "ibmq5", "--levels", "none,noise"]) == EXIT_OK
    assert len(capsys.readouterr().out.strip().split("\n")) == 3
    machines = tmp_path / "machines"
    machines.mkdir()
    assert main(["machine", "line4", "-o", str(machines / "line4.json")]) == EXIT_OK
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--suite", str(suite), "--machines", str(machines), "--levels", "comm",
                 "-o", str(out)]) == EXIT_OK
    rows = out.read_text().strip().split("\n")
    assert len(rows) == 13 and sum(",X," in r for r in rows) == 3     # bv6, bv8, hs6 do not fit


def test_machine_listing(capsys):
    assert main(["machine"]) == EXIT_OK
    assert "grid14\t14\tibm" in capsys.readouterr().out
