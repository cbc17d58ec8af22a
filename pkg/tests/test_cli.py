import io
import os
import subprocess
import sys


from conftest import data_path
from fixlat.cli import run


def call(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    if env:
        old = {k: os.environ.get(k) for k in env}
        os.environ.update(env)
    try:
        code = run(list(argv), out, err)
    finally:
        if env:
            for k, v in old.items():
                if v is None:
                    os.environ.pop(k, None)
                else:
                    os.environ[k] = v
    return code, out.getvalue(), err.getvalue()


def inst(name):
    return data_path("instances", name)


def test_verify_nwa_on_diamond():
    code, out, _ = call("verify", "NWA_EQ", inst("d4.json"))
    assert code == 0 and "PASS" in out


def test_iterate_v3_swap():
    code, out, _ = call("--format", "machine", "iterate", inst("v3_swap.json"))
    assert code == 0
    assert out.splitlines()[-1].startswith("outcome kind=DIVERGENT_PERIODIC")


def test_format_after_subcommand():
    a = call("--format", "machine", "iterate", inst("d4.json"))
    b = call("iterate", inst("d4.json"), "--format", "machine")
    assert a == b


def test_iterate_text_and_budget():
    code, out, _ = call("iterate", inst("d4.json"))
    assert out.splitlines() == ["0: bot", "1: a", "2: top", "3: top", "outcome: CONVERGED at 2 value top"]
    code, out, _ = call("iterate", inst("d4.json"), "--budget", "1")
    assert code == 0 and "BUDGET_EXHAUSTED" in out
    code, out, _ = call("iterate", inst("d4.json"), env={"FIXLAT_BUDGET": "1"})
    assert "BUDGET_EXHAUSTED" in out
    code, _, err = call("iterate", inst("d4.json"), env={"FIXLAT_BUDGET": "zero"})
    assert code == 2 and "FIXLAT_BUDGET" in err


def test_missing_key_exit_two():
    code, out, err = call("classify", inst("missing_key.json"))
    assert code == 2 and "a0" in err and out == ""


def test_missing_file_exit_two():
    code, _, err = call("classify", "/nonexistent/x.json")
    assert code == 2 and err


def test_bad_arguments_exit_two():
    assert call("verify", "NOT_A_THEOREM", inst("d4.json"))[0] == 2
    assert call("verify", "TARSKI_CL", inst("d4.json"), "--drop", "bogus")[0] == 2
    assert call()[0] == 2


def test_refuted_exit_one():
    code, out, _ = call("--format", "machine", "verify", "NWA_EQ", inst("chain3_least.json"))
    assert code == 1 and "status=REFUTED" in out


def test_classify_and_sets():
    code, out, _ = call("--format", "machine", "classify", inst("d4.json"))
    assert code == 0
    lines = out.splitlines()
    assert [line.split()[0] for line in lines] == ["poset", "map", "fixpoints"]
    assert "is_lattice=true" in lines[0] and "fix={top}" in lines[2]
    code, out, _ = call("--format", "machine", "sets", inst("v3_swap.json"))
    assert "W={a}" in out and "N_sub_W=false" in out
    code, out, _ = call("sets", inst("a2_swap.json"))
    assert "undefined (UNDEFINED_AT_LIMIT)" in out


def test_verify_all_lists_applicable():
    code, out, _ = call("--format", "machine", "verify-all", inst("d4.json"))
    assert code == 0 and len(out.splitlines()) == 21


def test_search_found_and_none():
    code, out, _ = call("search", "TARSKI_CL", "--drop", "complete_lattice", "--exhaustive", "2", "--count", "1")
    assert code == 1 and "witness:" in out
    code, out, _ = call("search", "LUBW_FIX", "--seeds", "20")
    assert code == 0 and "none found" in out


def test_search_bundle(tmp_path):
    path = tmp_path / "bundle.json"
    code, _, _ = call("search", "MON_EXT", "--drop", "well_ordered", "--size", "4", "--count", "1", "--bundle", str(path))
    assert code == 1
    text = path.read_text()
    assert text.startswith("# fixlat-repro ")
    assert call("verify", "MON_EXT", str(path), "--drop", "well_ordered")[0] == 1


def test_dataflow_command():
    code, out, _ = call("--format", "machine", "dataflow", data_path("programs", "loop.json"))
    assert code == 0
    assert "node id=n3 reachable=true x=POS" in out
    code, out, _ = call("dataflow", data_path("programs", "add.json"), "--entry", "x=POS", "--entry", "y=NEG")
    assert out.splitlines()[1].split() == ["n0", "TOP", "NEG"]
    assert call("dataflow", data_path("programs", "add.json"), "--entry", "x")[0] == 2
    assert call("dataflow", data_path("programs", "add.json"), "--entry", "q=POS")[0] == 2


def test_gen_round_trips(tmp_path):
    code, out, _ = call("gen", "--seed", "3", "--size", "5", "--shape", "RANDOM_LATTICE")
    assert code == 0
    path = tmp_path / "g.json"
    path.write_text(out)
    assert call("classify", str(path))[0] == 0
    assert call("verify", "DEVIDE_JOIN", str(path))[0] in (0, 1)


def test_machine_values_quoted(tmp_path):
    path = tmp_path / "sp.json"
    path.write_text('{"elements": ["a b"], "relation_kind": "hasse", "le": [], "function": {"a b": "a b"}, "a0": "a b"}')
    code, out, _ = call("--format", "machine", "iterate", str(path))
    assert 'value="a b"' in out


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "fixlat.cli", "verify", "NWA_EQ", inst("d4.json")], capture_output=True, text=True)
    assert r.returncode == 0 and "PASS" in r.stdout
