import json
import shutil
import subprocess
import sys

import pytest

from argmc.cli import run

FOUR_NODE_AF = "arg(a).\narg(b).\narg(c).\narg(d).\natt(b,c).\natt(c,b).\natt(b,d).\natt(c,d).\n"
KEYS = {"command", "input_digest", "verdict", "witnesses", "stats", "version"}


def _json(capsys, argv):
    code = run(argv + ["--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


def test_check_violated_exit_one(capsys, tmp_kb):
    path = tmp_kb("p & q", "p & !q")
    code, doc = _json(capsys, ["check", "--kb", path, "--relation", "dr", "--semantics", "stable"])
    assert code == 1
    assert set(doc) == KEYS and doc["verdict"] == "violated"
    assert doc["version"]["schema"] == 1
    assert any(w["kind"] == "mc-set-not-extension" and w["base_formulas"] == ["p & !q"] for w in doc["witnesses"])


def test_check_satisfied_text(capsys, tmp_kb):
    path = tmp_kb("p & q", "p & !q")
    assert run(["check", "--kb", path, "--relation", "du", "--semantics", "stable"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("du / stable: satisfied")


def test_text_names_missing_extension(capsys, tmp_kb):
    path = tmp_kb("p & q", "p & !q")
    run(["check", "--kb", path, "--relation", "dr", "--semantics", "s"])
    assert "Arg({p & !q}) is not a stable extension" in capsys.readouterr().out


def test_input_digest_is_stable(capsys, tmp_kb):
    path = tmp_kb("p", "!p")
    _, a = _json(capsys, ["mc", "--kb", path])
    _, b = _json(capsys, ["mus", "--kb", path])
    assert a["input_digest"] == b["input_digest"]
    assert a["stats"]["count"] == 2 and b["stats"]["count"] == 1


@pytest.mark.parametrize("argv", [
    ["check", "--relation", "dr", "--semantics", "stable"],
    ["check", "--kb", "/nonexistent/kb.txt", "--relation", "dr", "--semantics", "stable"],
    ["solve", "--semantics", "stable"],
    ["props", "--relation", "zz"],
])
def test_input_errors_exit_two(capsys, tmp_kb, argv):
    if "props" in argv:
        argv = argv + ["--kb", tmp_kb("p")]
    assert run(argv) == 2
    assert "input error" in capsys.readouterr().err


def test_parse_errors_exit_two(capsys, tmp_kb):
    assert run(["check", "--kb", tmp_kb("p &"), "--relation", "d", "--semantics", "s"]) == 2
    with pytest.raises(SystemExit) as exc:
        run(["check", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 2


def test_cap_exceeded_exit_three(capsys, tmp_kb):
    path = tmp_kb("p", "q", "r", "s", "t")
    assert run(["args", "--kb", path, "--max-atoms", "3"]) == 3
    assert run(["args", "--kb", tmp_kb("p", "q", "!p"), "--max-arguments", "5"]) == 3
    assert "cap exceeded" in capsys.readouterr().err


def test_output_file_written_atomically(capsys, tmp_kb, tmp_path):
    target = tmp_path / "report.json"
    target.write_text("old")
    code = run(["mc", "--kb", tmp_kb("p", "!p"), "--format", "json", "-o", str(target)])
    assert code == 0 and capsys.readouterr().out == ""
    assert json.loads(target.read_text())["command"] == "mc"
    assert [p.name for p in tmp_path.iterdir() if p.name.startswith(".report")] == []


def test_solve_af(capsys, tmp_path):
    path = tmp_path / "four.af"
    path.write_text(FOUR_NODE_AF)
    code, doc = _json(capsys, ["solve", "--af", str(path), "--semantics", "preferred"])
    assert code == 0
    assert sorted(w["extension"] for w in doc["witnesses"]) == [["a", "b"], ["a", "c"]]
    code, doc = _json(capsys, ["solve", "--af", str(path), "--semantics", "grounded"])
    assert [w["extension"] for w in doc["witnesses"]] == [["a"]]


def test_solve_kb_and_af_commands(capsys, tmp_kb):
    path = tmp_kb("p", "!p")
    code, doc = _json(capsys, ["solve", "--kb", path, "--relation", "du", "--semantics", "stable"])
    assert code == 0 and doc["stats"]["extensions"] == 2
    code, doc = _json(capsys, ["af", "--kb", path, "--relation", "c", "--edges"])
    assert code == 0 and doc["stats"]["self_attacks"] == 0
    assert len(doc["witnesses"]) == doc["stats"]["attacks"]
    code, doc = _json(capsys, ["args", "--kb", path])
    assert doc["stats"]["arguments"] == len(doc["witnesses"])


def test_props_and_infer(capsys, tmp_kb):
    path = tmp_kb("p", "!q", "p -> q")
    code, doc = _json(capsys, ["props", "--kb", path, "--relation", "du"])
    assert code == 0
    by_name = {w["property"]: w["verdict"] for w in doc["witnesses"]}
    assert by_name["valid"] == "violated" and by_name["conflict-dependent"] == "holds-within-bound"
    kb2 = tmp_kb("p", "!p", "q", name="kb2.txt")
    for mode in ("direct", "argumentation"):
        code, doc = _json(capsys, ["infer", "--kb", kb2, "--formula", "q", "--mode", mode])
        assert code == 0 and doc["verdict"] == "entailed"


def test_mine_witness_round_trip(capsys, tmp_path):
    code, doc = _json(capsys, ["mine", "--relation", "d", "--semantics", "stable", "--sweep", "40"])
    assert code == 1 and doc["verdict"] == "violated"
    seed = doc["stats"]["seed"]
    # the reported KB, re-checked on its own, reproduces the violation
    path = tmp_path / "found.kb"
    path.write_text("\n".join(doc["stats"]["kb"]) + "\n")
    code2, again = _json(capsys, ["check", "--kb", str(path), "--relation", "d", "--semantics", "stable"])
    assert code2 == 1 and again["witnesses"] == doc["witnesses"]
    # mining from that seed finds it immediately
    code3, first = _json(capsys, ["mine", "--relation", "d", "--semantics", "stable", "--sweep", "1",
                                  "--first-seed", str(seed)])
    assert code3 == 1 and first["stats"]["seed"] == seed


def test_mine_none_found(capsys):
    code, doc = _json(capsys, ["mine", "--relation", "du", "--semantics", "stable", "--sweep", "10"])
    assert code == 0 and doc["verdict"] == "none-found" and doc["stats"]["tried"] == 10


def test_verify_default_table(capsys):
    code, doc = _json(capsys, ["verify", "--sweep", "10"])
    assert code == 0 and doc["verdict"] == "passed"
    assert doc["stats"]["coverage_gaps"] == []
    assert doc["stats"]["passed"] == doc["stats"]["claims"]


def test_verify_custom_table_failures(capsys, tmp_path):
    table = tmp_path / "claims.tbl"
    table.write_text('id=x kind=bijection relations=du semantics=stable expect=falsifies kb="p; !p"\n')
    code, doc = _json(capsys, ["verify", "--claims", str(table), "--sweep", "1"])
    assert code == 1 and doc["verdict"] == "failed"
    assert len(doc["stats"]["coverage_gaps"]) == 59
    table.write_text("id=x kind=wrong sweep\n")
    assert run(["verify", "--claims", str(table)]) == 2


def test_bad_sweep_parameters(capsys):
    assert run(["mine", "--relation", "du", "--semantics", "s", "--sweep", "0"]) == 2


@pytest.mark.skipif(shutil.which("argmc") is None, reason="console script not installed")
def test_console_script(tmp_path):
    path = tmp_path / "four.af"
    path.write_text(FOUR_NODE_AF)
    out = subprocess.run(["argmc", "solve", "--af", str(path), "--semantics", "stable"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.splitlines() == ["{a, b}", "{a, c}"]


def test_module_version():
    out = subprocess.run([sys.executable, "-m", "argmc", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("argmc ")
