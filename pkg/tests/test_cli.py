import shlex
import subprocess
import sys

import pytest

from coarsekit.cli import ConfigDocument, ConfigError, main


def run(*args):
    proc = subprocess.run([sys.executable, "-m", "coarsekit.cli", *args], capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_default_config_builds_everything():
    cfg = ConfigDocument.load(None)
    cfg.validate()
    assert cfg.scale.window == 4096 and cfg.normality_rmax == 4
    assert {"metric", "metric2x", "example5", "discrete", "filter"} <= set(cfg.presentations())


def test_close_query_record(capsys):
    assert main(["close", "--ballean", "metric", "--a", "evens", "--b", "odds"]) == 0
    out = capsys.readouterr().out.strip()
    assert out.startswith("op=close ballean=metric args=evens,odds verdict=yes witness_r=1 ")
    assert out.endswith("scale='rmax=16 window=4096 cutoff=2048'")


def test_large_query(capsys):
    assert main(["large", "--ballean", "example5", "--y", "twoN"]) == 0
    assert "verdict=yes witness_r=1" in capsys.readouterr().out


def test_compare_query(capsys):
    assert main(["compare", "--a", "metric", "--b", "metric2x", "--pairs", "default"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 12 and all(" agree=true " in line for line in lines)


def test_unknown_verdict_is_not_an_error(capsys):
    assert main(["close", "--ballean", "metric", "--a", "pow4", "--b", "twopow4"]) == 0
    assert "verdict=unknown" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["close", "--ballean", "nope", "--a", "evens", "--b", "odds"],
    ["close", "--ballean", "metric", "--a", "nope", "--b", "odds"],
    ["mu", "--ballean", "metric", "--f", "nope"],
    ["net", "--ballean", "metric", "--r", "99"],
    ["suite", "theorem1", "--ballean", "nope"],
    ["--config", "/nonexistent.ini", "discrete", "--ballean", "metric"],
    ["bogus"],
])
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_bad_config_files(tmp_path):
    cases = {
        "cycle.ini": "[presentation:a]\nkind = reindexed\nbase = a\n",
        "kind.ini": "[presentation:a]\nkind = hyperbolic\n",
        "nokind.ini": "[subset:s]\na = 1\n",
        "section.ini": "[widget:a]\nkind = metric\n",
        "scale.ini": "[scale]\nrmax = 4\nwindow = 10\ncutoff = 10\n",
        "param.ini": "[subset:s]\nkind = arithmetic\na = 0\nb = 0\n",
    }
    for name, text in cases.items():
        path = tmp_path / name
        path.write_text(text)
        with pytest.raises(ConfigError):
            ConfigDocument.load(str(path)).validate()


def test_custom_config(tmp_path, capsys):
    path = tmp_path / "c.ini"
    path.write_text(
        "[scale]\nrmax = 4\nwindow = 256\ncutoff = 128\n"
        "[presentation:m]\nkind = metric\n"
        "[presentation:sub]\nkind = subballean\nbase = m\nsubset = tri\n"
        "[subset:tri]\nkind = arithmetic\na = 0\nb = 3\n"
        "[subset:mix]\nkind = union\nparts = tri, pts\n"
        "[subset:pts]\nkind = list\npoints = 1, 2\n"
    )
    assert main(["--config", str(path), "large", "--ballean", "m", "--y", "mix"]) == 0
    assert "verdict=yes witness_r=1" in capsys.readouterr().out
    assert main(["--config", str(path), "discrete", "--ballean", "sub"]) == 0
    assert "verdict=no" in capsys.readouterr().out


def test_every_query_command_runs(capsys):
    commands = [
        ["linked", "--ballean", "discrete", "--a", "evens", "--b", "odds"],
        ["asymdisj", "--ballean", "metric", "--a", "pow4", "--b", "twopow4"],
        ["discrete", "--ballean", "finitary"],
        ["mu", "--ballean", "metric", "--f", "square"],
        ["so", "--ballean", "metric", "--f", "sqrt", "--epsilon", "0.1", "--rmax", "1"],
        ["neighbourhood", "--ballean", "metric", "--u", "pow4band", "--a", "pow4"],
        ["separate", "--ballean", "metric", "--a", "pow4", "--b", "twopow4"],
        ["separate", "--ballean", "metric", "--a", "evens", "--b", "odds"],
        ["net", "--ballean", "metric", "--r", "2"],
    ]
    expected = ["verdict=no", "verdict=yes-at-scale", "verdict=yes-at-scale", "verdict=no witness_r=1",
                "witness_cutoffs=0:0,1:101", "verdict=yes-at-scale", "verdict=yes-at-scale",
                "verdict=precondition-failed", "points=0,5,10,15"]
    for argv, want in zip(commands, expected):
        assert main(argv) == 0
        assert want in capsys.readouterr().out, argv


def test_suite_exit_codes_and_formats():
    code, out, _ = run("suite", "theorem1", "--ballean", "discrete")
    assert code == 0 and "fail=0" in out
    code, out, _ = run("suite", "example5", "--format", "records")
    assert code == 0
    assert any("anchor='Example 5'" in line for line in out.splitlines())
    code, _, err = run("suite", "filter", "--ballean", "nope")
    assert code == 2 and "config error" in err


def test_failing_suite_exits_1(tmp_path):
    path = tmp_path / "strict.ini"
    path.write_text("[suite]\nnormality_rmax = 16\n[presentation:metric]\nkind = metric\n")
    code, out, _ = run("--config", str(path), "suite", "normality", "--format", "records")
    assert code == 1 and "outcome=fail" in out


def test_text_and_records_carry_same_outcomes():
    _, text, _ = run("suite", "normality")
    _, records, _ = run("suite", "normality", "--format", "records")
    for line in records.splitlines():
        fields = dict(tok.split("=", 1) for tok in shlex.split(line))
        if "check" in fields:
            assert f"[{fields['outcome']:7}] {fields['check']}  ({fields['anchor']})" in text
