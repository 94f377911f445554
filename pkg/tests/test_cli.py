"""Black-box tests: the CLI is run as a subprocess and judged by exit code and output."""

import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from stablenet.fixtures import fixture_path

SCHEMA = json.loads(resources.files("stablenet").joinpath("schema/report.schema.json").read_text())


def run(*args, stdin=None):
    proc = subprocess.run([sys.executable, "-m", "stablenet", *map(str, args)], capture_output=True,
                          text=True, input=stdin, timeout=120)
    return proc.returncode, proc.stdout, proc.stderr


def f(name):
    return fixture_path(name)


@pytest.mark.parametrize("args, code", [
    (("is-stable", f("fig1")), 0),
    (("is-stable", f("fig2_i")), 1),
    (("is-stable", f("fig2_iii")), 0),
    (("is-sound", f("fig6_i")), 0),
    (("is-tree-based", f("fig1")), 0),
    (("is-reticulation-visible", f("fig1")), 1),
    (("is-reticulation-visible", f("fig1_extended")), 0),
    (("displays", f("fig1"), f("fig1_dashed")), 0),
    (("displays", f("fig1"), f("fig1_dotted")), 1),
    (("is-base-tree", f("fig2_iii"), f("triplet_23_1")), 1),
    (("is-base-tree", f("fig2_i"), f("triplet_23_1")), 0),
    (("compare", f("fig5_M"), f("fig5_Mprime")), 1),
    (("compare", f("fig5_FM"), f("fig5_FM")), 0),
    (("unfold", f("fig2_i")), 0),
    (("foldup", f("fig2_ii")), 0),
    (("validate", f("fig1")), 0),
    (("validate", "--kind", "phylonetwork", f("fig6_iii")), 1),
])
def test_exit_codes(args, code):
    assert run(*args)[0] == code


def test_is_tree_child_reports_vertex():
    code, out, _ = run("is-tree-child", f("fig1"))
    assert code == 1
    assert "counterexample_vertex\t" in out


def test_displays_both_reports_two_witnesses():
    code, out, err = run("displays", "--both", f("fig2_iii"), f("triplet_3_12"))
    assert code == 0, err
    lines = dict(line.split("\t", 1) for line in out.splitlines())
    assert lines["agree"] == "true"
    assert int(lines["witness_count"]) >= 2


@pytest.mark.parametrize("command", ["is-tree-child", "is-reticulation-visible", "is-tree-based"])
def test_both_agrees_on_corpus(command):
    for name in ["fig1", "fig1_extended", "fig2_iii", "fig5_FM", "fig5_FMprime", "fig6_ii",
                 "ancestor_clause_counterexample"]:
        code, out, err = run(command, "--both", f(name))
        assert code in (0, 1), (name, err)
        if name == "fig6_ii" and command == "is-tree-based":
            # not stable, so only the oracle applies
            assert "note\tnetwork is not stable" in out
        else:
            assert "agree\ttrue" in out


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.enwk"
    bad.write_text("((1,2),3")
    code, _, err = run("is-stable", bad)
    assert code == 2 and "line 1" in err
    assert run("is-stable", tmp_path / "missing.enwk")[0] == 2
    assert run("no-such-command")[0] == 2
    assert run("is-stable")[0] == 2
    assert run("displays", "--oracle", "--both", f("fig1"), f("fig1_dashed"))[0] == 2
    assert run("is-base-tree", f("fig1"), f("fig1"))[0] == 2


def test_budget_exit_codes():
    assert run("unfold", "--path-cap", "3", f("fig1"))[0] == 3
    assert run("is-tree-based", "--limit-xsets", "2", f("fig1"))[0] == 3


def test_stdin():
    code, out, _ = run("unfold", "-", stdin="((1,#H1),(2,(3)#H1));")
    assert code == 0
    assert out.strip() == "((1,3),(2,3));"


@pytest.mark.parametrize("args", [
    ("is-stable", "--format", "json", f("fig1")),
    ("displays", "--both", "--format", "json", f("fig2_iii"), f("triplet_3_12")),
    ("is-tree-child", "--format", "json", f("fig1")),
    ("unfold", "--format", "json", f("fig1")),
    ("foldup", "--format", "json", f("fig5_M")),
    ("trinets", "--format", "json", f("fig1")),
    ("mul-triplets", "--format", "json", f("fig5_M")),
    ("unfold", "--format", "json", "--path-cap", "3", f("fig1")),
])
def test_json_reports_match_schema(args):
    code, out, _ = run(*args)
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert report["exit_code"] == code
    assert len(report["inputs"]) >= 1


def test_json_xset_witness_uses_leaf_indices():
    _, out, _ = run("is-base-tree", "--format", "json", f("fig1"), f("fig1_dashed"))
    witness = json.loads(out)["result"]["decider"]["witness"]
    assert set(witness["xset"]) == {"1", "2", "3", "4"}
    assert all(isinstance(i, int) and i >= 0 for i in witness["xset"].values())


def test_dot_output():
    code, out, _ = run("displays", "--oracle", "--format", "dot", f("fig2_iii"), f("triplet_3_12"))
    assert code == 0
    assert out.startswith("digraph") and "style=dashed" in out
    code, out, _ = run("unfold", "--format", "dot", f("fig2_i"))
    assert code == 0 and out.count("->") == 8


def test_listing_commands():
    _, out, _ = run("mul-triplets", f("fig5_M"))
    assert len(out.split()) == 21
    _, out2, _ = run("mul-triplets", f("fig5_Mprime"))
    assert out == out2
    _, out, _ = run("triplets", f("fig2_iii"))
    assert out.split() == ["((1,2),3)"]
    _, out, _ = run("trinets", f("fig1"))
    assert len(out.splitlines()) == 4
    _, out, _ = run("restrict", f("fig6_i"), "1,2,4")
    assert out.strip() == "(((1,2),(1,2)),4);"


def test_foldup_seed_gives_same_network():
    outs = {run("foldup", "--seed", s, f("fig5_M"))[1] for s in range(4)}
    assert len(outs) == 1


def test_report(tmp_path):
    out_dir = tmp_path / "rep"
    code, out, err = run("report", f("fig1"), "--out", out_dir, "--tree", f("fig1_dashed"), "--tree", f("fig1_dotted"))
    assert code == 0, err
    for name in ["network.png", "unfold.png", "class_sizes.png", "verdicts.tsv", "classes.tsv", "report.json"]:
        assert (out_dir / name).stat().st_size > 0
    assert (out_dir / "network.png").read_bytes()[:4] == b"\x89PNG"
    rows = [line.split("\t") for line in (out_dir / "verdicts.tsv").read_text().splitlines()[1:]]
    verdicts = {r[0]: r[1] for r in rows}
    assert verdicts["stable"] == "true" and verdicts["tree_child"] == "false"
    classes = (out_dir / "classes.tsv").read_text().splitlines()
    assert len(classes) == 11
    code, out, _ = run("report", f("fig2_i"), "--out", tmp_path / "rep2", "--format", "json")
    assert code == 0
    jsonschema.validate(json.loads(out), SCHEMA)
    assert (tmp_path / "rep2" / "foldup.png").exists()


def test_console_script_entry_point():
    from stablenet.cli import main

    assert main(["is-stable", str(f("fig2_iii"))]) == 0
    assert main(["--version"]) == 0


def test_tree_child_answer_does_not_come_from_the_xset_criterion():
    code, out, err = run("is-tree-child", "--both", f("tree_child_xset_counterexample"))
    assert code == 1, err
    assert "xset_criterion\ttrue\tmethod=c" in out
    assert "agree\ttrue" in out


def test_retvis_answer_does_not_come_from_the_xset_criterion():
    code, out, err = run("is-reticulation-visible", "--both", f("retvis_xset_counterexample"))
    assert code == 0, err
    assert "xset_criterion\tfalse\tmethod=b" in out
