from __future__ import annotations

import json

import pytest

from conftest import SPECS
from monadcolim import cli
from monadcolim.errors import SpecError
from monadcolim.specfile import load_spec, parse_spec


def spec(name):
    return str(SPECS / name)


# -- exit codes ---------------------------------------------------------------------


@pytest.mark.parametrize("command, name, code", [
    ("check-laws", "exception_laws.yaml", cli.EXIT_OK),
    ("check-laws", "broken_writer.yaml", cli.EXIT_LAW),
    ("check-laws", "malformed.yaml", cli.EXIT_PARSE),
    ("coproduct", "exception_coproduct.yaml", cli.EXIT_OK),
    ("coproduct", "terminal_coproduct.yaml", cli.EXIT_SEPARATED),
    ("coproduct", "free_coproduct.yaml", cli.EXIT_BUDGET),
    ("coequalizer", "exception_merge.yaml", cli.EXIT_OK),
    ("coequalizer", "graph_sigma_tau.yaml", cli.EXIT_BUDGET),
    ("cointersection", "cointersection.yaml", cli.EXIT_OK),
    ("colimit", "span_colimit.yaml", cli.EXIT_OK),
    ("coequalizer", "exception_coproduct.yaml", cli.EXIT_PARSE),
])
def test_exit_codes(command, name, code):
    argv = [command, spec(name)]
    if name == "graph_sigma_tau.yaml":
        argv += ["--budget", "3"]
    assert cli.run(argv).code == code


def test_exit_code_constants():
    assert (cli.EXIT_OK, cli.EXIT_LAW, cli.EXIT_PARSE, cli.EXIT_SEPARATED, cli.EXIT_BUDGET) == (0, 1, 2, 3, 4)


def test_missing_file_is_a_parse_error():
    assert cli.run(["check-laws", spec("no_such_file.yaml")]).code == cli.EXIT_PARSE


def test_two_spec_files_rejected():
    assert cli.run(["check-laws", spec("exception_laws.yaml"), spec("exception_merge.yaml")]).code == 2


# -- command outputs ---------------------------------------------------------------------


def test_coequalizer_merges_to_one_exception():
    out = cli.run(["coequalizer", spec("exception_merge.yaml"), "--sizes", "0,1,2",
                   "--format", "structured"])
    sizes = [sum(len(v) for v in o["carrier"].values()) for o in out.payload["objects"]]
    assert sizes == [1, 2, 3]
    assert all(r["ok"] for r in out.payload["reports"])


def test_cointersection_leaves_one_exception():
    out = cli.run(["cointersection", spec("cointersection.yaml"), "--sizes", "0,1,2"])
    sizes = [sum(len(v) for v in o["carrier"].values()) for o in out.payload["objects"]]
    assert sizes == [1, 2, 3]


def test_span_colimit_via_coproduct_and_coequalizer():
    out = cli.run(["colimit", spec("span_colimit.yaml"), "--sizes", "0,1,2"])
    assert out.code == 0
    # e, f and g are all identified
    sizes = [sum(len(v) for v in o["carrier"].values()) for o in out.payload["objects"]]
    assert sizes == [1, 2, 3]


def test_budget_exhaustion_reports_profile():
    out = cli.run(["coequalizer", spec("graph_sigma_tau.yaml"), "--budget", "3"])
    assert out.code == cli.EXIT_BUDGET
    prof = out.payload["profile"]
    assert len(prof) == 3 and all(a < b for a, b in zip(prof, prof[1:]))
    assert any("growth profile" in line for line in out.lines)


def test_free_coproduct_per_depth_agrees_with_oracle():
    out = cli.run(["coproduct", spec("free_coproduct.yaml"), "--depth", "2", "--sizes", "1"])
    rows = out.payload["objects"][0]["per_depth"]
    assert [r["atoms"] for r in rows] == [1, 3, 7]
    assert all(r["agrees_with_term_oracle"] for r in rows)


def test_counterexample_default_and_budget_one():
    out = cli.run(["counterexample"])
    assert out.code == 0
    assert out.payload["no_coequalizer"]["L"]["vertex_counts"] == [1, 3, 9, 513]
    short = cli.run(["counterexample", "--budget", "1"])
    assert short.payload["no_coequalizer"]["L"]["vertex_counts"] == [1, 3]
    assert any(line.startswith("verdict:") for line in short.lines)


def test_structured_and_text_agree(capsys):
    argv = ["coproduct", spec("exception_coproduct.yaml"), "--sizes", "0,1"]
    assert cli.main(argv + ["--format", "structured"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["exit_code"] == 0
    assert cli.main(argv) == 0
    text = capsys.readouterr().out
    for o in doc["objects"]:
        n = sum(len(v) for v in o["carrier"].values())
        assert f"{n} atoms" in text


def test_bad_budget_rejected():
    assert cli.run(["counterexample", "--budget", "0"]).code == cli.EXIT_PARSE


# -- run configuration and spec files ---------------------------------------------------


@pytest.mark.parametrize("kwargs", [{"budget": 0}, {"depth": -1}, {"sizes": ()}])
def test_run_config_validation(kwargs):
    with pytest.raises(SpecError):
        cli.RunConfig("check-laws", **kwargs)


@pytest.mark.parametrize("text", [
    "version: 2\nmonads: {}",
    "- just a list",
    "version: 1\nbase: category\n",
    "version: 1\nmonads: {E: {kind: nonsense}}",
    "version: 1\nmonads: {E: {kind: exception, exceptions: [e]}}\ncoproduct: [E, F]",
    "version: 1\nmonads: {E: {kind: exception, exceptions: [e]}}\narrows: {u: {from: E, to: X}}",
    "version: 1\nmonads: {F: {kind: presentation, ops: {s: 1}, rules: ['s(s(x) -> x']}}",
    "version: 1\nmonads: {E: {kind: exception, exceptions: [e]}}\ncolimit: {nodes: [E], terminal: Z}",
    "version: 1\nmonads: [1, 2]",
    "version: 1\nmonads: {E: {kind: exception}\n",
])
def test_spec_errors(text):
    with pytest.raises(SpecError):
        parse_spec(text)


def test_every_demo_spec_except_malformed_loads():
    for path in sorted(SPECS.glob("*.yaml")):
        if path.name == "malformed.yaml":
            with pytest.raises(SpecError):
                load_spec(path)
        else:
            assert load_spec(path).monads
