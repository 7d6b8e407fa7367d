import json

import pytest

from dpstab import cli
from dpstab.graph import cycle_graph, emit_graph6, parse_graph6, petersen
from dpstab.permgroup import are_isomorphic


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out)


def strip_timing(envelope):
    return {k: v for k, v in envelope.items() if k != "timing"}


def test_stability_graph(capsys):
    code, env = run_json(capsys, "stability", "--graph", "petersen")
    assert code == 0 and env["command"] == "stability"
    assert env["result"]["kind"] == "stable"
    assert env["result"]["orders"] == {"aut_gamma": "120", "aut_sigma": "2", "aut_product": "240"}


def test_stability_pair_and_files(capsys, tmp_path):
    g6 = tmp_path / "c4.g6"
    g6.write_text(emit_graph6(cycle_graph(4)) + "\n")
    el = tmp_path / "k2.el"
    el.write_text("2\n0 1\n")
    code, env = run_json(capsys, "stability", "--pair", str(g6), str(el))
    assert code == 0 and env["result"]["kind"] == "trivially-unstable"


def test_unknown_input_exits_1(capsys):
    code, out, err = run(capsys, "stability", "--graph", "no-such-graph")
    assert code == 1 and "input error" in err and out == ""


def test_malformed_graph6_exits_1(capsys, tmp_path):
    bad = tmp_path / "bad.g6"
    bad.write_text("~~~~\n")
    assert run(capsys, "aut", str(bad))[0] == 1


def test_bad_arguments_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["stability"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_budget_exhaustion_exits_2(capsys):
    code, out, err = run(capsys, "aut", "petersen", "--budget", "1")
    assert code == 2 and "resource" in err


def test_lemma_violation_exits_3(capsys):
    # K_2 already violates the two-fold equivalence, so the sweep reports it
    code, env = run_json(capsys, "verify", "lemmas", "--order-cap", "2", "--single-cap", "2")
    assert code == 3 and env["result"]["violations"]


def test_verify_checks(capsys):
    code, env = run_json(capsys, "verify", "theorem-a", "--gamma", "petersen", "--sigma", "c6")
    assert code == 0 and env["result"]["summary"] == {"pass": 1}
    code, env = run_json(capsys, "verify", "prop-km", "--gamma", "k4", "--m", "3")
    assert code == 0
    code, env = run_json(capsys, "verify", "prop-cm-sweep", "--max-order", "6")
    assert code == 0 and "fail" not in env["result"]["summary"]


def test_aut(capsys):
    code, env = run_json(capsys, "aut", "c5.g6")
    r = env["result"]
    assert code == 0 and r["order"] == "10" and r["vertex_transitive"] and r["arc_transitive"]


def test_witness(capsys):
    code, env = run_json(capsys, "witness", "two-fold", "c4")
    assert code == 0 and env["result"]["witness"] is not None
    code, env = run_json(capsys, "witness", "two-fold", "c5")
    assert code == 0 and env["result"]["witness"] is None


def test_product_output_and_sidecar(capsys, tmp_path):
    out = tmp_path / "p.g6"
    code, env = run_json(capsys, "product", "c3", "k2", "-o", str(out))
    assert code == 0
    assert are_isomorphic(parse_graph6(out.read_text().strip()), cycle_graph(6))
    side = json.loads((tmp_path / "p.g6.json").read_text())
    assert side == {"indexing": "(u, x) -> u*n2 + x", "n1": 3, "n2": 2}


def test_env_precedence(capsys, monkeypatch):
    monkeypatch.setenv("DPSTAB_BUDGET", "1")
    assert run(capsys, "aut", "petersen")[0] == 2
    code, env = run_json(capsys, "aut", "petersen", "--budget", "100000")
    assert code == 0 and env["config"]["budget"] == 100000
    monkeypatch.setenv("DPSTAB_BUDGET", "lots")
    assert run(capsys, "aut", "petersen", "--budget", "5")[0] == 2
    assert run(capsys, "aut", "petersen")[0] == 1


def test_invalid_config_exits_1(capsys):
    assert run(capsys, "aut", "petersen", "--jobs", "0")[0] == 1


def test_text_and_csv(capsys):
    code, out, _ = run(capsys, "stability", "--graph", "petersen", "--format", "text")
    assert code == 0 and out.startswith("stability:") and "stable" in out
    code, out, _ = run(capsys, "stability", "--graph", "petersen", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "key,value"


def test_scan_corpus_csv(capsys, tmp_path):
    corpus = tmp_path / "corpus.g6"
    corpus.write_text(emit_graph6(petersen()) + "\n" + emit_graph6(cycle_graph(5)) + "\n")
    code, out, _ = run(capsys, "scan", "--corpus", str(corpus), "--m-range", "3-4", "--format", "csv")
    assert code == 0 and out.splitlines()[0].startswith("graph,g6,m,status")
    assert len(out.splitlines()) == 1 + 4


@pytest.mark.parametrize(
    "argv",
    [
        ("stability", "--graph", "petersen"),
        ("aut", "petersen"),
        ("witness", "sigma", "c4", "--sigma", "k2"),
        ("verify", "lemmas", "--order-cap", "3", "--fuzz", "20", "--seed", "7"),
        ("scan", "--arc-transitive", "6", "--m-range", "3-4", "--jobs", "2"),
    ],
)
def test_deterministic_json(capsys, argv):
    first = run_json(capsys, *argv)
    second = run_json(capsys, *argv)
    assert first[0] == second[0]
    assert strip_timing(first[1]) == strip_timing(second[1])
