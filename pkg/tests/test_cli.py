import json

import pytest

from interpolab.cli import main


def run(argv):
    return main(argv)


def test_gen_solve_logz_pipeline(tmp_path):
    graph = tmp_path / "g.txt"
    assert run(["gen", "--ensemble", "er", "--n", "6", "--m", "7",
                "--seed", "3", "--out", str(graph)]) == 0
    summary = tmp_path / "s.json"
    assert run(["solve", "--model", "is", "--input", str(graph),
                "--out", str(summary)]) == 0
    rec = json.loads(summary.read_text())
    assert rec["format"] == "ground-state-summary-v1"
    assert rec["value"] >= 1

    gibbs = tmp_path / "z.json"
    assert run(["logz", "--model", "maxcut", "--input", str(graph),
                "--lam", "2.0", "--out", str(gibbs)]) == 0
    rec = json.loads(gibbs.read_text())
    assert rec["format"] == "gibbs-table-v1" and rec["fugacity"] == 2.0


def test_gen_simple_and_config(tmp_path):
    out = tmp_path / "s.txt"
    assert run(["gen", "--ensemble", "er-simple", "--n", "5", "--m", "4",
                "--out", str(out)]) == 0
    assert out.read_text().startswith("hypergraph-v1\n5 2 4")
    assert run(["gen", "--ensemble", "config", "--n", "6", "--r", "2",
                "--k", "3", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[1] == "6 3 4"


def test_check_superadd_er_report_and_exit(tmp_path):
    rep = tmp_path / "rep.json"
    code = run(["check", "superadd-er", "--model", "is", "--n", "10",
                "--n1", "5", "--c", "1.0", "--samples", "1500",
                "--seed", "7", "--out", str(rep)])
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["body"]["verdict"] == "pass"
    assert doc["body"]["params"]["n_edges"] == 10
    assert doc["body"]["seed"] == 7
    assert "timestamp" in doc["header"]


def test_config_file_with_cli_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n=10\nn1=5\nc=1.0\nsamples=1500\nmodel=is\n")
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run(["check", "superadd-er", "--model", "is", "--n", "10",
                "--n1", "5", "--c", "1.0", "--samples", "1500",
                "--seed", "7", "--out", str(a)]) == 0
    assert run(["check", "superadd-er", "--config", str(cfg),
                "--seed", "7", "--out", str(b)]) == 0
    body_a = json.dumps(json.loads(a.read_text())["body"], sort_keys=True)
    body_b = json.dumps(json.loads(b.read_text())["body"], sort_keys=True)
    assert body_a == body_b


def test_report_bodies_reproduce(tmp_path):
    outs = []
    for name in ("r1.json", "r2.json"):
        path = tmp_path / name
        assert run(["check", "monotone", "--model", "ksat", "--n", "8",
                    "--ladder", "0 3 6", "--samples", "200", "--seed", "5",
                    "--out", str(path)]) == 0
        outs.append(json.dumps(json.loads(path.read_text())["body"],
                               sort_keys=True))
    assert outs[0] == outs[1]


def test_emit_plot_data(tmp_path):
    rep = tmp_path / "rep.json"
    plot = tmp_path / "plot.csv"
    assert run(["check", "concentration", "--model", "is", "--c", "1.0",
                "--sizes", "6 8", "--samples", "400", "--seed", "2",
                "--out", str(rep), "--emit-plot-data", str(plot)]) == 0
    lines = plot.read_text().splitlines()
    assert lines[0] == "x,y,yerr" and len(lines) == 3


def test_satprob_exact_and_mc(tmp_path):
    rep = tmp_path / "rep.json"
    assert run(["satprob", "--model", "ksat", "--n", "3", "--m", "2",
                "--exact", "--out", str(rep)]) == 0
    doc = json.loads(rep.read_text())
    assert doc["body"]["params"]["rational"] == "215/216"
    assert run(["satprob", "--model", "coloring", "--n", "4", "--m", "3",
                "--samples", "500", "--seed", "3", "--out", str(rep)]) == 0
    assert json.loads(rep.read_text())["body"]["params"]["ensemble"] == "simple"


def test_interp_subcommands(tmp_path):
    rep = tmp_path / "rep.json"
    assert run(["interp-er", "--model", "nae", "--n", "6", "--m", "5",
                "--n1", "3", "--count", "8", "--seed", "1",
                "--out", str(rep)]) == 0
    assert json.loads(rep.read_text())["body"]["verdict"] == "pass"
    assert run(["interp-reg", "--n", "8", "--n1", "4", "--r", "2",
                "--runs", "40", "--seed", "2", "--out", str(rep)]) == 0
    assert json.loads(rep.read_text())["body"]["verdict"] == "pass"


def test_limit_pass_and_violation(tmp_path):
    seq = tmp_path / "seq.csv"
    seq.write_text("n,value\n" + "\n".join(f"{n},{3 * n}" for n in range(1, 65)))
    rep = tmp_path / "rep.json"
    assert run(["limit", "--sequence", str(seq), "--alpha", "0.5",
                "--c-const", "0.0", "--out", str(rep)]) == 0
    doc = json.loads(rep.read_text())
    assert doc["body"]["estimates"]["limit-estimate"]["value"] == 3.0

    import math
    seq.write_text("\n".join(f"{n},{n * math.sin(n)}" for n in range(1, 65)))
    assert run(["limit", "--sequence", str(seq), "--alpha", "0.5",
                "--c-const", "1.0", "--out", str(rep)]) == 1
    doc = json.loads(rep.read_text())
    assert doc["body"]["verdict"] == "fail"
    assert doc["body"]["params"]["violation_n"] > 0


def test_usage_and_cap_exit_codes(tmp_path):
    with pytest.raises(SystemExit) as err:
        run(["unknown-command"])
    assert err.value.code == 2
    # cap violations name the cap and exit 2
    big = tmp_path / "big.txt"
    assert run(["gen", "--ensemble", "er", "--n", "30", "--m", "3",
                "--out", str(big)]) == 0
    assert run(["solve", "--model", "is", "--input", str(big)]) == 2


def test_lemma_and_delta_unusual_families(tmp_path):
    rep = tmp_path / "rep.json"
    assert run(["check", "lemma-a1", "--model", "ksat", "--n", "3", "--m", "1",
                "--extra", "1", "--delta", "0.25", "--out", str(rep)]) in (0, 1)
    doc = json.loads(rep.read_text())
    assert doc["body"]["verdict"] in ("pass", "inconclusive")
    assert run(["check", "delta-unusual", "--model", "coloring", "--n", "5",
                "--m", "4", "--q", "2", "--delta", "0.3", "--samples", "200",
                "--seed", "4", "--out", str(rep)]) == 0
