import csv
import json

import pytest

from collocnet import cli


@pytest.fixture
def corpus(tmp_path):
    root = tmp_path / "corpus"
    texts = {
        "news/a.txt": "The quick brown fox jumped over the lazy dog. The dog slept.",
        "news/b.txt": "Markets rose today as the quick traders bought the dip again and again.",
        "blog/c.txt": "The airplane took off. Off we go to Alaska, off and away we go.",
    }
    for rel, text in texts.items():
        (root / rel).parent.mkdir(parents=True, exist_ok=True)
        (root / rel).write_text(text, encoding="utf-8")
    return root


def rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_props_rows(corpus, tmp_path):
    out = tmp_path / "out"
    assert run("props", "--corpus", corpus, "--net-type", "digraph,undigraph2", "--skip-pvalues", "--out", out) == 0
    table = rows(out / "properties.csv")
    assert len(table) == 6
    assert {r["net_type"] for r in table} == {"digraph", "undigraph2"}
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["seed"] == 0 and meta["rng"] and "numpy" in meta["versions"]
    assert meta["config"]["net_type"] == "digraph,undigraph2"


def test_props_bad_document_does_not_abort(corpus, tmp_path):
    (corpus / "blog" / "empty.txt").write_text("...", encoding="utf-8")
    out = tmp_path / "out"
    assert run("props", "--corpus", corpus, "--net-type", "digraph", "--skip-pvalues", "--out", out) == 0
    [row] = [r for r in rows(out / "properties.csv") if r["doc_id"] == "blog/empty.txt"]
    assert row["n_vertices"] == "0"
    assert row["alpha"] == "" and row["alpha_reason"]


def test_grow_hundred_rows(corpus, tmp_path):
    out = tmp_path / "g"
    assert run("grow", "--corpus", corpus, "--net-type", "digraph", "--skip-pvalues", "--out", out) == 0
    growth = rows(out / "growth_digraph_occurrence.csv")
    assert [int(r["k"]) for r in growth] == list(range(1, 101))
    trends = rows(out / "trends_digraph_occurrence.csv")
    assert {r["test"] for r in trends if r["property"] == "n_vertices"} == {"runs", "bartels", "mann_kendall"}


def test_compare_four_genres(tmp_path):
    root = tmp_path / "c"
    words = "alpha beta gamma delta epsilon zeta eta theta iota kappa".split()
    for gi, genre in enumerate(["g1", "g2", "g3", "g4"]):
        for d in range(3):
            (root / genre).mkdir(parents=True, exist_ok=True)
            text = " ".join(words[(gi + d + i * (gi + 1)) % len(words)] for i in range(30 + 10 * gi))
            (root / genre / f"{d}.txt").write_text(text, encoding="utf-8")
    out = tmp_path / "cmp"
    props = "n_edges,global_clustering"
    assert run("compare", "--corpus", root, "--net-type", "digraph", "--props", props, "--skip-pvalues", "--out", out) == 0
    table = rows(out / "compare_digraph.csv")
    for prop in props.split(","):
        for test in ("anova", "kruskal_wallis"):
            assert sum(r["property"] == prop and r["test"] == test for r in table) == 1
        for test in ("t_test", "mann_whitney_u", "ks_two_sample"):
            picked = [r for r in table if r["property"] == prop and r["test"] == test]
            assert len(picked) == 6
            assert {r["family_size"] for r in picked} == {"12"}


def test_dist_from_props_csv(corpus, tmp_path):
    out = tmp_path / "p"
    run("props", "--corpus", corpus, "--net-type", "all", "--skip-pvalues", "--out", out)
    dist = tmp_path / "d"
    assert run("dist", "--props-csv", out / "properties.csv", "--by", "net-type", "--genre", "news", "--out", dist) == 0
    table = rows(dist / "dist_news_n_edges.csv")
    assert len(table) == 20
    assert list(table[0])[2:] == ["digraph", "undigraph1", "undigraph2", "sdigraph", "sundigraph1", "sundigraph2"]
    for col in list(table[0])[2:]:
        assert sum(float(r[col]) for r in table) == pytest.approx(100.0)


def test_fit_subcommand(tmp_path):
    data = tmp_path / "deg.txt"
    data.write_text("\n".join(str(v) for v in [1] * 50 + [2] * 15 + [3] * 7 + [4] * 4 + [6, 9, 13]), encoding="utf-8")
    out = tmp_path / "f"
    assert run("fit", "--input", data, "--bootstrap-b", "10", "--out", out) == 0
    [row] = rows(out / "fit.csv")
    assert float(row["alpha"]) > 1 and 0 <= float(row["pvalue"]) <= 1


def test_build_writes_edgelists(corpus, tmp_path):
    out = tmp_path / "b"
    assert run("build", "--corpus", corpus, "--net-type", "sdigraph", "--collection", "--out", out) == 0
    assert (out / "networks" / "sdigraph" / "news" / "a.txt.edgelist").exists()
    assert (out / "collections" / "sdigraph" / "blog.edgelist").exists()


@pytest.mark.parametrize("command", ["props", "grow", "dist", "compare", "build"])
def test_reruns_are_byte_identical(corpus, tmp_path, command):
    extra = {
        "props": ["--bootstrap-b", "5"],
        "grow": ["--checkpoints", "10,50,100", "--bootstrap-b", "5"],
        "dist": ["--skip-pvalues"],
        "compare": ["--skip-pvalues"],
        "build": [],
    }[command]
    outs = [tmp_path / f"r{i}" for i in range(2)]
    for out in outs:
        assert run(command, "--corpus", corpus, "--net-type", "digraph", "--seed", "7", *extra, "--out", out) == 0
    files = sorted(p.relative_to(outs[0]) for p in outs[0].rglob("*") if p.is_file() and p.name != "metadata.json")
    assert files
    for rel in files:
        assert (outs[0] / rel).read_bytes() == (outs[1] / rel).read_bytes(), rel


def test_env_override(corpus, tmp_path, monkeypatch):
    monkeypatch.setenv("COLLOCNET_BOOTSTRAP_B", "3")
    monkeypatch.setenv("COLLOCNET_SKIP_PVALUES", "true")
    out = tmp_path / "e"
    assert run("props", "--corpus", corpus, "--net-type", "digraph", "--out", out) == 0
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["config"]["bootstrap_b"] == 3 and meta["config"]["skip_pvalues"] is True
    # command line beats the environment
    assert run("props", "--corpus", corpus, "--net-type", "digraph", "--bootstrap-b", "4", "--out", out) == 0
    assert json.loads((out / "metadata.json").read_text())["config"]["bootstrap_b"] == 4


@pytest.mark.parametrize(
    "argv",
    [
        ["props", "--corpus", "/nonexistent/root", "--out", "{out}"],
        ["props", "--corpus", "{corpus}", "--net-type", "tree", "--out", "{out}"],
        ["props", "--corpus", "{corpus}", "--bootstrap-b", "0", "--out", "{out}"],
        ["grow", "--corpus", "{corpus}", "--checkpoints", "5-150", "--out", "{out}"],
        ["dist", "--corpus", "{corpus}", "--net-type", "all", "--out", "{out}"],
        ["compare", "--corpus", "{corpus}", "--by", "net-type", "--out", "{out}"],
        ["dist", "--corpus", "{corpus}", "--bins", "0", "--out", "{out}"],
    ],
)
def test_invalid_config_exit_code(corpus, tmp_path, argv, capsys):
    filled = [a.format(out=tmp_path / "x", corpus=corpus) for a in argv]
    assert cli.main(filled) == 2
    assert "error" in capsys.readouterr().err


def test_unknown_subcommand_exits_nonzero():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code != 0
