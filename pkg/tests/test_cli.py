import json

import numpy as np
from click.testing import CliRunner

from cefer.cli import main
from cefer.embeddings import read_fvec, write_chsf, write_fvec
from cefer.lexicon import EmoSynLexicon

from conftest import FIXTURES, make_record
from synth import build_planted_corpus


def run(*args):
    result = CliRunner().invoke(main, list(args), catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


def test_lexicon_build(tmp_path):
    out = tmp_path / "emosyn.tsv"
    run("lexicon", "build",
        "--nrc", str(FIXTURES / "nrc_emotion.tsv"),
        "--hashtag", str(FIXTURES / "nrc_hashtag.tsv"),
        "--synonyms", str(FIXTURES / "synonyms.tsv"),
        "--depth", "3", "--threshold", "0.0",
        "-o", str(out))
    lex = EmoSynLexicon.from_tsv(out)
    assert "delight" in lex.word_table  # expanded from "joy"
    assert "grrr" in lex.hashtag_table


def test_encode(tmp_path):
    lex_path = tmp_path / "emosyn.tsv"
    run("lexicon", "build", "--nrc", str(FIXTURES / "nrc_emotion.tsv"), "-o", str(lex_path))
    tweets = tmp_path / "tweets.tsv"
    tweets.write_text("t1\tI don't want to sit here any longer\n", encoding="utf-8")
    out = tmp_path / "emo.tsv"
    run("encode", "--lexicon", str(lex_path), "--input", str(tweets), "-o", str(out))
    rows = [line.split("\t") for line in out.read_text().splitlines()]
    by_token = {r[2].lower(): r[3] for r in rows}
    assert by_token["want"] == "11011001"
    assert by_token["any"] == "11110000"
    assert all(len(r) == 4 for r in rows)


def test_pool(tmp_path):
    chsf = tmp_path / "s.chsf"
    recs = [make_record("a", L=4, D=6, seed=1), make_record("b", L=4, D=6, seed=2)]
    write_chsf(chsf, recs)
    out = tmp_path / "f.fvec"
    run("pool", "--chsf", str(chsf), "--scope", "token", "--layers", "last4",
        "--combine", "sum", "-o", str(out))
    vecs = dict(read_fvec(out))
    assert set(vecs) == {"a", "b"}
    assert vecs["a"].shape == (6,)


def test_train_and_eval(tmp_path):
    rng = np.random.default_rng(0)
    n = 60
    X = np.vstack([rng.normal(size=(n // 2, 4)) + 3, rng.normal(size=(n // 2, 4)) - 3])
    ids = [f"r{i}" for i in range(n)]
    feats = tmp_path / "f.fvec"
    write_fvec(feats, list(zip(ids, X.astype(np.float32))))
    labels = tmp_path / "l.tsv"
    labels.write_text(
        "".join(f"{i}\t{'pos' if k < n // 2 else 'neg'}\n" for k, i in enumerate(ids)),
        encoding="utf-8")
    cfgf = tmp_path / "train.cfg"
    cfgf.write_text("epochs=20\nlearning_rate=0.1\nhidden_dims=8\nseed=0\n", encoding="utf-8")
    model = tmp_path / "m.cefm"
    run("train", "--features", str(feats), "--labels", str(labels),
        "--config", str(cfgf), "-o", str(model))
    report = tmp_path / "report.json"
    run("eval", "--model", str(model), "--features", str(feats), "--labels", str(labels),
        "--report", str(report))
    doc = json.loads(report.read_text())
    assert doc["accuracy"] >= 0.95
    assert (tmp_path / "report.png").exists()


def test_data_check(tmp_path):
    result = run("data", "check", "--format", "ei", str(FIXTURES / "ei.tsv"))
    doc = json.loads(result.output)
    assert doc["total"] == 20
    assert doc["expected_total"] == 7097


def test_experiment_writes_reports_and_figure(tmp_path):
    dataset, chsf, lexicon, _, _ = build_planted_corpus(tmp_path, n=50, seed=9)
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        f"dataset={dataset}\nchsf={chsf}\nlexicon={lexicon}\nuse_emosyn=true\n"
        f"grid=token/last/sum,cls/last/sum\nepochs=3\nhidden_dims=8\nseed=0\n"
        f"output={tmp_path / 'report'}\n",
        encoding="utf-8")
    run("experiment", "--config", str(cfg))
    assert (tmp_path / "report.json").exists()
    assert (tmp_path / "report.txt").exists()
    assert (tmp_path / "report.csv").exists()
    assert (tmp_path / "report.png").exists()
    doc = json.loads((tmp_path / "report.json").read_text())
    assert len(doc["rows"]) == 2
