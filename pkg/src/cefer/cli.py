"""Command-line interface.

Label files are `id<TAB>label`; class indices are assigned by lexicographic
rank of the label strings, so train and eval agree as long as both files
draw from the same label set.
"""

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import datasets
from .classifier import MLPConfig, evaluate, load_model, save_model, train
from .embeddings import PoolingSpec, pool_record, read_chsf, write_fvec, read_fvec
from .emotion_encoder import encode_tweet
from .errors import CeferError, EmptyTweet
from .experiment import parse_config_file, parse_spec, render_table, run_grid
from .lexicon import EmoSynLexicon, Source, SynonymGraph, build_emosyn, load_categorical_lexicon
from .preprocess import RawTweet, load_wordlist, preprocess_tweet


@click.group()
def main():
    """Emotion recognition pipeline: lexicon, encoding, pooling, training."""


@main.group("lexicon")
def lexicon_group():
    """Emotional dictionary construction."""


@lexicon_group.command("build")
@click.option("--nrc", type=click.Path(exists=True), help="word lexicon TSV: term<TAB>emotion<TAB>flag")
@click.option("--hashtag", type=click.Path(exists=True), help="hashtag lexicon TSV: emotion<TAB>term<TAB>score")
@click.option("--synonyms", type=click.Path(exists=True), help="synonym pairs TSV: term<TAB>synonym")
@click.option("--depth", default=3, show_default=True, help="synonym expansion depth")
@click.option("--threshold", default=0.0, show_default=True, help="hashtag score threshold")
@click.option("-o", "--output", required=True, type=click.Path())
def lexicon_build(nrc, hashtag, synonyms, depth, threshold, output):
    """Build and serialize the merged emotional dictionary."""
    seeds = []
    if nrc:
        seeds += load_categorical_lexicon(nrc, Source.NRC_EMOTION)
    if hashtag:
        seeds += load_categorical_lexicon(hashtag, Source.NRC_HASHTAG, threshold=threshold)
    if not seeds:
        raise click.UsageError("need at least one of --nrc / --hashtag")
    graph = SynonymGraph.from_tsv(synonyms) if synonyms else SynonymGraph()
    lex = build_emosyn(seeds, graph, max_depth=depth)
    lex.to_tsv(output)
    click.echo(f"wrote {len(lex.word_table)} word and {len(lex.hashtag_table)} hashtag terms to {output}")


@main.command("encode")
@click.option("--lexicon", "lexicon_path", required=True, type=click.Path(exists=True))
@click.option("--input", "input_path", required=True, type=click.Path(exists=True),
              help="tweets TSV: id<TAB>text")
@click.option("--wordlist", type=click.Path(exists=True), help="dictionary word list, one per line")
@click.option("-o", "--output", required=True, type=click.Path())
def encode_cmd(lexicon_path, input_path, wordlist, output):
    """Emit per-token emotion bit vectors as TSV."""
    lex = EmoSynLexicon.from_tsv(lexicon_path)
    words = load_wordlist(wordlist) if wordlist else None
    dropped = 0
    with open(input_path, encoding="utf-8") as fin, \
            open(output, "w", encoding="utf-8", newline="\n") as fout:
        for line in fin:
            line = line.rstrip("\n")
            if not line.strip():
                continue
            tid, text = line.split("\t", 1)
            text = text.split("\t")[0]
            try:
                clean = preprocess_tweet(RawTweet(id=tid, text=text), words)
            except EmptyTweet:
                dropped += 1
                continue
            matrix = encode_tweet(clean, lex)
            for index, (tok, vec) in enumerate(matrix.rows):
                fout.write(f"{tid}\t{index}\t{tok.surface}\t{vec.as_bitstring()}\n")
    if dropped:
        click.echo(f"dropped {dropped} tweets empty after cleaning", err=True)


@main.command("pool")
@click.option("--chsf", required=True, type=click.Path(exists=True))
@click.option("--scope", type=click.Choice(["cls", "token"]), required=True)
@click.option("--layers", default="last", show_default=True,
              help="last | all | last<k>")
@click.option("--combine", type=click.Choice(["concat", "avg", "sum"]), default="sum",
              show_default=True)
@click.option("-o", "--output", required=True, type=click.Path())
def pool_cmd(chsf, scope, layers, combine, output):
    """Pool hidden states into one sentence vector per record (.fvec)."""
    spec = parse_spec(f"{scope}/{layers}/{combine}")
    items = [(rec.sentence_id, pool_record(rec, spec).values) for rec in read_chsf(chsf)]
    write_fvec(output, items)
    click.echo(f"pooled {len(items)} records with {spec.describe()} into {output}")


def _read_labels(path):
    ids, labels = [], []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        rid, label = line.split("\t", 1)
        ids.append(rid)
        labels.append(label.strip())
    return ids, labels


def _aligned_arrays(features_path, labels_path):
    feats = dict(read_fvec(features_path))
    ids, labels = _read_labels(labels_path)
    missing = [i for i in ids if i not in feats]
    if missing:
        raise CeferError(f"{len(missing)} labeled ids missing from {features_path}, e.g. {missing[0]!r}")
    classes = sorted(set(labels))
    X = np.stack([feats[i] for i in ids]).astype(np.float64)
    y = np.array([classes.index(l) for l in labels])
    return X, y, classes


def _parse_train_cfg(path):
    kv = {}
    if path:
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, value = line.split("=", 1)
            kv[key.strip()] = value.strip()
    return kv


@main.command("train")
@click.option("--features", required=True, type=click.Path(exists=True))
@click.option("--labels", required=True, type=click.Path(exists=True))
@click.option("--config", type=click.Path(exists=True), help="flat key=value training config")
@click.option("--class-weights", type=click.Choice(["balanced"]), default=None)
@click.option("-o", "--output", required=True, type=click.Path())
def train_cmd(features, labels, config, class_weights, output):
    """Train the feed-forward head on pooled features."""
    X, y, classes = _aligned_arrays(features, labels)
    kv = _parse_train_cfg(config)
    cfg = MLPConfig(
        input_dim=X.shape[1],
        num_classes=len(classes),
        hidden_dims=[int(h) for h in kv.get("hidden_dims", "256").split(",")],
        learning_rate=float(kv.get("learning_rate", 1e-3)),
        epochs=int(kv.get("epochs", 30)),
        batch_size=int(kv.get("batch_size", 64)),
        seed=int(kv.get("seed", 0)),
        l2=float(kv.get("l2", 0.0)),
        class_weights=class_weights or kv.get("class_weights"),
    )
    model = train(X, y, cfg)
    save_model(model, output)
    click.echo(f"trained on {len(y)} examples, {len(classes)} classes -> {output}")


@main.command("eval")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--features", required=True, type=click.Path(exists=True))
@click.option("--labels", required=True, type=click.Path(exists=True))
@click.option("--report", required=True, type=click.Path())
@click.option("--figure/--no-figure", default=True, show_default=True,
              help="also render a confusion-matrix PNG next to the report")
def eval_cmd(model_path, features, labels, report, figure):
    """Evaluate a trained model; writes a JSON report (and a figure)."""
    model = load_model(model_path)
    X, y, classes = _aligned_arrays(features, labels)
    metrics = evaluate(model, X, y)
    doc = {"classes": classes, **metrics.to_dict()}
    Path(report).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if figure:
        from .plots import render_confusion_figure

        fig_path = str(Path(report).with_suffix(".png"))
        render_confusion_figure(metrics.confusion, classes, fig_path)
        click.echo(f"figure -> {fig_path}")
    click.echo(f"accuracy {metrics.accuracy:.4f}  macro-F1 {metrics.macro_f1:.4f}")


@main.group("data")
def data_group():
    """Dataset loading and verification."""


@data_group.command("check")
@click.option("--format", "fmt", type=click.Choice(["ei", "iest", "emotex"]), required=True)
@click.option("--split", type=click.Choice(["train", "dev", "test"]), default="train",
              show_default=True)
@click.argument("path", type=click.Path(exists=True))
def data_check(fmt, split, path):
    """Print record counts, label histogram, and published-total comparison."""
    sp = datasets.Split(split)
    if fmt == "ei":
        records = datasets.load_ei(path, sp)
        report = datasets.count_report(records, datasets.EI4, datasets.EXPECTED_EI_TOTAL)
    elif fmt == "iest":
        records = datasets.load_iest(path, sp)
        report = datasets.count_report(records, datasets.IEST6, datasets.EXPECTED_IEST_TEST_TOTAL)
    else:
        records = datasets.load_emotex(path)
        report = datasets.count_report(records, datasets.CIRCUMPLEX4, datasets.EXPECTED_EMOTEX_TOTAL)
    click.echo(json.dumps(report, indent=2, sort_keys=True))


@main.command("experiment")
@click.option("--config", required=True, type=click.Path(exists=True))
def experiment_cmd(config):
    """Run the pooling-strategy grid described by a flat key=value config."""
    cfg = parse_config_file(config)
    table = run_grid(cfg)
    text = render_table(table, "text")
    click.echo(text, nl=False)
    if cfg.output:
        base = Path(cfg.output)
        base.parent.mkdir(parents=True, exist_ok=True)
        base.with_suffix(".json").write_text(render_table(table, "json"), encoding="utf-8")
        base.with_suffix(".txt").write_text(text, encoding="utf-8")
        base.with_suffix(".csv").write_text(render_table(table, "csv"), encoding="utf-8")
        from .plots import render_accuracy_figure

        render_accuracy_figure(table, str(base.with_suffix(".png")))
        click.echo(f"reports -> {base.with_suffix('.json')} / .txt / .csv / .png")


if __name__ == "__main__":
    sys.exit(main())
