"""Grid runner: pool hidden states under each strategy, optionally fuse the
emotion vector, train a fresh classifier head per cell, and tabulate
accuracy/macro-F1 in the same row structure as the pooling-comparison
tables (layer subsets x combine functions, with and without the lexicon).
"""

import io
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import datasets
from .classifier import MLPConfig, evaluate, train
from .embeddings import (
    Combine,
    PoolingSpec,
    Scope,
    pool_cls,
    pool_record,
    read_chsf,
    word_vectors,
)
from .emotion_encoder import EmotionVector, encode_token
from .errors import CeferError, MissingRecord, ParseError
from .lexicon import EmoSynLexicon
from .meta_embedding import meta_sentence
from .preprocess import RawTweet, load_wordlist, preprocess_tweet


@dataclass
class ExperimentConfig:
    dataset: str
    chsf: str
    grid: list
    use_emosyn: bool = False
    lexicon: str | None = None
    wordlist: str | None = None
    dataset_format: str = "generic"
    seed: int = 0
    hidden_dims: list = field(default_factory=lambda: [256])
    learning_rate: float = 1e-3
    epochs: int = 30
    batch_size: int = 64
    l2: float = 0.0
    output: str | None = None

    def __post_init__(self):
        if not self.grid:
            raise ValueError("grid must be non-empty")
        if self.use_emosyn and not self.lexicon:
            raise ValueError("use_emosyn requires a lexicon path")


@dataclass
class GridRow:
    spec: PoolingSpec
    use_emosyn: bool
    accuracy: float
    macro_f1: float
    wall_time: float


@dataclass
class ResultTable:
    rows: list
    dataset_name: str
    seed: int
    classes: tuple = ()


def full_grid(scope: Scope | None = None) -> list:
    """The complete strategy grid: {last, all, last4, last2} x {concat, avg,
    sum}, with the combine-irrelevant last-layer-only row collapsed to its
    canonical form. 10 specs per scope."""
    scopes = [scope] if scope else [Scope.CLS_SENTENCE, Scope.TOKEN_LEVEL]
    specs = []
    for sc in scopes:
        seen = set()
        for layers in (1, None, 4, 2):
            for combine in (Combine.CONCATENATE, Combine.AVERAGE, Combine.SUM):
                spec = PoolingSpec(scope=sc, layers=layers, combine=combine)
                if spec not in seen:
                    seen.add(spec)
                    specs.append(spec)
    return specs


def parse_spec(text: str) -> PoolingSpec:
    """Parse "scope/layers/combine", e.g. "token/last4/sum"."""
    parts = text.strip().split("/")
    if len(parts) != 3:
        raise ValueError(f"bad pooling spec {text!r}; want scope/layers/combine")
    scope_s, layers_s, combine_s = parts
    scope = {"cls": Scope.CLS_SENTENCE, "sentence": Scope.CLS_SENTENCE,
             "token": Scope.TOKEN_LEVEL, "word": Scope.TOKEN_LEVEL}.get(scope_s.lower())
    if scope is None:
        raise ValueError(f"unknown scope {scope_s!r}")
    if layers_s == "all":
        layers = None
    elif layers_s == "last":
        layers = 1
    elif layers_s.startswith("last"):
        layers = int(layers_s[4:])
    else:
        raise ValueError(f"unknown layer choice {layers_s!r}")
    combine = {"concat": Combine.CONCATENATE, "concatenate": Combine.CONCATENATE,
               "avg": Combine.AVERAGE, "average": Combine.AVERAGE,
               "sum": Combine.SUM}.get(combine_s.lower())
    if combine is None:
        raise ValueError(f"unknown combine {combine_s!r}")
    return PoolingSpec(scope=scope, layers=layers, combine=combine)


def parse_config_file(path) -> ExperimentConfig:
    """Flat key=value file; '#' starts a comment line."""
    kv = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError("expected key=value", line=lineno, path=str(path))
            key, value = line.split("=", 1)
            kv[key.strip()] = value.strip()

    def take(key, default=None, conv=str):
        return conv(kv[key]) if key in kv else default

    grid_s = kv.get("grid", "")
    grid = full_grid() if grid_s in ("", "full") else [parse_spec(s) for s in grid_s.split(",")]
    return ExperimentConfig(
        dataset=kv["dataset"],
        chsf=kv["chsf"],
        grid=grid,
        use_emosyn=take("use_emosyn", False, lambda s: s.lower() in ("1", "true", "yes")),
        lexicon=take("lexicon"),
        wordlist=take("wordlist"),
        dataset_format=take("format", "generic"),
        seed=take("seed", 0, int),
        hidden_dims=take("hidden_dims", [256], lambda s: [int(x) for x in s.split(",")]),
        learning_rate=take("learning_rate", 1e-3, float),
        epochs=take("epochs", 30, int),
        batch_size=take("batch_size", 64, int),
        l2=take("l2", 0.0, float),
        output=take("output"),
    )


def _load_records(cfg: ExperimentConfig) -> list:
    fmt = cfg.dataset_format
    if fmt == "ei":
        return datasets.load_ei(cfg.dataset, datasets.Split.TRAIN)
    if fmt == "iest":
        return datasets.load_iest(cfg.dataset, datasets.Split.TRAIN)
    if fmt == "emotex":
        return datasets.load_emotex(cfg.dataset)
    records = []
    with open(cfg.dataset, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError("expected id<TAB>text<TAB>label", line=lineno, path=cfg.dataset)
            records.append(datasets.LabeledTweet(
                id=parts[0], text=parts[1], label=parts[2], split=datasets.Split.TRAIN))
    return records


def sentence_feature(rec, spec: PoolingSpec, tokens=None,
                     lexicon: EmoSynLexicon | None = None) -> np.ndarray:
    """One sentence vector for a record, optionally emotion-augmented.

    Token scope fuses per word (word_index pairs with the preprocessed
    token at the same position) and means; sentence scope appends the mean
    emotion bits to the pooled vector. Without a lexicon this is plain
    pooling.
    """
    if lexicon is None:
        return pool_record(rec, spec).values
    if tokens is None:
        tokens = ()
    if spec.scope is Scope.CLS_SENTENCE:
        feat = pool_cls(rec, spec)
        if tokens:
            bits = np.array([encode_token(t, lexicon).bits for t in tokens], dtype=np.float64)
            emo = bits.mean(axis=0)
        else:
            emo = np.zeros(8)
        return np.concatenate([feat.values, emo])
    pairs = []
    for word_index, fv in word_vectors(rec, spec):
        if word_index < len(tokens):
            emo = encode_token(tokens[word_index], lexicon)
        else:
            emo = EmotionVector.zero()
        pairs.append((fv, emo))
    return meta_sentence(pairs).values


def split_indices(n: int, seed: int, fractions=(0.8, 0.1, 0.1)):
    """Seeded train/dev/test index split."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    n_train = int(round(fractions[0] * n))
    n_dev = int(round(fractions[1] * n))
    return order[:n_train], order[n_train:n_train + n_dev], order[n_train + n_dev:]


def run_grid(cfg: ExperimentConfig) -> ResultTable:
    records = _load_records(cfg)
    if not records:
        raise CeferError(f"{cfg.dataset}: no records")
    classes = tuple(sorted({r.label for r in records}))
    class_index = {c: i for i, c in enumerate(classes)}
    labels = np.array([class_index[r.label] for r in records])

    chsf = {rec.sentence_id: rec for rec in read_chsf(cfg.chsf)}
    for r in records:
        if r.id not in chsf:
            raise MissingRecord(f"dataset id {r.id!r} absent from {cfg.chsf}")

    lexicon = EmoSynLexicon.from_tsv(cfg.lexicon) if cfg.use_emosyn else None
    wordlist = load_wordlist(cfg.wordlist) if cfg.wordlist else None
    tokens_by_id = {
        r.id: preprocess_tweet(RawTweet(id=r.id, text=r.text), wordlist).tokens
        for r in records
    }

    train_idx, _, test_idx = split_indices(len(records), cfg.seed)
    rows = []
    for spec in cfg.grid:
        started = time.perf_counter()
        feats = np.stack([
            sentence_feature(chsf[r.id], spec, tokens_by_id[r.id], lexicon) for r in records
        ])
        mlp_cfg = MLPConfig(
            input_dim=feats.shape[1],
            num_classes=len(classes),
            hidden_dims=list(cfg.hidden_dims),
            learning_rate=cfg.learning_rate,
            epochs=cfg.epochs,
            batch_size=cfg.batch_size,
            seed=cfg.seed,
            l2=cfg.l2,
        )
        model = train(feats[train_idx], labels[train_idx], mlp_cfg)
        metrics = evaluate(model, feats[test_idx], labels[test_idx])
        rows.append(GridRow(
            spec=spec,
            use_emosyn=cfg.use_emosyn,
            accuracy=metrics.accuracy,
            macro_f1=metrics.macro_f1,
            wall_time=time.perf_counter() - started,
        ))
    return ResultTable(rows=rows, dataset_name=cfg.dataset, seed=cfg.seed, classes=classes)


def render_table(table: ResultTable, style: str = "text") -> str:
    """Stable-ordered report. The JSON form omits wall time so identical
    runs serialize byte-identically; timings live in the text table."""
    if not table.rows:
        raise ValueError("empty result table")
    if style == "json":
        doc = {
            "dataset": table.dataset_name,
            "seed": table.seed,
            "classes": list(table.classes),
            "rows": [
                {
                    "scope": row.spec.scope.value,
                    "layers": row.spec.layers_name(),
                    "combine": row.spec.combine.value,
                    "use_emosyn": row.use_emosyn,
                    "accuracy": row.accuracy,
                    "macro_f1": row.macro_f1,
                }
                for row in table.rows
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if style == "csv":
        out = io.StringIO()
        out.write("scope,layers,combine,use_emosyn,accuracy,macro_f1,wall_time\n")
        for row in table.rows:
            out.write(
                f"{row.spec.scope.value},{row.spec.layers_name()},{row.spec.combine.value},"
                f"{row.use_emosyn},{row.accuracy:.6f},{row.macro_f1:.6f},{row.wall_time:.3f}\n"
            )
        return out.getvalue()
    if style == "text":
        header = ("scope", "layers", "combine", "emosyn", "accuracy", "macro_f1", "wall_time")
        body = [
            (row.spec.scope.value, row.spec.layers_name(), row.spec.combine.value,
             "yes" if row.use_emosyn else "no",
             f"{row.accuracy:.4f}", f"{row.macro_f1:.4f}", f"{row.wall_time:.2f}s")
            for row in table.rows
        ]
        widths = [max(len(header[i]), *(len(r[i]) for r in body)) for i in range(len(header))]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
        lines.append("  ".join("-" * w for w in widths))
        for r in body:
            lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown style {style!r}")
