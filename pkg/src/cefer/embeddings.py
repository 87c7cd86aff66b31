"""Transformer hidden-state ingestion (CHSF container) and layer pooling.

CHSF layout (little-endian throughout):
  header: magic "CHSF", u32 version=1, u32 L, u32 D, u64 record_count
  record: u16 id_len, id bytes; u32 T; T x (u16 piece_len, piece, i32 word_index);
          L*T*D float32, ordered layer-major then token then dimension.

Pooling covers the full strategy grid: sentence scope (the sentence-start
special token's vector) or token scope (per-word mean over subwords, words
merged to a sentence by mean), over the last layer, the last k layers, or
all layers, combined by concatenation, average, or sum. Stored floats are
32-bit; all pooling arithmetic accumulates in float64.
"""

import struct
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    BadMagic,
    DimMismatch,
    LayerOutOfRange,
    NoContentTokens,
    ShapeMismatch,
    TruncatedRecord,
    VersionMismatch,
)

CHSF_MAGIC = b"CHSF"
CHSF_VERSION = 1
FVEC_MAGIC = b"FVEC"
MAX_SUBWORDS = 512


class Scope(Enum):
    CLS_SENTENCE = "cls"
    TOKEN_LEVEL = "token"


class Combine(Enum):
    CONCATENATE = "concat"
    AVERAGE = "avg"
    SUM = "sum"


@dataclass(frozen=True)
class PoolingSpec:
    """scope x layer subset x combine function.

    ``layers`` is None for all layers, otherwise the number of trailing
    layers (1 = last layer only). With layers=1 the combine function is
    irrelevant; it is canonicalized to SUM so equal strategies compare
    equal.
    """

    scope: Scope
    layers: int | None
    combine: Combine

    def __post_init__(self):
        if self.layers is not None:
            if self.layers < 1:
                raise ValueError("layers must be >= 1 or None for all")
            if self.layers == 1 and self.combine is not Combine.SUM:
                object.__setattr__(self, "combine", Combine.SUM)

    def layers_name(self) -> str:
        if self.layers is None:
            return "all"
        if self.layers == 1:
            return "last"
        return f"last{self.layers}"

    def describe(self) -> str:
        return f"{self.scope.value}/{self.layers_name()}/{self.combine.value}"


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray  # float64

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


@dataclass
class HiddenStateRecord:
    sentence_id: str
    subword_tokens: list  # of (piece, word_index); index 0 is the special start token
    activations: np.ndarray  # (L, T, D) float32, finite

    @property
    def L(self) -> int:
        return self.activations.shape[0]

    @property
    def T(self) -> int:
        return self.activations.shape[1]

    @property
    def D(self) -> int:
        return self.activations.shape[2]

    def validate(self):
        if self.activations.ndim != 3:
            raise ShapeMismatch(f"{self.sentence_id}: activations must be 3-d")
        if len(self.subword_tokens) != self.T:
            raise ShapeMismatch(
                f"{self.sentence_id}: {len(self.subword_tokens)} subword tokens vs T={self.T}"
            )
        if self.T < 1 or self.subword_tokens[0][1] != -1:
            raise ShapeMismatch(f"{self.sentence_id}: subword 0 must be a special token (word_index -1)")
        if self.T > MAX_SUBWORDS:
            raise ShapeMismatch(f"{self.sentence_id}: T={self.T} exceeds {MAX_SUBWORDS}")
        if not np.isfinite(self.activations).all():
            raise ShapeMismatch(f"{self.sentence_id}: non-finite activations")


def write_chsf(path, records, L=None, D=None):
    """Write records to a CHSF file; L and D are inferred when records exist."""
    records = list(records)
    if records:
        records[0].validate()
        L, D = records[0].L, records[0].D
    if L is None or D is None:
        raise ValueError("L and D required for an empty file")
    with open(path, "wb") as fh:
        fh.write(CHSF_MAGIC)
        fh.write(struct.pack("<IIIQ", CHSF_VERSION, L, D, len(records)))
        for rec in records:
            rec.validate()
            if rec.L != L or rec.D != D:
                raise ShapeMismatch(f"{rec.sentence_id}: (L,D)=({rec.L},{rec.D}) vs header ({L},{D})")
            id_bytes = rec.sentence_id.encode("utf-8")
            fh.write(struct.pack("<H", len(id_bytes)))
            fh.write(id_bytes)
            fh.write(struct.pack("<I", rec.T))
            for piece, word_index in rec.subword_tokens:
                pb = piece.encode("utf-8")
                fh.write(struct.pack("<H", len(pb)))
                fh.write(pb)
                fh.write(struct.pack("<i", word_index))
            payload = np.ascontiguousarray(rec.activations, dtype="<f4")
            fh.write(payload.tobytes())


def _read_exact(fh, n, what):
    offset = fh.tell()
    data = fh.read(n)
    if len(data) != n:
        raise TruncatedRecord(f"short read while reading {what}", offset=offset)
    return data


def read_chsf(path):
    """Yield HiddenStateRecord objects in file order, validating shapes."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != CHSF_MAGIC:
            raise BadMagic(f"{path}: expected CHSF magic, got {magic!r}")
        version, L, D, count = struct.unpack("<IIIQ", _read_exact(fh, 20, "header"))
        if version != CHSF_VERSION:
            raise VersionMismatch(f"{path}: version {version}, expected {CHSF_VERSION}")
        for _ in range(count):
            (id_len,) = struct.unpack("<H", _read_exact(fh, 2, "id length"))
            sentence_id = _read_exact(fh, id_len, "id").decode("utf-8")
            (T,) = struct.unpack("<I", _read_exact(fh, 4, "token count"))
            tokens = []
            for _ in range(T):
                (piece_len,) = struct.unpack("<H", _read_exact(fh, 2, "piece length"))
                piece = _read_exact(fh, piece_len, "piece").decode("utf-8")
                (word_index,) = struct.unpack("<i", _read_exact(fh, 4, "word index"))
                tokens.append((piece, word_index))
            payload = _read_exact(fh, L * T * D * 4, "activation tensor")
            activations = np.frombuffer(payload, dtype="<f4").reshape(L, T, D)
            rec = HiddenStateRecord(sentence_id=sentence_id, subword_tokens=tokens,
                                    activations=activations)
            rec.validate()
            yield rec


def select_layers(rec: HiddenStateRecord, layers: int | None) -> list:
    """Layer tensors (T, D) in ascending layer order; layers=None means all."""
    L = rec.L
    if layers is None:
        k = L
    else:
        if not 1 <= layers <= L:
            raise LayerOutOfRange(f"requested last {layers} of {L} layers")
        k = layers
    return [rec.activations[i] for i in range(L - k, L)]


def combine_layers(vectors, combine: Combine) -> FeatureVector:
    """Fuse m equal-dim vectors; float64 accumulation throughout."""
    vectors = [np.asarray(v, dtype=np.float64) for v in vectors]
    if not vectors:
        raise DimMismatch("no vectors to combine")
    dim = vectors[0].shape[0]
    for v in vectors:
        if v.shape != (dim,):
            raise DimMismatch(f"vector shape {v.shape} vs expected ({dim},)")
    if combine is Combine.CONCATENATE:
        return FeatureVector(np.concatenate(vectors))
    stacked = np.stack(vectors)
    if combine is Combine.AVERAGE:
        return FeatureVector(stacked.mean(axis=0))
    return FeatureVector(stacked.sum(axis=0))


def pool_cls(rec: HiddenStateRecord, spec: PoolingSpec) -> FeatureVector:
    """Sentence feature from the special start token across selected layers."""
    if spec.scope is not Scope.CLS_SENTENCE:
        raise ValueError("pool_cls requires sentence scope")
    layer_tensors = select_layers(rec, spec.layers)
    return combine_layers([t[0] for t in layer_tensors], spec.combine)


def word_vectors(rec: HiddenStateRecord, spec: PoolingSpec) -> list:
    """Per-word features: mean over the word's subwords within each layer,
    then layer combination. Special tokens (word_index -1) are excluded.
    Returns (word_index, FeatureVector) pairs in ascending word order."""
    if spec.scope is not Scope.TOKEN_LEVEL:
        raise ValueError("word_vectors requires token scope")
    groups = {}
    for pos, (_, word_index) in enumerate(rec.subword_tokens):
        if word_index >= 0:
            groups.setdefault(word_index, []).append(pos)
    if not groups:
        raise NoContentTokens(f"{rec.sentence_id}: only special tokens present")
    layer_tensors = select_layers(rec, spec.layers)
    out = []
    for word_index in sorted(groups):
        positions = groups[word_index]
        per_layer = [
            np.asarray(t[positions], dtype=np.float64).mean(axis=0) for t in layer_tensors
        ]
        out.append((word_index, combine_layers(per_layer, spec.combine)))
    return out


def sentence_from_words(words: list) -> FeatureVector:
    """Elementwise mean over word feature vectors."""
    if not words:
        raise DimMismatch("no word vectors")
    values = [w.values for w in words]
    dim = values[0].shape[0]
    for v in values:
        if v.shape != (dim,):
            raise DimMismatch(f"word vector dim {v.shape[0]} vs {dim}")
    return FeatureVector(np.stack(values).mean(axis=0))


def pool_record(rec: HiddenStateRecord, spec: PoolingSpec) -> FeatureVector:
    """One sentence vector per record under either scope."""
    if spec.scope is Scope.CLS_SENTENCE:
        return pool_cls(rec, spec)
    return sentence_from_words([fv for _, fv in word_vectors(rec, spec)])


def write_fvec(path, items, dim=None):
    """Write (id, vector) pairs: magic "FVEC", u32 dim, u64 count, then
    u16 id_len + id + dim float32 per record."""
    items = [(i, np.asarray(v)) for i, v in items]
    if items:
        dim = items[0][1].shape[0]
    if dim is None:
        raise ValueError("dim required for an empty file")
    with open(path, "wb") as fh:
        fh.write(FVEC_MAGIC)
        fh.write(struct.pack("<IQ", dim, len(items)))
        for rid, vec in items:
            if vec.shape != (dim,):
                raise DimMismatch(f"{rid}: dim {vec.shape} vs header {dim}")
            id_bytes = rid.encode("utf-8")
            fh.write(struct.pack("<H", len(id_bytes)))
            fh.write(id_bytes)
            fh.write(np.ascontiguousarray(vec, dtype="<f4").tobytes())


def read_fvec(path):
    """Yield (id, float32 vector) pairs from an .fvec file."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != FVEC_MAGIC:
            raise BadMagic(f"{path}: expected FVEC magic, got {magic!r}")
        dim, count = struct.unpack("<IQ", _read_exact(fh, 12, "fvec header"))
        for _ in range(count):
            (id_len,) = struct.unpack("<H", _read_exact(fh, 2, "id length"))
            rid = _read_exact(fh, id_len, "id").decode("utf-8")
            vec = np.frombuffer(_read_exact(fh, dim * 4, "vector"), dtype="<f4")
            yield rid, vec
