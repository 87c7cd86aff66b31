"""Meta-embedding by concatenation: contextual feature vector + 8 emotion bits.

The emotion bits ride along unchanged at the tail of the vector, so both
source embeddings keep their structure; dimensionality grows by exactly 8.
"""

from dataclasses import dataclass

import numpy as np

from .embeddings import FeatureVector
from .emotion_encoder import EmotionVector
from .errors import DimMismatch

EMOTION_DIM = 8


@dataclass(frozen=True)
class MetaEmbedding:
    values: np.ndarray  # float64, length feat_dim + 8
    feat_dim: int

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    @property
    def feature_slice(self) -> np.ndarray:
        return self.values[: self.feat_dim]

    @property
    def emotion_slice(self) -> np.ndarray:
        return self.values[self.feat_dim:]


def meta_word(feat: FeatureVector, emo: EmotionVector) -> MetaEmbedding:
    """[feature ‖ emotion bits], bits cast to reals."""
    values = np.concatenate([
        np.asarray(feat.values, dtype=np.float64),
        np.asarray(emo.bits, dtype=np.float64),
    ])
    return MetaEmbedding(values=values, feat_dim=feat.dim)


def meta_sentence(tweet_words) -> MetaEmbedding:
    """Mean of per-word meta-embeddings.

    The emotion sub-slice becomes the per-emotion fraction of tokens
    carrying that emotion (real-valued in [0, 1]). Numerically identical
    to concatenating mean-features with mean-bits.
    """
    words = list(tweet_words)
    if not words:
        raise DimMismatch("meta_sentence needs at least one word")
    metas = [meta_word(feat, emo) for feat, emo in words]
    feat_dim = metas[0].feat_dim
    for m in metas:
        if m.feat_dim != feat_dim:
            raise DimMismatch(f"feature dim {m.feat_dim} vs {feat_dim}")
    values = np.stack([m.values for m in metas]).mean(axis=0)
    return MetaEmbedding(values=values, feat_dim=feat_dim)
