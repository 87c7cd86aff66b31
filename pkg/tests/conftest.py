from pathlib import Path

import numpy as np
import pytest

from cefer.embeddings import HiddenStateRecord
from cefer.lexicon import EmoSynLexicon, LexiconEntry, Source, SynonymGraph, build_emosyn
from cefer.plutchik import EmotionLabel

FIXTURES = Path(__file__).parent / "fixtures"


def entry(term, emotions, source=Source.NRC_EMOTION, depth=0):
    return LexiconEntry(term=term, emotions=frozenset(emotions), source=source, depth=depth)


@pytest.fixture
def reference_lexicon() -> EmoSynLexicon:
    """Lexicon reproducing the published per-token example: 'want' carries
    anger/fear/disgust/sadness/surprise, 'any' anger/fear/anticipation/disgust."""
    seeds = [
        entry("want", {EmotionLabel.ANGER, EmotionLabel.FEAR, EmotionLabel.DISGUST,
                       EmotionLabel.SADNESS, EmotionLabel.SURPRISE}),
        entry("any", {EmotionLabel.ANGER, EmotionLabel.FEAR, EmotionLabel.ANTICIPATION,
                      EmotionLabel.DISGUST}),
    ]
    return build_emosyn(seeds, SynonymGraph(), max_depth=0)


@pytest.fixture
def wordlist() -> set:
    return {
        "so", "happy", "today", "plain", "text", "cool", "the", "i", "don't",
        "want", "to", "sit", "here", "any", "longer", "morning", "blessed",
    }


def make_record(sentence_id="s0", L=3, D=4, word_indices=(-1, 0, 1, 1, -1), seed=0):
    """Small deterministic hidden-state record for pooling tests."""
    rng = np.random.default_rng(seed)
    T = len(word_indices)
    acts = rng.normal(size=(L, T, D)).astype(np.float32)
    pieces = [("[CLS]" if wi == -1 and pos == 0 else f"p{pos}", wi)
              for pos, wi in enumerate(word_indices)]
    return HiddenStateRecord(sentence_id=sentence_id, subword_tokens=pieces, activations=acts)
