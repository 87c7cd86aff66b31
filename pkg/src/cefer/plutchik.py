"""Plutchik's eight primary emotions with a fixed canonical index order.

The column order (Anger, Fear, Anticipation, Disgust, Sadness, Joy, Trust,
Surprise) is load-bearing: emotion bit vectors and the serialized lexicon
both index by it.
"""

from enum import IntEnum


class EmotionLabel(IntEnum):
    ANGER = 0
    FEAR = 1
    ANTICIPATION = 2
    DISGUST = 3
    SADNESS = 4
    JOY = 5
    TRUST = 6
    SURPRISE = 7


PLUTCHIK_ORDER = tuple(EmotionLabel)

_BY_NAME = {label.name.lower(): label for label in EmotionLabel}


def parse_emotion(name: str) -> EmotionLabel:
    """Map a lowercase emotion name to its label; KeyError if non-Plutchik."""
    return _BY_NAME[name.strip().lower()]


def is_plutchik(name: str) -> bool:
    return name.strip().lower() in _BY_NAME
