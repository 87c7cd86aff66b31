"""CEFER: context + emotion embedded features for emotion recognition.

A library and CLI that compiles a multi-level emotion lexicon, encodes
per-token emotion bit vectors, pools transformer hidden states under a
strategy grid, fuses both by concatenation meta-embedding, and trains a
feed-forward classifier over Plutchik's eight emotions.
"""

from .plutchik import EmotionLabel, PLUTCHIK_ORDER

__version__ = "0.1.0"

__all__ = ["EmotionLabel", "PLUTCHIK_ORDER", "__version__"]
