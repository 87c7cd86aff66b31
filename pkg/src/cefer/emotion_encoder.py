"""Per-token 8-bit emotion vectors from the EmoSyn lexicon."""

from dataclasses import dataclass

from .errors import EmptyTweet
from .lexicon import EmoSynLexicon
from .plutchik import PLUTCHIK_ORDER
from .preprocess import CleanTweet, Token


@dataclass(frozen=True)
class EmotionVector:
    bits: tuple

    def __post_init__(self):
        if len(self.bits) != 8 or set(self.bits) - {0, 1}:
            raise ValueError(f"bad emotion bits {self.bits!r}")

    @classmethod
    def from_emotions(cls, emotions) -> "EmotionVector":
        return cls(tuple(1 if e in emotions else 0 for e in PLUTCHIK_ORDER))

    @classmethod
    def zero(cls) -> "EmotionVector":
        return cls((0,) * 8)

    def as_bitstring(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __iter__(self):
        return iter(self.bits)


@dataclass(frozen=True)
class TokenEmotionMatrix:
    tweet_id: str
    rows: tuple  # of (Token, EmotionVector), in tweet token order


def encode_token(token: Token, lexicon: EmoSynLexicon) -> EmotionVector:
    """Set bit i iff the token's lexicon entry carries emotion i.

    Hashtag tokens consult the hashtag table (falling back to the word
    table); absent terms yield the all-zero vector.
    """
    return EmotionVector.from_emotions(lexicon.lookup(token.lookup_form, token.kind))


def encode_tweet(tweet: CleanTweet, lexicon: EmoSynLexicon) -> TokenEmotionMatrix:
    if not tweet.tokens:
        raise EmptyTweet(f"tweet {tweet.id!r} has no tokens")
    rows = tuple((tok, encode_token(tok, lexicon)) for tok in tweet.tokens)
    return TokenEmotionMatrix(tweet_id=tweet.id, rows=rows)


def zero_vector_rate(matrices) -> float:
    """Fraction of tokens across a corpus with the all-zero vector.

    Diagnostic only; a high rate usually means the lexicon and corpus
    vocabularies barely overlap.
    """
    total = 0
    zero = 0
    for m in matrices:
        for _, vec in m.rows:
            total += 1
            if not any(vec.bits):
                zero += 1
    return zero / total if total else 0.0
