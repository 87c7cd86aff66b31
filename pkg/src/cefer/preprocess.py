"""Tweet normalization: strip URLs/mentions/emoji, keep hashtags, fix repeats.

Tokens keep their original casing in ``surface`` (downstream transformer
extraction may be case-sensitive) and carry a lowercased ``lookup_form``
for lexicon matching.
"""

import re
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

from .errors import EmptyTweet


class TokenKind(Enum):
    WORD = "word"
    HASHTAG = "hashtag"


@dataclass(frozen=True)
class Token:
    surface: str
    lookup_form: str
    kind: TokenKind

    @staticmethod
    def word(surface: str) -> "Token":
        return Token(surface, surface.lower(), TokenKind.WORD)

    @staticmethod
    def hashtag(core: str) -> "Token":
        # surface keeps the leading '#', lookup_form drops it
        return Token("#" + core, core.lower(), TokenKind.HASHTAG)


@dataclass(frozen=True)
class RawTweet:
    id: str
    text: str
    label: str | None = None


@dataclass(frozen=True)
class CleanTweet:
    id: str
    tokens: tuple[Token, ...]
    original: str

    def render(self) -> str:
        return " ".join(t.surface for t in self.tokens)


# Unicode emoji blocks plus variation selectors / ZWJ sequences.
_EMOJI_RE = re.compile(
    "["
    "\U0001f000-\U0001faff"  # misc pictographs, emoticons, symbols
    "☀-➿"          # misc symbols and dingbats
    "⬀-⯿"          # arrows and symbols used as emoji
    "︎️"           # variation selectors
    "‍"                 # zero-width joiner
    "⃣"                 # combining keycap
    "]"
)

_URL_RE = re.compile(r"^(https?://|www\.)", re.IGNORECASE)
_MENTION_RE = re.compile(r"^@")
# leading/trailing punctuation, underscores included; interior chars kept
_STRIP_EDGE_RE = re.compile(r"^[\W_]+|[\W_]+$", re.UNICODE)


def _clean_piece(piece: str) -> Token | None:
    if _URL_RE.match(piece) or _MENTION_RE.match(piece):
        return None
    piece = _EMOJI_RE.sub("", piece)
    if not piece:
        return None
    is_hashtag = piece.startswith("#")
    core = piece[1:] if is_hashtag else piece
    core = _STRIP_EDGE_RE.sub("", core)
    if not core:
        return None
    return Token.hashtag(core) if is_hashtag else Token.word(core)


def normalize_tweet(raw: RawTweet) -> CleanTweet:
    """Split on whitespace and drop URL/mention/emoji/punctuation noise.

    Raises EmptyTweet if nothing survives; callers may drop the record.
    """
    tokens = []
    for piece in raw.text.split():
        tok = _clean_piece(piece)
        if tok is not None:
            tokens.append(tok)
    if not tokens:
        raise EmptyTweet(f"tweet {raw.id!r} empty after cleaning")
    return CleanTweet(id=raw.id, tokens=tuple(tokens), original=raw.text)


def _runs(s: str) -> list[tuple[int, int]]:
    """(start, length) of every run of a repeated character, left to right."""
    runs = []
    i = 0
    while i < len(s):
        j = i
        while j < len(s) and s[j] == s[i]:
            j += 1
        if j - i > 1:
            runs.append((i, j - i))
        i = j
    return runs


def reduce_repeats(token: Token, dictionary: set[str]) -> Token:
    """Shrink elongated spellings ("coooool") until the dictionary matches.

    Each step shortens a longest repeated-character run by one character;
    ties between equally long runs are tried left to right and the first
    dictionary hit wins. Stops at a hit or when no run longer than one
    remains; the final form is returned even if still out of dictionary.
    """
    form = token.lookup_form
    surface = token.surface
    if form in dictionary:
        return token
    # shrink the surface in lockstep only when casing keeps lengths aligned
    lockstep = len(surface) == len(form)
    while True:
        runs = _runs(form)
        if not runs:
            break
        longest = max(length for _, length in runs)
        candidates = [start for start, length in runs if length == longest]
        hit = None
        for start in candidates:
            cand = form[:start] + form[start + 1:]
            if cand in dictionary:
                hit = start
                break
        start = hit if hit is not None else candidates[0]
        form = form[:start] + form[start + 1:]
        if lockstep:
            surface = surface[:start] + surface[start + 1:]
        else:
            surface = form
        if hit is not None:
            break
    if not lockstep:
        surface = form
    if token.kind is TokenKind.HASHTAG:
        return Token("#" + surface, form, TokenKind.HASHTAG)
    return Token(surface, form, TokenKind.WORD)


def check_token(token: Token, dictionary: set[str]) -> Token:
    """Dictionary gate: out-of-dictionary words get repeat reduction.

    Hashtags pass through untouched; their lookup happens against the
    hashtag lexicon later in the pipeline.
    """
    if token.kind is TokenKind.HASHTAG:
        return token
    if token.lookup_form in dictionary:
        return token
    return reduce_repeats(token, dictionary)


def preprocess_tweet(raw: RawTweet, dictionary: set[str] | None = None) -> CleanTweet:
    """normalize_tweet followed by per-token dictionary checking."""
    clean = normalize_tweet(raw)
    if not dictionary:
        return clean
    checked = tuple(check_token(t, dictionary) for t in clean.tokens)
    return replace(clean, tokens=checked)


def load_wordlist(path) -> set[str]:
    """One lowercase word per line, UTF-8; blank lines ignored."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        w = line.strip()
        if w:
            words.add(w.lower())
    return words
