"""EmoSyn emotional dictionary: categorical lexicon seeds expanded through
synonym relations.

Seeds come from two tab-separated lexicon formats (word associations with a
0/1 flag; hashtag associations with a real-valued score). Word seeds are
expanded breadth-first over an undirected synonym graph up to a configurable
depth (default 3); a term reachable from several seeds unions their emotion
sets and records the minimum depth. Hashtag seeds are never expanded.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import EmptyLexicon, ParseError
from .plutchik import PLUTCHIK_ORDER, EmotionLabel, is_plutchik, parse_emotion

log = logging.getLogger(__name__)

DEFAULT_DEPTH = 3


class Source(Enum):
    NRC_EMOTION = "NRCEmotion"
    NRC_HASHTAG = "NRCHashtag"
    SYNONYM_EXPANSION = "SynonymExpansion"


@dataclass(frozen=True)
class LexiconEntry:
    term: str
    emotions: frozenset
    source: Source
    depth: int

    def __post_init__(self):
        if not self.emotions:
            raise ValueError(f"entry {self.term!r} has empty emotion set")
        seed = self.source in (Source.NRC_EMOTION, Source.NRC_HASHTAG)
        if seed != (self.depth == 0):
            raise ValueError(
                f"entry {self.term!r}: depth {self.depth} inconsistent with source {self.source}"
            )


class SynonymGraph:
    """Undirected synonym adjacency; symmetrized at load time."""

    def __init__(self, pairs=()):
        self.adjacency = defaultdict(set)
        for a, b in pairs:
            self.add(a, b)

    def add(self, a: str, b: str):
        a, b = a.lower(), b.lower()
        if a == b:
            return
        self.adjacency[a].add(b)
        self.adjacency[b].add(a)

    def neighbors(self, term: str) -> set:
        return self.adjacency.get(term, set())

    def __len__(self):
        return len(self.adjacency)

    @classmethod
    def from_tsv(cls, path) -> "SynonymGraph":
        graph = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ParseError("expected term<TAB>synonym", line=lineno, path=str(path))
                graph.add(parts[0].strip(), parts[1].strip())
        return graph


def load_categorical_lexicon(path, format: Source, threshold: float = 0.0) -> list[LexiconEntry]:
    """Parse an NRC-style association file into depth-0 seed entries.

    NRC_EMOTION rows are `term<TAB>emotion<TAB>flag` with flag 0/1; only
    flag-1 rows become entries. NRC_HASHTAG rows are
    `emotion<TAB>term<TAB>score`; only score > threshold survives. Rows
    naming non-Plutchik emotions (e.g. positive/negative) are skipped and
    counted in a single warning.
    """
    if format not in (Source.NRC_EMOTION, Source.NRC_HASHTAG):
        raise ValueError(f"not a seed lexicon format: {format}")
    by_term = defaultdict(set)
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError("expected 3 tab-separated columns", line=lineno, path=str(path))
            if format is Source.NRC_EMOTION:
                term, emotion, flag = parts
                if flag.strip() not in ("0", "1"):
                    raise ParseError(f"bad association flag {flag!r}", line=lineno, path=str(path))
                keep = flag.strip() == "1"
            else:
                emotion, term, score = parts
                try:
                    keep = float(score) > threshold
                except ValueError:
                    raise ParseError(f"bad score {score!r}", line=lineno, path=str(path)) from None
            if not is_plutchik(emotion):
                skipped += 1
                continue
            if keep:
                term = term.strip().lower().lstrip("#")
                if term:
                    by_term[term].add(parse_emotion(emotion))
    if skipped:
        log.warning("%s: skipped %d rows with non-Plutchik emotion labels", path, skipped)
    return [
        LexiconEntry(term=t, emotions=frozenset(emos), source=format, depth=0)
        for t, emos in sorted(by_term.items())
    ]


def expand_synonyms(seeds: list[LexiconEntry], graph: SynonymGraph, max_depth: int) -> list[LexiconEntry]:
    """Breadth-first emotion propagation from seed terms.

    After k levels a term carries emotion e iff some seed carrying e lies
    within graph distance k. Returns seeds (depth 0, original source) plus
    one SynonymExpansion entry per term that gained emotions beyond its own
    seed set, holding those emotions and the minimum level that delivered
    any of them.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    # arrival[term][emotion] = earliest level the emotion reached the term
    arrival = defaultdict(dict)
    for s in seeds:
        for e in s.emotions:
            arrival[s.term][e] = 0
    for level in range(1, max_depth + 1):
        additions = defaultdict(set)
        for term, emos in arrival.items():
            for nb in graph.neighbors(term):
                missing = set(emos) - set(arrival[nb]) if nb in arrival else set(emos)
                additions[nb] |= missing
        for term, emos in additions.items():
            for e in emos:
                arrival[term].setdefault(e, level)

    seed_emotions = defaultdict(set)
    for s in seeds:
        seed_emotions[s.term] |= set(s.emotions)
    out = list(seeds)
    for term in sorted(arrival):
        gained = {e: lvl for e, lvl in arrival[term].items() if e not in seed_emotions[term]}
        if gained:
            out.append(
                LexiconEntry(
                    term=term,
                    emotions=frozenset(gained),
                    source=Source.SYNONYM_EXPANSION,
                    depth=min(gained.values()),
                )
            )
    return out


def _bits8(emotions) -> str:
    return "".join("1" if e in emotions else "0" for e in PLUTCHIK_ORDER)


def _from_bits8(bits: str):
    if len(bits) != 8 or set(bits) - {"0", "1"}:
        raise ValueError(f"bad bits8 field {bits!r}")
    return frozenset(e for e, b in zip(PLUTCHIK_ORDER, bits) if b == "1")


@dataclass
class EmoSynLexicon:
    word_table: dict = field(default_factory=dict)
    hashtag_table: dict = field(default_factory=dict)
    provenance: list = field(default_factory=list)
    word_depth: dict = field(default_factory=dict)
    hashtag_depth: dict = field(default_factory=dict)

    def lookup(self, term: str, kind) -> frozenset:
        """Emotion set for a term; hashtags fall back to the word table."""
        from .preprocess import TokenKind

        if kind is TokenKind.HASHTAG:
            hit = self.hashtag_table.get(term)
            if hit is not None:
                return hit
        return self.word_table.get(term, frozenset())

    def to_tsv(self, path):
        """Canonical serialization: `term<TAB>kind<TAB>bits8<TAB>min_depth`,
        sorted by (term, kind), LF endings. Byte-identical for equal builds."""
        rows = []
        for term, emos in self.word_table.items():
            rows.append((term, "word", _bits8(emos), self.word_depth.get(term, 0)))
        for term, emos in self.hashtag_table.items():
            rows.append((term, "hashtag", _bits8(emos), self.hashtag_depth.get(term, 0)))
        rows.sort(key=lambda r: (r[0], r[1]))
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for term, kind, bits, depth in rows:
                fh.write(f"{term}\t{kind}\t{bits}\t{depth}\n")

    @classmethod
    def from_tsv(cls, path) -> "EmoSynLexicon":
        lex = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                parts = line.split("\t")
                if len(parts) != 4:
                    raise ParseError("expected 4 tab-separated columns", line=lineno, path=str(path))
                term, kind, bits, depth_s = parts
                try:
                    emos = _from_bits8(bits)
                    depth = int(depth_s)
                except ValueError as exc:
                    raise ParseError(str(exc), line=lineno, path=str(path)) from None
                if kind == "word":
                    lex.word_table[term] = emos
                    lex.word_depth[term] = depth
                    src = Source.NRC_EMOTION if depth == 0 else Source.SYNONYM_EXPANSION
                elif kind == "hashtag":
                    lex.hashtag_table[term] = emos
                    lex.hashtag_depth[term] = depth
                    src = Source.NRC_HASHTAG
                else:
                    raise ParseError(f"unknown kind {kind!r}", line=lineno, path=str(path))
                lex.provenance.append(LexiconEntry(term, emos, src, depth))
        if not lex.word_table and not lex.hashtag_table:
            raise EmptyLexicon(f"{path} holds no entries")
        return lex


def lookup(lexicon: EmoSynLexicon, term: str, kind) -> frozenset:
    return lexicon.lookup(term, kind)


def build_emosyn(categorical: list[LexiconEntry], graph: SynonymGraph,
                 max_depth: int = DEFAULT_DEPTH) -> EmoSynLexicon:
    """Assemble the lexicon: word seeds plus synonym expansion, hashtag
    seeds verbatim."""
    if not categorical:
        raise EmptyLexicon("no seed entries")
    word_seeds = [e for e in categorical if e.source is Source.NRC_EMOTION]
    hashtag_seeds = [e for e in categorical if e.source is Source.NRC_HASHTAG]
    if not word_seeds and not hashtag_seeds:
        raise EmptyLexicon("no NRC seed entries")

    expanded = expand_synonyms(word_seeds, graph, max_depth) if word_seeds else []

    lex = EmoSynLexicon()
    for entry in expanded:
        prev = lex.word_table.get(entry.term, frozenset())
        lex.word_table[entry.term] = prev | entry.emotions
        lex.word_depth[entry.term] = min(lex.word_depth.get(entry.term, entry.depth), entry.depth)
        lex.provenance.append(entry)
    for entry in hashtag_seeds:
        prev = lex.hashtag_table.get(entry.term, frozenset())
        lex.hashtag_table[entry.term] = prev | entry.emotions
        lex.hashtag_depth[entry.term] = 0
        lex.provenance.append(entry)
    return lex
