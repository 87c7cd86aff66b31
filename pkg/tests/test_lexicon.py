from collections import deque
from pathlib import Path

import pytest

from cefer.errors import EmptyLexicon, ParseError
from cefer.lexicon import (
    EmoSynLexicon,
    LexiconEntry,
    Source,
    SynonymGraph,
    build_emosyn,
    expand_synonyms,
    load_categorical_lexicon,
    lookup,
)
from cefer.plutchik import EmotionLabel
from cefer.preprocess import TokenKind

from conftest import FIXTURES, entry


def bfs_union_oracle(seeds, graph, max_depth, term):
    """Independent oracle: union of seed emotion sets over all seeds within
    graph distance max_depth of the term (plain BFS per seed)."""
    out = set()
    for seed in seeds:
        dist = {seed.term: 0}
        queue = deque([seed.term])
        while queue:
            cur = queue.popleft()
            if dist[cur] >= max_depth:
                continue
            for nb in graph.neighbors(cur):
                if nb not in dist:
                    dist[nb] = dist[cur] + 1
                    queue.append(nb)
        if term in dist:
            out |= set(seed.emotions)
    return frozenset(out)


class TestLoadCategorical:
    def test_word_rows(self):
        entries = load_categorical_lexicon(FIXTURES / "nrc_emotion.tsv", Source.NRC_EMOTION)
        by_term = {e.term: e for e in entries}
        assert by_term["abandon"].emotions == frozenset({EmotionLabel.SADNESS})
        assert by_term["abandon"].depth == 0
        # flag-0 row contributes nothing
        assert EmotionLabel.JOY not in by_term["abandon"].emotions

    def test_hashtag_threshold(self, tmp_path):
        p = tmp_path / "ht.tsv"
        p.write_text("anger\t#grrr\t0.9\nanger\t#meh\t0.0\n", encoding="utf-8")
        entries = load_categorical_lexicon(p, Source.NRC_HASHTAG, threshold=0.0)
        assert [e.term for e in entries] == ["grrr"]
        assert entries[0].emotions == frozenset({EmotionLabel.ANGER})

    def test_non_plutchik_rows_skipped(self, caplog):
        entries = load_categorical_lexicon(FIXTURES / "nrc_emotion.tsv", Source.NRC_EMOTION)
        assert all(e.term != "negative" for e in entries)

    def test_malformed_row_raises_with_line(self, tmp_path):
        p = tmp_path / "bad.tsv"
        p.write_text("abandon\tsadness\t1\noops no tabs\n", encoding="utf-8")
        with pytest.raises(ParseError) as exc:
            load_categorical_lexicon(p, Source.NRC_EMOTION)
        assert exc.value.line == 2

    def test_bad_flag_raises(self, tmp_path):
        p = tmp_path / "bad.tsv"
        p.write_text("abandon\tsadness\t2\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_categorical_lexicon(p, Source.NRC_EMOTION)


class TestExpandSynonyms:
    def test_depth_zero_returns_seeds(self):
        seeds = [entry("joy", {EmotionLabel.JOY})]
        graph = SynonymGraph([("joy", "delight")])
        assert expand_synonyms(seeds, graph, 0) == seeds

    def test_three_node_chain(self):
        seeds = [entry("joy", {EmotionLabel.JOY})]
        graph = SynonymGraph([("joy", "delight"), ("delight", "elation")])
        out = {e.term: e for e in expand_synonyms(seeds, graph, 3)}
        assert out["delight"].depth == 1
        assert out["elation"].depth == 2
        assert out["delight"].emotions == frozenset({EmotionLabel.JOY})
        assert out["elation"].emotions == frozenset({EmotionLabel.JOY})
        assert out["delight"].source is Source.SYNONYM_EXPANSION

    def test_union_across_seeds(self):
        seeds = [entry("rage", {EmotionLabel.ANGER}), entry("fear", {EmotionLabel.FEAR})]
        graph = SynonymGraph([("rage", "panic"), ("fear", "panic")])
        out = {e.term: e for e in expand_synonyms(seeds, graph, 1)}
        assert out["panic"].emotions == frozenset({EmotionLabel.ANGER, EmotionLabel.FEAR})
        assert out["panic"].depth == 1

    def test_min_depth_on_ties(self):
        seeds = [entry("a", {EmotionLabel.JOY}), entry("b", {EmotionLabel.TRUST})]
        # t is at distance 1 from a and 2 from b
        graph = SynonymGraph([("a", "t"), ("b", "m"), ("m", "t")])
        out = {e.term: e for e in expand_synonyms(seeds, graph, 3)}
        assert out["t"].depth == 1
        assert out["t"].emotions == frozenset({EmotionLabel.JOY, EmotionLabel.TRUST})


class TestBuildAndLookup:
    def test_single_seed_empty_graph(self):
        lex = build_emosyn([entry("joy", {EmotionLabel.JOY})], SynonymGraph(), 3)
        assert set(lex.word_table) == {"joy"}

    def test_reference_fixture(self, reference_lexicon):
        want = lookup(reference_lexicon, "want", TokenKind.WORD)
        assert want == frozenset({EmotionLabel.ANGER, EmotionLabel.FEAR, EmotionLabel.DISGUST,
                                  EmotionLabel.SADNESS, EmotionLabel.SURPRISE})
        any_ = lookup(reference_lexicon, "any", TokenKind.WORD)
        assert any_ == frozenset({EmotionLabel.ANGER, EmotionLabel.FEAR,
                                  EmotionLabel.ANTICIPATION, EmotionLabel.DISGUST})

    def test_absent_term_empty_set(self, reference_lexicon):
        assert lookup(reference_lexicon, "zzzz_unknown", TokenKind.WORD) == frozenset()

    def test_hashtag_falls_back_to_word_table(self):
        lex = build_emosyn([entry("joy", {EmotionLabel.JOY})], SynonymGraph(), 0)
        assert lookup(lex, "joy", TokenKind.HASHTAG) == frozenset({EmotionLabel.JOY})

    def test_hashtags_not_expanded(self):
        seeds = [entry("grrr", {EmotionLabel.ANGER}, source=Source.NRC_HASHTAG)]
        graph = SynonymGraph([("grrr", "argh")])
        lex = build_emosyn(seeds, graph, 3)
        assert "argh" not in lex.hashtag_table
        assert "argh" not in lex.word_table

    def test_empty_seeds_raise(self):
        with pytest.raises(EmptyLexicon):
            build_emosyn([], SynonymGraph(), 3)

    def test_provenance_completeness(self):
        seeds = [entry("joy", {EmotionLabel.JOY}),
                 entry("grrr", {EmotionLabel.ANGER}, source=Source.NRC_HASHTAG)]
        graph = SynonymGraph([("joy", "delight")])
        lex = build_emosyn(seeds, graph, 2)
        prov_terms = {e.term for e in lex.provenance}
        table_terms = set(lex.word_table) | set(lex.hashtag_table)
        assert prov_terms == table_terms


class TestSerialization:
    def test_round_trip(self, tmp_path, reference_lexicon):
        p = tmp_path / "lex.tsv"
        reference_lexicon.to_tsv(p)
        loaded = EmoSynLexicon.from_tsv(p)
        assert loaded.word_table == reference_lexicon.word_table
        assert loaded.hashtag_table == reference_lexicon.hashtag_table

    def test_determinism_byte_identical(self, tmp_path):
        seeds = load_categorical_lexicon(FIXTURES / "nrc_emotion.tsv", Source.NRC_EMOTION)
        seeds += load_categorical_lexicon(FIXTURES / "nrc_hashtag.tsv", Source.NRC_HASHTAG)
        graph = SynonymGraph.from_tsv(FIXTURES / "synonyms.tsv")
        p1, p2 = tmp_path / "a.tsv", tmp_path / "b.tsv"
        build_emosyn(seeds, graph, 3).to_tsv(p1)
        build_emosyn(list(reversed(seeds)), graph, 3).to_tsv(p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_empty_file_raises(self, tmp_path):
        p = tmp_path / "empty.tsv"
        p.write_text("", encoding="utf-8")
        with pytest.raises(EmptyLexicon):
            EmoSynLexicon.from_tsv(p)


class TestProperties:
    def _random_case(self, rng):
        import random

        n_nodes = rng.randint(2, 50)
        nodes = [f"w{i}" for i in range(n_nodes)]
        n_edges = rng.randint(0, min(80, n_nodes * 2))
        graph = SynonymGraph()
        for _ in range(n_edges):
            graph.add(rng.choice(nodes), rng.choice(nodes))
        n_seeds = rng.randint(1, min(6, n_nodes))
        seeds = []
        for term in rng.sample(nodes, n_seeds):
            emos = frozenset(rng.sample(list(EmotionLabel), rng.randint(1, 3)))
            seeds.append(LexiconEntry(term, emos, Source.NRC_EMOTION, 0))
        return nodes, graph, seeds

    def test_monotonicity_and_bfs_oracle_on_random_graphs(self):
        import random

        rng = random.Random(1234)
        for _ in range(100):
            nodes, graph, seeds = self._random_case(rng)
            depth = rng.randint(0, 3)
            lex_k = build_emosyn(seeds, graph, depth)
            lex_k1 = build_emosyn(seeds, graph, depth + 1)
            assert set(lex_k.word_table) <= set(lex_k1.word_table)
            for term, emos in lex_k.word_table.items():
                assert emos <= lex_k1.word_table[term]
            for term in nodes:
                expected = bfs_union_oracle(seeds, graph, depth, term)
                assert lex_k.word_table.get(term, frozenset()) == expected, (term, depth)
