import pytest
from hypothesis import given
from hypothesis import strategies as st

from cefer.errors import EmptyTweet
from cefer.preprocess import (
    RawTweet,
    Token,
    TokenKind,
    check_token,
    load_wordlist,
    normalize_tweet,
    preprocess_tweet,
    reduce_repeats,
)


def surfaces(tweet):
    return [t.surface for t in tweet.tokens]


def test_removes_url_mention_and_punctuation():
    clean = normalize_tweet(RawTweet("t1", "so happy today!! http://t.co/x @bob"))
    assert surfaces(clean) == ["so", "happy", "today"]


def test_plain_text_untouched():
    clean = normalize_tweet(RawTweet("t2", "plain text"))
    assert surfaces(clean) == ["plain", "text"]


def test_hashtag_retained_as_hashtag_kind():
    clean = normalize_tweet(RawTweet("t3", "#blessed morning"))
    assert clean.tokens[0].kind is TokenKind.HASHTAG
    assert clean.tokens[0].lookup_form == "blessed"
    assert clean.tokens[0].surface == "#blessed"
    assert clean.tokens[1] == Token.word("morning")


def test_www_urls_and_https_removed():
    clean = normalize_tweet(RawTweet("t4", "look www.example.com here https://x.org/y"))
    assert surfaces(clean) == ["look", "here"]


def test_emoji_removed():
    clean = normalize_tweet(RawTweet("t5", "party 🎉 time 😀😀"))
    assert surfaces(clean) == ["party", "time"]


def test_case_preserved_in_surface_lowered_in_lookup():
    clean = normalize_tweet(RawTweet("t6", "Hello World"))
    assert surfaces(clean) == ["Hello", "World"]
    assert [t.lookup_form for t in clean.tokens] == ["hello", "world"]


def test_empty_after_cleaning_raises():
    with pytest.raises(EmptyTweet):
        normalize_tweet(RawTweet("t7", "@bob http://x.y 😀 !!!"))


def test_idempotent_on_rendered_output():
    clean = normalize_tweet(RawTweet("t8", "so happy!! #blessed @bob http://t.co 🎉"))
    again = normalize_tweet(RawTweet("t8", clean.render()))
    assert again.tokens == clean.tokens


def test_reduce_repeats_finds_dictionary_form():
    tok = reduce_repeats(Token.word("coooool"), {"cool"})
    assert tok.lookup_form == "cool"
    assert tok.surface == "cool"


def test_reduce_repeats_identity_for_valid_word():
    tok = Token.word("cool")
    assert reduce_repeats(tok, {"cool"}) == tok


def test_reduce_repeats_shrinks_to_single_runs_without_dictionary():
    tok = reduce_repeats(Token.word("xyzzz"), set())
    assert tok.lookup_form == "xyz"


def test_reduce_repeats_preserves_case():
    tok = reduce_repeats(Token.word("COOOOL"), {"cool"})
    assert tok.surface == "COOL"
    assert tok.lookup_form == "cool"


def test_check_token_word_out_of_dictionary():
    tok = check_token(Token.word("happpy"), {"happy", "the"})
    assert tok.lookup_form == "happy"


def test_check_token_hashtag_passthrough():
    tok = Token.hashtag("yaaay")
    assert check_token(tok, {"yay"}) == tok


def test_check_token_in_dictionary_untouched():
    tok = Token.word("the")
    assert check_token(tok, {"the"}) == tok


@given(st.text(alphabet="abcxyz", min_size=1, max_size=12))
def test_reduce_repeats_never_lengthens(word):
    tok = Token.word(word)
    out = reduce_repeats(tok, {"cab", "cool"})
    assert len(out.lookup_form) <= len(word)


@given(st.text(alphabet="ab", min_size=1, max_size=10))
def test_reduce_repeats_dictionary_word_is_fixed_point(word):
    tok = Token.word(word)
    assert reduce_repeats(tok, {word}) == tok


def test_token_order_stable_under_checking(wordlist):
    clean = preprocess_tweet(RawTweet("t9", "so haaappy today #yaaay"), wordlist)
    assert [t.lookup_form for t in clean.tokens] == ["so", "happy", "today", "yaaay"]
    assert clean.tokens[3].kind is TokenKind.HASHTAG


def test_load_wordlist(tmp_path):
    p = tmp_path / "words.txt"
    p.write_text("Apple\nbanana\n\ncherry\n", encoding="utf-8")
    assert load_wordlist(p) == {"apple", "banana", "cherry"}
