import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _oracles as oracle
from divsum.exceptions import UndefinedInputError
from divsum.simdiv import (
    SmoothingParams,
    WordDistribution,
    atom_counts,
    combined_divergence,
    cosine,
    dice,
    divergence,
    jaccard,
    jaccard_distance,
    js_divergence,
    kl_divergence,
    sentence_js,
    sentence_relevance,
    smooth_probability,
    tfisf,
    tfisf_vector,
)
from divsum.textprep import build_bag_of_words, make_sentence

words = st.lists(st.sampled_from("abcdef"), min_size=1, max_size=8)


# -- tf-isf -------------------------------------------------------------------


def _bow(*texts):
    return build_bag_of_words([make_sentence(i, t) for i, t in enumerate(texts)])


def test_tfisf_hand_computed():
    bow = _bow("a b", "a c", "d a a")
    # a: tf 4, in all 3 sentences -> 0; b: tf 1, in 1 of 3 -> ln 3
    assert tfisf("a", bow) == 0.0
    assert tfisf("b", bow) == pytest.approx(math.log(3), abs=1e-15)
    assert sentence_relevance(["b", "c", "a"], bow) == pytest.approx(2 * math.log(3), abs=1e-15)
    assert list(tfisf_vector(bow)) == pytest.approx([tfisf(w, bow) for w in "abcd"], abs=1e-15)


def test_tfisf_unknown_word():
    with pytest.raises(KeyError):
        tfisf("zz", _bow("a b"))


def test_tfisf_falls_as_the_word_spreads():
    # "w" keeps tf 3 while reaching more of the 4 sentences
    values = [
        tfisf("w", _bow("w w w", "x", "y", "z")),
        tfisf("w", _bow("w w", "w", "y", "z")),
        tfisf("w", _bow("w", "w", "w", "z")),
    ]
    assert values[0] > values[1] > values[2] > 0


def test_word_in_every_sentence_scores_zero():
    bow = _bow("x y", "x z", "x")
    assert tfisf("x", bow) == 0.0


# -- set similarities ---------------------------------------------------------


def test_set_similarity_examples():
    assert cosine("ab", "ab") == 1.0
    assert cosine("ab", "cd") == 0.0
    assert cosine("abc", "ab") == pytest.approx(2 / math.sqrt(6))
    assert jaccard("abc", "abd") == pytest.approx(0.5)
    assert jaccard_distance("ab", "ab") == 0.0
    assert dice("abc", "abd") == pytest.approx(2 / 3)


def test_set_similarity_undefined():
    with pytest.raises(UndefinedInputError):
        cosine([], "a")
    with pytest.raises(UndefinedInputError):
        jaccard([], [])
    with pytest.raises(UndefinedInputError):
        dice([], [])


@given(words, words)
def test_set_similarity_ranges_and_oracle(p, q):
    for f in (cosine, jaccard, dice):
        v = f(p, q)
        assert 0.0 <= v <= 1.0
        assert f(p, q) == pytest.approx(f(q, p), abs=1e-15)
    assert cosine(p, q) == pytest.approx(oracle.cosine_sets(p, q), abs=1e-12)
    assert cosine(p, p) == 1.0


# -- distributions and smoothing ----------------------------------------------


def test_smoothing_params():
    p = WordDistribution.from_tokens("aab")
    q = WordDistribution.from_tokens("bc")
    sm = SmoothingParams.for_pair(p, q, 0.1)
    assert sm.n_p == 5 and sm.voc == 3 and sm.beta == pytest.approx(4.5)
    # c is absent from p; its q probability is 1/2
    assert smooth_probability(0.5, sm) == pytest.approx(0.6 / (5 + 0.45))


def test_smoothing_hand_value():
    # gamma 0.1, voc 4 so beta 6, N_P 10
    assert smooth_probability(0.5, SmoothingParams(0.1, 6.0, 10)) == pytest.approx(0.6 / 10.6, abs=1e-15)
    assert smooth_probability(0.5, SmoothingParams(1e-12, 6.0, 10)) == pytest.approx(0.5 / 10)


def test_distribution_needs_words():
    with pytest.raises(UndefinedInputError):
        WordDistribution.from_counts({})


def test_kl_js_frozen_values():
    # same supports, so no smoothing is involved: P = (.5, .5), Q = (.9, .1)
    p, q = Counter({"a": 5, "b": 5}), Counter({"a": 9, "b": 1})
    kl_pq = 0.5 * (0.5 * math.log(0.5 / 0.9) + 0.5 * math.log(0.5 / 0.1))
    assert divergence(p, q, kind="kl") == pytest.approx(kl_pq, abs=1e-15)
    assert divergence(p, q, kind="kl") == pytest.approx(0.25541281188299536, abs=1e-12)
    assert divergence(q, p, kind="kl") == pytest.approx(0.18403210358424854, abs=1e-12)
    assert divergence(p, q) == pytest.approx(0.10174922507919676, abs=1e-12)


def test_divergence_kind_checked():
    with pytest.raises(ValueError):
        divergence({"a": 1}, {"a": 1}, kind="hellinger")


@given(words, words)
@settings(max_examples=300)
def test_js_kl_match_oracle(p, q):
    assert divergence(Counter(p), Counter(q)) == pytest.approx(oracle.js(p, q), abs=1e-12)
    assert divergence(Counter(p), Counter(q), kind="kl") == pytest.approx(oracle.kl(p, q), abs=1e-12)


@given(words, words, st.floats(0.01, 2.0))
@settings(max_examples=300)
def test_divergence_axioms(p, q, gamma):
    cp, cq = Counter(p), Counter(q)
    js_pq = divergence(cp, cq, gamma)
    assert js_pq >= -1e-15
    assert js_pq == pytest.approx(divergence(cq, cp, gamma), abs=1e-12)
    assert divergence(cp, cp, gamma) == 0.0
    assert combined_divergence(p, q, gamma) >= -1e-15
    assert divergence(cp, cq, kind="kl") >= -1e-15


def test_kl_can_dip_below_zero_for_large_gamma():
    # smoothed values are not renormalized, so a large gamma gives the absent
    # word more mass on the q side than it has on the p side
    assert divergence(Counter("ab"), Counter("a"), 2.0, "kl") < 0
    assert divergence(Counter("ab"), Counter("a"), 0.1, "kl") > 0


def test_js_and_kl_distribution_api():
    p, q = WordDistribution.from_tokens("ab"), WordDistribution.from_tokens("bc")
    assert js_divergence(p, q) == pytest.approx(oracle.js("ab", "bc"), abs=1e-12)
    assert kl_divergence(p, q) == pytest.approx(oracle.kl("ab", "bc"), abs=1e-12)


def test_sentence_js_requires_content():
    with pytest.raises(UndefinedInputError):
        sentence_js([], ["a"])


# -- combined divergence ------------------------------------------------------


def test_atom_counts_do_not_cross_units():
    got = atom_counts([["a", "b"], ["c"]])
    assert got == Counter({"a": 1, "b": 1, "c": 1, ("a", "b"): 1})


@given(words, words)
def test_combined_matches_oracle(p, q):
    assert combined_divergence(p, q) == pytest.approx(oracle.combined(p, q), abs=1e-12)


def test_combined_identical_is_zero():
    assert combined_divergence(list("abca"), list("abca")) == 0.0
