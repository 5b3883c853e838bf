import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from divsum.baselines import (
    FirstSentencesSummarizer,
    RandomSentencesSummarizer,
    base_first,
    base_rand,
    shuffled,
)
from divsum.exceptions import ConfigurationError
from divsum.textprep import Cluster, Document, make_sentence


def _doc(doc_id, lengths):
    sents = tuple(make_sentence(i, " ".join(f"w{i}x{k}" for k in range(n))) for i, n in enumerate(lengths))
    return Document(doc_id, sents)


def test_first_stops_at_the_first_misfit():
    doc = _doc("d", [40, 40, 40, 5])
    s = base_first(doc, max_words=100)
    assert [e.index for e in s.entries] == [0, 1]  # the short fourth sentence is not reached
    assert s.word_count == 80


def test_first_single_sentence_exception():
    s = base_first(_doc("d", [40, 3]), max_words=10)
    assert [e.index for e in s.entries] == [0]
    assert base_first(_doc("d", [40]), max_words=0).status == "empty"


def test_first_round_robin_on_clusters():
    c = Cluster("c", (_doc("A", [5, 5, 5]), _doc("B", [5]), _doc("C", [5, 5])))
    s = base_first(c, max_words=25)
    assert [(e.doc_id, e.index) for e in s.entries] == [("A", 0), ("A", 1), ("B", 0), ("C", 0), ("C", 1)]


def test_large_budget_takes_everything(sanguessugas):
    n = len(sanguessugas.sentences)
    assert len(base_first(sanguessugas, max_words=10_000)) == n
    assert len(base_rand(sanguessugas, 3, max_words=10_000)) == n


@given(st.lists(st.integers(), max_size=30), st.integers(0, 2**32))
def test_shuffle_is_a_permutation(items, seed):
    out = shuffled(items, seed)
    assert sorted(out) == sorted(items)
    assert out == shuffled(items, seed)


def test_shuffle_follows_the_documented_draws():
    rng = random.Random(0)
    items = list(range(5))
    for i in range(4, 0, -1):
        j = int(rng.random() * (i + 1))
        items[i], items[j] = items[j], items[i]
    assert shuffled(list(range(5)), 0) == items == [2, 0, 1, 3, 4]


def test_rand_is_deterministic_and_seed_sensitive(sanguessugas):
    a = base_rand(sanguessugas, 7, max_words=60)
    assert a.keys == base_rand(sanguessugas, 7, max_words=60).keys
    assert a.within_budget()
    idx = [e.index for e in a.entries]
    assert idx == sorted(idx)
    differing = sum(
        base_rand(sanguessugas, s, max_words=60).keys != base_rand(sanguessugas, s + 1000, max_words=60).keys
        for s in range(20)
    )
    assert differing >= 1


def test_rand_needs_seed(sanguessugas):
    with pytest.raises(ConfigurationError):
        base_rand(sanguessugas, None)
    with pytest.raises(ConfigurationError):
        RandomSentencesSummarizer().fit()
    with pytest.raises(ConfigurationError):
        RandomSentencesSummarizer(seed=True).fit()


def test_estimators(sanguessugas_raw, congo_raws):
    first = FirstSentencesSummarizer(max_words=50)
    assert first.summarize(sanguessugas_raw).keys == base_first(
        first._preprocessor().make_document(sanguessugas_raw), max_words=50
    ).keys
    rnd = RandomSentencesSummarizer(seed=1, max_words=80)
    assert rnd.summarize(congo_raws).keys == rnd.summarize(congo_raws).keys
    assert rnd.get_params()["seed"] == 1
