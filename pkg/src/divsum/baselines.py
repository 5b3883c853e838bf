"""Reference extractors: first sentences and seeded random sentences."""

from __future__ import annotations

import random
from itertools import zip_longest
from typing import Optional, Union

from .exceptions import ConfigurationError
from .graphsum import _SummarizerBase
from .summary import DEFAULT_TC, Summary, Unit, fill_budget, make_summary, units_of, word_budget
from .textprep import Cluster, Document
from .validation import check_budget

RNG_NAME = "python-random-mt19937"


def _nonempty(x):
    return [u for u in units_of(x) if u.sentence.raw_word_count > 0]


def base_first(x: Union[Document, Cluster], tc: Optional[float] = DEFAULT_TC, max_words: Optional[int] = None) -> Summary:
    """Leading sentences until the budget is spent.  For a cluster the
    documents are visited round-robin: first sentence of each, then second..."""
    budget = word_budget(x.word_count, tc, max_words)
    if isinstance(x, Cluster):
        per_doc = [[Unit(k, u.doc_id, u.sentence) for u in _nonempty(d)] for k, d in enumerate(x.documents)]
        order = [u for row in zip_longest(*per_doc) for u in row if u is not None]
    else:
        order = _nonempty(x)
    chosen = []
    used = 0
    for u in order:
        if used + u.sentence.raw_word_count > budget:
            break
        chosen.append(u)
        used += u.sentence.raw_word_count
    if not chosen and order and budget > 0:
        chosen = [order[0]]
    return make_summary(chosen, budget, x.word_count, "base-first")


def shuffled(items: list, seed: int) -> list:
    """Fisher-Yates shuffle driven by ``random.Random(seed).random()``,
    which is the same on every platform and Python version."""
    rng = random.Random(seed)
    items = list(items)
    for i in range(len(items) - 1, 0, -1):
        j = int(rng.random() * (i + 1))
        items[i], items[j] = items[j], items[i]
    return items


def base_rand(
    x: Union[Document, Cluster], seed: int, tc: Optional[float] = DEFAULT_TC, max_words: Optional[int] = None
) -> Summary:
    """Sentences drawn uniformly without replacement while they fit the budget."""
    if seed is None:
        raise ConfigurationError("base-rand needs an explicit seed")
    budget = word_budget(x.word_count, tc, max_words)
    return make_summary(fill_budget(shuffled(_nonempty(x), seed), budget), budget, x.word_count, "base-rand")


class FirstSentencesSummarizer(_SummarizerBase):
    def __init__(self, tc=DEFAULT_TC, max_words=None, language="pt", stemmer="light", title=False):
        self.tc = tc
        self.max_words = max_words
        self.language = language
        self.stemmer = stemmer
        self.title = title

    def _check_params(self):
        check_budget(self.tc, self.max_words)

    def summarize(self, X) -> Summary:
        return base_first(self._validate(X), self.tc, self.max_words)


class RandomSentencesSummarizer(FirstSentencesSummarizer):
    def __init__(self, seed=None, tc=DEFAULT_TC, max_words=None, language="pt", stemmer="light", title=False):
        super().__init__(tc=tc, max_words=max_words, language=language, stemmer=stemmer, title=title)
        self.seed = seed

    def _check_params(self):
        super()._check_params()
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigurationError("seed must be an integer")

    def summarize(self, X) -> Summary:
        return base_rand(self._validate(X), self.seed, self.tc, self.max_words)
