"""Relevance, similarity and divergence measures over stemmed sentences.

All logarithms are natural.  Divergences follow the smoothed formulation:
for a word of the union vocabulary ``W`` missing from one side, that side's
probability is replaced by ``(p_other + gamma) / (N_P + gamma * beta)`` where
``N_P`` is the token count of both sides, ``voc = |W|`` and
``beta = 1.5 * voc``.  Smoothed values are not renormalized.

The KL divergence carries a leading ``1/2`` factor, i.e. it is half the
textbook value.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .exceptions import UndefinedInputError
from .textprep import BagOfWords, Sentence

DEFAULT_GAMMA = 0.1

Tokens = Union[Sentence, Sequence[str]]


# ---------------------------------------------------------------------------
# TF-ISF relevance
# ---------------------------------------------------------------------------


def tfisf(word: str, bow: BagOfWords) -> float:
    """``tf(w) * log(N_S / n_w)``; ``tf`` is the corpus frequency of ``w``."""
    try:
        col = bow.vocabulary[word]
    except KeyError:
        raise KeyError(f"word {word!r} is not in the vocabulary") from None
    column = bow.matrix[:, col]
    tf = int(column.sum())
    n_w = int(np.count_nonzero(column))
    return tf * math.log(bow.n_s / n_w)


def tfisf_vector(bow: BagOfWords) -> np.ndarray:
    """tfisf of every vocabulary column at once."""
    tf = bow.matrix.sum(axis=0)
    n_w = np.count_nonzero(bow.matrix, axis=0)
    return tf * np.log(bow.n_s / n_w)


def sentence_relevance(sentence: Tokens, bow: BagOfWords) -> float:
    """Sum of tfisf over the sentence's stems, each occurrence counted."""
    return float(sum(tfisf(w, bow) for w in _stems(sentence)))


# ---------------------------------------------------------------------------
# Set similarities
# ---------------------------------------------------------------------------


def cosine(p: Iterable[str], q: Iterable[str]) -> float:
    """Cosine of binary presence vectors over the union vocabulary."""
    p, q = frozenset(p), frozenset(q)
    if not p or not q:
        raise UndefinedInputError("cosine is undefined for an empty word set")
    # sqrt of the product keeps cosine(P, P) exactly 1
    return len(p & q) / math.sqrt(len(p) * len(q))


def jaccard(p: Iterable[str], q: Iterable[str]) -> float:
    p, q = frozenset(p), frozenset(q)
    union = p | q
    if not union:
        raise UndefinedInputError("jaccard is undefined for two empty sets")
    return len(p & q) / len(union)


def jaccard_distance(p: Iterable[str], q: Iterable[str]) -> float:
    return 1.0 - jaccard(p, q)


def dice(p: Iterable[str], q: Iterable[str]) -> float:
    """``2|P & Q| / (|P| + |Q|)``."""
    p, q = frozenset(p), frozenset(q)
    if not p and not q:
        raise UndefinedInputError("dice is undefined for two empty sets")
    return 2 * len(p & q) / (len(p) + len(q))


# ---------------------------------------------------------------------------
# Distributions and smoothing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WordDistribution:
    """Relative frequencies of the atoms of one text unit."""

    probabilities: Mapping[object, float]
    total_words: int

    @classmethod
    def from_counts(cls, counts: Mapping[object, int]) -> "WordDistribution":
        total = sum(counts.values())
        if total <= 0:
            raise UndefinedInputError("cannot build a distribution from zero words")
        return cls({w: c / total for w, c in counts.items() if c > 0}, total)

    @classmethod
    def from_tokens(cls, tokens: Iterable) -> "WordDistribution":
        return cls.from_counts(Counter(tokens))

    @property
    def support(self) -> frozenset:
        return frozenset(self.probabilities)


@dataclass(frozen=True)
class SmoothingParams:
    gamma: float
    beta: float
    n_p: int

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")

    @classmethod
    def for_pair(cls, p: WordDistribution, q: WordDistribution, gamma: float = DEFAULT_GAMMA):
        voc = len(p.support | q.support)
        return cls(gamma=gamma, beta=1.5 * voc, n_p=p.total_words + q.total_words)

    @property
    def voc(self) -> float:
        return self.beta / 1.5


def smooth_probability(present_prob: float, smoothing: SmoothingParams) -> float:
    """Substitute probability for a word absent from one side, given the
    probability ``present_prob`` it has on the other side."""
    return (present_prob + smoothing.gamma) / (smoothing.n_p + smoothing.gamma * smoothing.beta)


def _smoothed_pairs(p: WordDistribution, q: WordDistribution, smoothing: SmoothingParams):
    pp, qq = p.probabilities, q.probabilities
    for w in pp.keys() | qq.keys():
        pw = pp.get(w)
        qw = qq.get(w)
        if pw is None:
            pw = smooth_probability(qw, smoothing)
        elif qw is None:
            qw = smooth_probability(pw, smoothing)
        yield pw, qw


def kl_divergence(p: WordDistribution, q: WordDistribution, smoothing: SmoothingParams = None) -> float:
    if smoothing is None:
        smoothing = SmoothingParams.for_pair(p, q)
    return 0.5 * math.fsum(pw * math.log(pw / qw) for pw, qw in _smoothed_pairs(p, q, smoothing))


def js_divergence(p: WordDistribution, q: WordDistribution, smoothing: SmoothingParams = None) -> float:
    if smoothing is None:
        smoothing = SmoothingParams.for_pair(p, q)
    terms = []
    for pw, qw in _smoothed_pairs(p, q, smoothing):
        m = pw + qw
        terms.append(pw * math.log(2 * pw / m) + qw * math.log(2 * qw / m))
    return 0.5 * math.fsum(terms)


def divergence(p_counts: Mapping, q_counts: Mapping, gamma: float = DEFAULT_GAMMA, kind: str = "js") -> float:
    """Smoothed JS (or KL) divergence between two count maps."""
    p = WordDistribution.from_counts(p_counts)
    q = WordDistribution.from_counts(q_counts)
    smoothing = SmoothingParams.for_pair(p, q, gamma)
    if kind == "js":
        return js_divergence(p, q, smoothing)
    if kind == "kl":
        return kl_divergence(p, q, smoothing)
    raise ValueError(f"unknown divergence {kind!r}; expected 'js' or 'kl'")


def sentence_js(a: Tokens, b: Tokens, gamma: float = DEFAULT_GAMMA) -> float:
    """D_JS between the unigram stem distributions of two token sequences."""
    ca, cb = Counter(_stems(a)), Counter(_stems(b))
    if not ca or not cb:
        raise UndefinedInputError("divergence is undefined for an empty sentence")
    return divergence(ca, cb, gamma, "js")


# ---------------------------------------------------------------------------
# Unigram + bigram combined divergence
# ---------------------------------------------------------------------------


def atom_counts(units: Iterable[Tokens]) -> Counter:
    """Unigram stems plus adjacent-stem bigrams, counted per occurrence.

    Bigrams never cross the boundary between two units.
    """
    counts: Counter = Counter()
    for unit in units:
        stems = _stems(unit)
        counts.update(stems)
        counts.update(zip(stems, stems[1:]))
    return counts


def combined_divergence_counts(a: Mapping, b: Mapping, gamma: float = DEFAULT_GAMMA, kind: str = "js") -> float:
    if not a or not b:
        raise UndefinedInputError("divergence is undefined for an empty sentence")
    return (1.0 - cosine(a.keys(), b.keys())) + divergence(a, b, gamma, kind)


def combined_divergence(f1: Tokens, f2: Tokens, gamma: float = DEFAULT_GAMMA, kind: str = "js") -> float:
    """``[1 - cos(F1, F2)] + D(F1 || F2)`` over the unigram+bigram atom space."""
    return combined_divergence_counts(atom_counts([f1]), atom_counts([f2]), gamma, kind)


def _stems(x: Tokens) -> Sequence[str]:
    if isinstance(x, Sentence):
        return x.stems
    return tuple(x)
