"""Sentence graphs, the greedy independent-set heuristic, and the SASI and
RAG graph summarizers."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import DegenerateInputError
from .simdiv import DEFAULT_GAMMA, divergence, sentence_js, sentence_relevance, tfisf_vector
from .summary import (
    DEFAULT_DICE,
    DEFAULT_TC,
    Summary,
    Unit,
    fill_budget,
    make_summary,
    remove_redundant,
    units_of,
    word_budget,
)
from .textprep import BagOfWords, Cluster, Document, TextPreprocessor, build_bag_of_words
from .validation import check_budget, check_positive, check_text_input, check_unit_interval

# Similarity cutoffs selected in the multi-language experiments.
D_FRASE = 0.32
D_TITULO = 0.6
D_TEXTO = 0.9
KEEP_FRACTION = 0.1


@dataclass(frozen=True)
class SasiThresholds:
    d_frase: float = D_FRASE
    d_titulo: float = D_TITULO
    d_texto: float = D_TEXTO


@dataclass(frozen=True)
class SentenceGraph:
    """Undirected graph over sentence vertices; edge weights are divergences.

    ``vertices`` are arbitrary sortable ids (sentence index for one document,
    pool position for a cluster); ``labels`` maps them to display names.
    """

    vertices: tuple
    edges: Mapping[tuple, float]
    threshold: float = float("inf")
    labels: Mapping = field(default_factory=dict)

    def __post_init__(self):
        vs = set(self.vertices)
        adj = {v: set() for v in self.vertices}
        for (u, v), w in self.edges.items():
            if u == v:
                raise ValueError(f"self-loop on vertex {u!r}")
            if u not in vs or v not in vs:
                raise ValueError(f"edge ({u!r}, {v!r}) references an unknown vertex")
            if not w < self.threshold:
                raise ValueError(f"edge ({u!r}, {v!r}) weight {w} is not below the threshold")
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", {v: frozenset(n) for v, n in adj.items()})

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[tuple]) -> "SentenceGraph":
        """Unweighted construction (weights 0) for tests and tooling."""
        norm = {}
        for u, v in edges:
            norm[(min(u, v), max(u, v))] = 0.0
        return cls(tuple(vertices), norm)

    def neighbors(self, v) -> frozenset:
        return self._adj[v]

    def degree(self, v) -> int:
        return len(self._adj[v])

    def has_edge(self, u, v) -> bool:
        return v in self._adj[u]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def to_dot(self) -> str:
        lines = ["graph sentences {"]
        for v in self.vertices:
            lines.append(f'  {_dot_id(v)} [label="{self.labels.get(v, v)}"];')
        for (u, v), w in sorted(self.edges.items()):
            lines.append(f'  {_dot_id(u)} -- {_dot_id(v)} [label="{w:.4f}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_id(v) -> str:
    return f"v{v}" if isinstance(v, int) else '"' + str(v).replace('"', r"\"") + '"'


# ---------------------------------------------------------------------------
# Graph operations
# ---------------------------------------------------------------------------


def build_sentence_graph(
    sentences: Union[Sequence, Mapping],
    d_frase: float = D_FRASE,
    gamma: float = DEFAULT_GAMMA,
    labels: Optional[Mapping] = None,
) -> SentenceGraph:
    """Edge ``(i, j)`` iff ``D_JS(s_i || s_j) < d_frase``.

    ``sentences`` is a sequence (vertex ids = positions) or a mapping from
    vertex id to a token sequence / :class:`Sentence`.
    """
    items = list(sentences.items()) if isinstance(sentences, Mapping) else list(enumerate(sentences))
    if not items:
        raise DegenerateInputError("cannot build a graph without sentences")
    edges = {}
    for a in range(len(items)):
        va, sa = items[a]
        for b in range(a + 1, len(items)):
            vb, sb = items[b]
            w = sentence_js(sa, sb, gamma)
            if w < d_frase:
                edges[(va, vb) if va < vb else (vb, va)] = w
    return SentenceGraph(tuple(v for v, _ in items), edges, d_frase, dict(labels or {}))


def degree_order(graph: SentenceGraph, vertices: Optional[Iterable] = None) -> list:
    """Vertices by decreasing degree; ties go to the smaller vertex id."""
    vs = graph.vertices if vertices is None else vertices
    return sorted(vs, key=lambda v: (-graph.degree(v), v))


def greedy_independent_set(graph: SentenceGraph) -> list:
    """Maximal independent set built by scanning vertices in degree order and
    accepting each one not adjacent to anything accepted so far.

    Returned in acceptance order (highest degree first).
    """
    chosen: list = []
    blocked: set = set()
    for v in degree_order(graph):
        if v in blocked:
            continue
        chosen.append(v)
        blocked.add(v)
        blocked |= graph.neighbors(v)
    return chosen


# ---------------------------------------------------------------------------
# SASI
# ---------------------------------------------------------------------------


def filter_irrelevant(
    doc: Document, thresholds: SasiThresholds = SasiThresholds(), gamma: float = DEFAULT_GAMMA
) -> list[int]:
    """Indices of sentences kept as relevant to their document.

    A sentence is dropped when ``D_JS(text || s) > d_texto``; when the
    document has a title, a dropped sentence comes back if
    ``D_JS(title || s) < d_titulo``.  Sentences with no content words are
    always dropped.
    """
    text = Counter(stem for s in doc.sentences for stem in s.stems)
    title = Counter(doc.title.stems) if doc.title is not None else None
    kept = []
    for s in doc.sentences:
        if not s.tokens:
            continue
        mine = Counter(s.stems)
        if divergence(text, mine, gamma) > thresholds.d_texto:
            if not title or not divergence(title, mine, gamma) < thresholds.d_titulo:
                continue
        kept.append(s.index)
    return kept


def _relevant_units(x: Union[Document, Cluster], thresholds: SasiThresholds, gamma: float) -> list[Unit]:
    docs = [x] if isinstance(x, Document) else list(x.documents)
    units = []
    for k, d in enumerate(docs):
        keep = set(filter_irrelevant(d, thresholds, gamma))
        units.extend(Unit(k, d.id, s) for s in d.sentences if s.index in keep)
    return units


def _labels(units: Sequence[Unit], multi: bool) -> dict:
    if multi:
        return {i: f"{u.doc_id}-{u.sentence.index + 1}" for i, u in enumerate(units)}
    return {i: str(u.sentence.index) for i, u in enumerate(units)}


def _graph_over(units: Sequence[Unit], d_frase: float, gamma: float, multi: bool) -> SentenceGraph:
    if multi:
        ids = range(len(units))
    else:
        ids = [u.sentence.index for u in units]
    labels = {v: lab for v, lab in zip(ids, _labels(units, multi).values())}
    return build_sentence_graph({v: u.sentence for v, u in zip(ids, units)}, d_frase, gamma, labels)


def sasi_graph(
    x: Union[Document, Cluster], thresholds: SasiThresholds = SasiThresholds(), gamma: float = DEFAULT_GAMMA
) -> tuple[list[Unit], SentenceGraph]:
    """Relevant units and the SASI sentence graph over them.  Vertex ids are
    sentence indices for a document and pool positions for a cluster."""
    units = _relevant_units(x, thresholds, gamma)
    if not units:
        raise DegenerateInputError("no sentence survives relevance filtering")
    return units, _graph_over(units, thresholds.d_frase, gamma, isinstance(x, Cluster))


def _vertex_map(units: Sequence[Unit], multi: bool) -> dict:
    if multi:
        return dict(enumerate(units))
    return {u.sentence.index: u for u in units}


def sasi_summarize(
    x: Union[Document, Cluster],
    thresholds: SasiThresholds = SasiThresholds(),
    gamma: float = DEFAULT_GAMMA,
    dice_threshold: float = DEFAULT_DICE,
    tc: Optional[float] = DEFAULT_TC,
    max_words: Optional[int] = None,
) -> Summary:
    """Filter, graph, greedy independent set, Dice dedup, budget fill.

    Independent-set vertices enter the summary by decreasing degree; the
    output is re-sorted into source order.
    """
    budget = word_budget(x.word_count, tc, max_words)
    units, graph = sasi_graph(x, thresholds, gamma)
    by_vertex = _vertex_map(units, isinstance(x, Cluster))
    siv = greedy_independent_set(graph)
    ranked = remove_redundant([by_vertex[v] for v in siv], dice_threshold)
    return make_summary(fill_budget(ranked, budget), budget, x.word_count, "sasi")


# ---------------------------------------------------------------------------
# RAG
# ---------------------------------------------------------------------------


def relevances(units: Sequence[Unit]) -> np.ndarray:
    """TF-ISF relevance of every unit against the pooled bag of words."""
    bow = build_bag_of_words([u.sentence for u in units])
    return np.array([sentence_relevance(u.sentence, bow) for u in units])


def rag_prefilter(bow_or_rel: Union[BagOfWords, Sequence[float]], keep_fraction: float = KEEP_FRACTION) -> list[int]:
    """Row indices whose relevance reaches ``keep_fraction`` of the maximum.

    Accepts a bag of words (relevance computed from it) or precomputed
    relevances.  Never returns an empty list for non-empty input.
    """
    if isinstance(bow_or_rel, BagOfWords):
        rel = bow_or_rel.matrix @ tfisf_vector(bow_or_rel)
    else:
        rel = np.asarray(bow_or_rel, dtype=float)
    if rel.size == 0:
        return []
    top = rel.max()
    if top <= 0:
        return list(range(rel.size))
    return [i for i, r in enumerate(rel) if r >= keep_fraction * top]


@dataclass(frozen=True)
class RagScores:
    units: tuple[Unit, ...]
    relevance: np.ndarray
    kept: tuple[int, ...]
    graph: SentenceGraph
    degree: np.ndarray
    score: np.ndarray


def rag_scores(
    x: Union[Document, Cluster],
    d_frase: float = D_FRASE,
    gamma: float = DEFAULT_GAMMA,
    keep_fraction: float = KEEP_FRACTION,
) -> RagScores:
    """``score(i) = degree(i) * rel(i)`` over the prefiltered sentences.

    Sentences dropped by the prefilter (or without content words) get
    degree 0 and score 0.
    """
    all_units = units_of(x)
    units = [u for u in all_units if u.sentence.tokens]
    if not units:
        raise DegenerateInputError("no sentence has content words")
    rel = relevances(units)
    kept = rag_prefilter(rel, keep_fraction)
    multi = isinstance(x, Cluster)
    graph = _graph_over([units[i] for i in kept], d_frase, gamma, multi)
    ids = list(range(len(kept))) if multi else [units[i].sentence.index for i in kept]
    degree = np.zeros(len(units), dtype=int)
    for pos, vid in zip(kept, ids):
        degree[pos] = graph.degree(vid)
    return RagScores(tuple(units), rel, tuple(kept), graph, degree, degree * rel)


def rag_summarize(
    x: Union[Document, Cluster],
    d_frase: float = D_FRASE,
    gamma: float = DEFAULT_GAMMA,
    keep_fraction: float = KEEP_FRACTION,
    dice_threshold: float = DEFAULT_DICE,
    tc: Optional[float] = DEFAULT_TC,
    max_words: Optional[int] = None,
) -> Summary:
    """Highest-scoring sentences, Dice-deduplicated, within the budget.

    Score-0 sentences (isolated vertices) are considered only after every
    positive-score candidate, by decreasing relevance, so they fill leftover
    budget instead of leaving the summary empty.
    """
    budget = word_budget(x.word_count, tc, max_words)
    chosen = rag_select(x, budget, d_frase, gamma, keep_fraction, dice_threshold)
    return make_summary(chosen, budget, x.word_count, "rag")


def rag_select(
    x: Union[Document, Cluster],
    budget: int,
    d_frase: float = D_FRASE,
    gamma: float = DEFAULT_GAMMA,
    keep_fraction: float = KEEP_FRACTION,
    dice_threshold: float = DEFAULT_DICE,
) -> list[Unit]:
    """Units chosen by RAG for an absolute word ``budget`` (unordered)."""
    sc = rag_scores(x, d_frase, gamma, keep_fraction)
    kept = set(sc.kept)
    n = len(sc.units)
    positive = sorted((i for i in range(n) if sc.score[i] > 0), key=lambda i: (-sc.score[i], i))
    fallback = sorted(
        (i for i in range(n) if sc.score[i] <= 0 and i in kept), key=lambda i: (-sc.relevance[i], i)
    )
    ranked = remove_redundant([sc.units[i] for i in positive + fallback], dice_threshold)
    return fill_budget(ranked, budget)


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


class _SummarizerBase(TransformerMixin, BaseEstimator):
    """Shared plumbing: parameter checks, raw-text coercion, batch transform.

    The estimators are stateless: ``fit`` only validates parameters, and
    ``transform`` maps an iterable of inputs to a list of :class:`Summary`.
    """

    _allow_cluster = True

    def _preprocessor(self) -> TextPreprocessor:
        return TextPreprocessor(language=self.language, stemmer=self.stemmer, title=self.title)

    def _check_params(self):
        check_positive("gamma", self.gamma)
        check_unit_interval("dice_threshold", self.dice_threshold)
        check_budget(self.tc, self.max_words)

    def _validate(self, X):
        self._check_params()
        return check_text_input(X, self._preprocessor(), self._allow_cluster)

    def fit(self, X=None, y=None):
        self._check_params()
        return self

    def summarize(self, X) -> Summary:  # pragma: no cover - abstract
        raise NotImplementedError

    def transform(self, X):
        if isinstance(X, (str, Document, Cluster)):
            raise TypeError("transform expects an iterable of inputs; use summarize() for one")
        return [self.summarize(x) for x in X]

    def __sklearn_is_fitted__(self):
        return True


class SasiSummarizer(_SummarizerBase):
    """Independent-set summarizer over a divergence sentence graph.

    Parameters
    ----------
    d_frase, d_titulo, d_texto : float
        JS cutoffs for sentence-sentence edges, title rescue and document
        relevance.
    gamma : float
        Smoothing weight of the divergences.
    dice_threshold : float
        Redundancy cutoff on stem-set Dice overlap.
    tc : float
        Compression rate; the budget is ``floor(tc * source words)``.
    max_words : int or None
        Absolute word budget, overrides ``tc``.
    language, stemmer, title :
        Preprocessing of raw-text input (see :class:`TextPreprocessor`).
    """

    def __init__(
        self,
        d_frase=D_FRASE,
        d_titulo=D_TITULO,
        d_texto=D_TEXTO,
        gamma=DEFAULT_GAMMA,
        dice_threshold=DEFAULT_DICE,
        tc=DEFAULT_TC,
        max_words=None,
        language="pt",
        stemmer="light",
        title=False,
    ):
        self.d_frase = d_frase
        self.d_titulo = d_titulo
        self.d_texto = d_texto
        self.gamma = gamma
        self.dice_threshold = dice_threshold
        self.tc = tc
        self.max_words = max_words
        self.language = language
        self.stemmer = stemmer
        self.title = title

    @property
    def thresholds(self) -> SasiThresholds:
        return SasiThresholds(self.d_frase, self.d_titulo, self.d_texto)

    def _check_params(self):
        super()._check_params()
        for name in ("d_frase", "d_titulo", "d_texto"):
            check_positive(name, getattr(self, name))

    def build_graph(self, X) -> SentenceGraph:
        return sasi_graph(self._validate(X), self.thresholds, self.gamma)[1]

    def summarize(self, X) -> Summary:
        x = self._validate(X)
        return sasi_summarize(x, self.thresholds, self.gamma, self.dice_threshold, self.tc, self.max_words)


class RagSummarizer(_SummarizerBase):
    """Relevance-and-graph summarizer: ``score = degree * TF-ISF relevance``.

    ``keep_fraction`` sets the relevance prefilter (fraction of the best
    sentence's relevance); ``d_frase`` the JS edge cutoff.
    """

    def __init__(
        self,
        d_frase=D_FRASE,
        keep_fraction=KEEP_FRACTION,
        gamma=DEFAULT_GAMMA,
        dice_threshold=DEFAULT_DICE,
        tc=DEFAULT_TC,
        max_words=None,
        language="pt",
        stemmer="light",
        title=False,
    ):
        self.d_frase = d_frase
        self.keep_fraction = keep_fraction
        self.gamma = gamma
        self.dice_threshold = dice_threshold
        self.tc = tc
        self.max_words = max_words
        self.language = language
        self.stemmer = stemmer
        self.title = title

    def _check_params(self):
        super()._check_params()
        check_positive("d_frase", self.d_frase)
        check_unit_interval("keep_fraction", self.keep_fraction, closed_left=True)

    def scores(self, X) -> RagScores:
        return rag_scores(self._validate(X), self.d_frase, self.gamma, self.keep_fraction)

    def build_graph(self, X) -> SentenceGraph:
        return self.scores(X).graph

    def summarize(self, X) -> Summary:
        x = self._validate(X)
        return rag_summarize(
            x, self.d_frase, self.gamma, self.keep_fraction, self.dice_threshold, self.tc, self.max_words
        )
