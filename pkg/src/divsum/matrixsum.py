"""Iterative multi-document summarization through pairwise divergence
matrices.

The cluster is folded document by document: the sentences of the running
partial summary (initially the first text) are matched against the next
text, every matched pair keeps the member closest to the whole cluster, and
the survivors become the new partial summary.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .exceptions import DegenerateInputError
from .simdiv import DEFAULT_GAMMA, atom_counts, combined_divergence_counts
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
from .exceptions import ConfigurationError
from .graphsum import _SummarizerBase
from .textprep import Cluster, Document


def unit_label(u: Unit) -> str:
    return f"{u.doc_id}-{u.sentence.index + 1}"


@dataclass(frozen=True)
class DivergenceMatrix:
    rows: tuple[Unit, ...]
    cols: tuple[Unit, ...]
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([""] + [unit_label(c) for c in self.cols])
        for r, row in zip(self.rows, self.values):
            w.writerow([unit_label(r)] + [f"{v:.6f}" for v in row])
        return buf.getvalue()


@dataclass(frozen=True)
class Match:
    """One matched pair and the representative kept from it."""

    row: Unit
    col: Unit
    pair_divergence: float
    winner: Unit
    loser: Unit
    winner_divergence: float
    loser_divergence: float


@dataclass(frozen=True)
class FoldStep:
    matrix: DivergenceMatrix
    matches: tuple[Match, ...]
    partial: tuple[Unit, ...]


@dataclass(frozen=True)
class PartialSummary:
    units: tuple[Unit, ...]
    steps: tuple[FoldStep, ...] = ()

    @property
    def provenance(self) -> dict:
        return {u.key: u.doc_id for u in self.units}


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def _content(units: Sequence[Unit]) -> list[Unit]:
    return [u for u in units if u.sentence.tokens]


def divergence_matrix(
    a: Sequence[Unit], b: Sequence[Unit], gamma: float = DEFAULT_GAMMA, kind: str = "js"
) -> DivergenceMatrix:
    """Cell ``(i, j)`` = combined divergence of ``a[i]`` and ``b[j]``."""
    if not a or not b:
        raise DegenerateInputError("divergence matrix needs two non-empty sentence lists")
    ca = [atom_counts([u.sentence]) for u in a]
    cb = [atom_counts([u.sentence]) for u in b]
    values = np.array([[combined_divergence_counts(x, y, gamma, kind) for y in cb] for x in ca])
    return DivergenceMatrix(tuple(a), tuple(b), values)


def select_matched_pairs(matrix: DivergenceMatrix) -> list[tuple[Unit, Unit]]:
    """One pair per row at the row minimum (ties to the lowest column)."""
    if matrix.values.size == 0:
        raise DegenerateInputError("empty divergence matrix")
    cols = np.argmin(matrix.values, axis=1)
    return [(matrix.rows[i], matrix.cols[j]) for i, j in enumerate(cols)]


def cluster_counts(cluster: Union[Cluster, Document]) -> Counter:
    return atom_counts(u.sentence for u in units_of(cluster))


def pick_cluster_representative(
    pair: tuple[Unit, Unit], cluster: Union[Cluster, Document, Counter], gamma: float = DEFAULT_GAMMA, kind: str = "js"
) -> tuple[Unit, float, float]:
    """Pair member closer to the whole cluster.

    Returns ``(winner, winner divergence, loser divergence)``.  Ties go to
    the member from the earlier text (then the earlier sentence).
    """
    ref = cluster if isinstance(cluster, Counter) else cluster_counts(cluster)
    x, y = sorted(pair, key=lambda u: u.key)
    dx = combined_divergence_counts(atom_counts([x.sentence]), ref, gamma, kind)
    dy = combined_divergence_counts(atom_counts([y.sentence]), ref, gamma, kind)
    return (x, dx, dy) if dx <= dy else (y, dy, dx)


def summatrix_fold(cluster: Cluster, gamma: float = DEFAULT_GAMMA, kind: str = "js") -> PartialSummary:
    """Run the document fold and return the final partial summary with the
    matrices and matches of every step."""
    docs = [_content(units_of(d)) for d in cluster.documents]
    docs = [[Unit(k, u.doc_id, u.sentence) for u in d] for k, d in enumerate(docs)]
    docs = [d for d in docs if d]
    if not docs:
        raise DegenerateInputError("every document of the cluster is empty")
    ref = cluster_counts(cluster)
    partial = list(docs[0])
    steps = []
    for nxt in docs[1:]:
        matrix = divergence_matrix(partial, nxt, gamma, kind)
        matches, survivors, seen = [], [], set()
        cols = np.argmin(matrix.values, axis=1)
        for i, (r, c) in enumerate(select_matched_pairs(matrix)):
            winner, dw, dl = pick_cluster_representative((r, c), ref, gamma, kind)
            loser = c if winner is r else r
            matches.append(Match(r, c, float(matrix.values[i, cols[i]]), winner, loser, dw, dl))
            if winner.key not in seen:
                seen.add(winner.key)
                survivors.append(winner)
        partial = survivors
        steps.append(FoldStep(matrix, tuple(matches), tuple(partial)))
    return PartialSummary(tuple(partial), tuple(steps))


def budget_trim(
    partial: Union[PartialSummary, Sequence[Unit]],
    cluster: Union[Cluster, Document],
    budget: int,
    dice_threshold: float = DEFAULT_DICE,
    gamma: float = DEFAULT_GAMMA,
    kind: str = "js",
) -> Summary:
    """Rank candidates by ascending divergence to the cluster, drop Dice
    duplicates, keep what fits ``budget`` and emit in source order."""
    units = list(partial.units if isinstance(partial, PartialSummary) else partial)
    ref = cluster_counts(cluster)
    div = {u.key: combined_divergence_counts(atom_counts([u.sentence]), ref, gamma, kind) for u in units}
    ranked = sorted(units, key=lambda u: (div[u.key], u.key))
    chosen = fill_budget(remove_redundant(ranked, dice_threshold), budget)
    return make_summary(chosen, budget, cluster.word_count, "summatrix")


def summatrix_summarize(
    x: Union[Cluster, Document],
    gamma: float = DEFAULT_GAMMA,
    dice_threshold: float = DEFAULT_DICE,
    tc: Optional[float] = DEFAULT_TC,
    max_words: Optional[int] = None,
    kind: str = "js",
) -> Summary:
    """Fold the cluster, then trim the final partial summary to the budget.

    A single document has nothing to fold against: its sentences are ranked
    by divergence to the document itself.
    """
    budget = word_budget(x.word_count, tc, max_words)
    if isinstance(x, Document) or len(x.documents) == 1:
        doc = x if isinstance(x, Document) else x.documents[0]
        candidates = _content(units_of(doc))
        if not candidates:
            raise DegenerateInputError("document has no content words")
        return budget_trim(candidates, x, budget, dice_threshold, gamma, kind)
    return budget_trim(summatrix_fold(x, gamma, kind), x, budget, dice_threshold, gamma, kind)


class SumMatrixSummarizer(_SummarizerBase):
    """Multi-document summarizer over pairwise divergence matrices.

    Parameters
    ----------
    divergence : {"js", "kl"}
        Divergence term of the combined measure ``(1 - cos) + D``.
    gamma, dice_threshold, tc, max_words, language, stemmer, title :
        As in :class:`~divsum.graphsum.SasiSummarizer`.
    """

    def __init__(
        self,
        divergence="js",
        gamma=DEFAULT_GAMMA,
        dice_threshold=DEFAULT_DICE,
        tc=DEFAULT_TC,
        max_words=None,
        language="pt",
        stemmer="light",
        title=False,
    ):
        self.divergence = divergence
        self.gamma = gamma
        self.dice_threshold = dice_threshold
        self.tc = tc
        self.max_words = max_words
        self.language = language
        self.stemmer = stemmer
        self.title = title

    def _check_params(self):
        super()._check_params()
        if self.divergence not in ("js", "kl"):
            raise ConfigurationError(f"divergence must be 'js' or 'kl', got {self.divergence!r}")

    def fold(self, X) -> PartialSummary:
        x = self._validate(X)
        if isinstance(x, Document):
            x = Cluster(x.id, (x,))
        return summatrix_fold(x, self.gamma, self.divergence)

    def summarize(self, X) -> Summary:
        x = self._validate(X)
        return summatrix_summarize(x, self.gamma, self.dice_threshold, self.tc, self.max_words, self.divergence)
