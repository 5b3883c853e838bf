"""Summary container, word budgets and the Dice redundancy filter shared by
all summarizers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .simdiv import dice
from .textprep import Cluster, Document, Sentence

DEFAULT_TC = 0.20
DEFAULT_DICE = 0.5


@dataclass(frozen=True)
class SummaryEntry:
    doc_position: int
    doc_id: str
    index: int
    text: str
    words: int


@dataclass(frozen=True)
class Summary:
    """Selected sentences in source order plus budget accounting.

    ``status`` is ``"ok"`` or ``"empty"``; an empty summary is a valid result
    (zero budget, empty source), never an exception.
    """

    entries: tuple[SummaryEntry, ...]
    budget: int
    source_words: int = 0
    algorithm: str = ""
    status: str = field(default="ok")

    @property
    def word_count(self) -> int:
        return sum(e.words for e in self.entries)

    @property
    def text(self) -> str:
        return "\n".join(e.text for e in self.entries)

    @property
    def keys(self) -> list[tuple[str, int]]:
        return [(e.doc_id, e.index) for e in self.entries]

    @property
    def compression_rate(self) -> float:
        return self.word_count / self.source_words if self.source_words else 0.0

    def within_budget(self) -> bool:
        return self.word_count <= self.budget or len(self.entries) == 1

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Unit:
    """A sentence together with its provenance inside a document or cluster."""

    doc_position: int
    doc_id: str
    sentence: Sentence

    @property
    def key(self) -> tuple[int, int]:
        return (self.doc_position, self.sentence.index)


def units_of(x: Union[Document, Cluster]) -> list[Unit]:
    if isinstance(x, Document):
        return [Unit(0, x.id, s) for s in x.sentences]
    return [Unit(k, d.id, s) for k, d in enumerate(x.documents) for s in d.sentences]


def source_word_count(x: Union[Document, Cluster]) -> int:
    return x.word_count


def word_budget(source_words: int, tc: Optional[float] = DEFAULT_TC, max_words: Optional[int] = None) -> int:
    """Absolute word budget: ``max_words`` when given, else ``floor(tc * source_words)``."""
    if max_words is not None:
        if max_words < 0:
            raise ValueError("max_words must be >= 0")
        return int(max_words)
    if tc is None or not 0 < tc <= 1:
        raise ValueError(f"compression rate must lie in (0, 1], got {tc!r}")
    # the epsilon guards products like 0.07 * 1000 = 70.00000000000001 -> 70
    return int(math.floor(tc * source_words + 1e-9))


def remove_redundant(candidates: Sequence[Unit], dice_threshold: float = DEFAULT_DICE) -> list[Unit]:
    """Drop every candidate whose Dice coefficient with an already kept one
    reaches ``dice_threshold``; candidates are scanned in the given order."""
    if not 0 < dice_threshold <= 1:
        raise ValueError("dice_threshold must lie in (0, 1]")
    kept: list[Unit] = []
    for cand in candidates:
        stems = cand.sentence.stem_set
        if not stems:
            continue
        if all(dice(stems, k.sentence.stem_set) < dice_threshold for k in kept):
            kept.append(cand)
    return kept


def fill_budget(ranked: Iterable[Unit], budget: int) -> list[Unit]:
    """Greedy knapsack pass: take candidates in priority order while they fit.

    When ``budget > 0`` and not even the first candidate fits, that single
    candidate is returned on its own.
    """
    ranked = list(ranked)
    if budget <= 0 or not ranked:
        return []
    chosen, used = [], 0
    for u in ranked:
        w = u.sentence.raw_word_count
        if used + w <= budget:
            chosen.append(u)
            used += w
    if not chosen:
        chosen = [ranked[0]]
    return chosen


def make_summary(
    chosen: Iterable[Unit], budget: int, source_words: int, algorithm: str, texts=None
) -> Summary:
    """Assemble a :class:`Summary` in source order.  ``texts`` optionally maps
    a unit key to replacement output text (post-processing)."""
    ordered = sorted(chosen, key=lambda u: u.key)
    entries = []
    for u in ordered:
        text = u.sentence.original_text if texts is None else texts.get(u.key, u.sentence.original_text)
        words = u.sentence.raw_word_count if texts is None else len(text.split())
        entries.append(SummaryEntry(u.doc_position, u.doc_id, u.sentence.index, text, words))
    return Summary(
        entries=tuple(entries),
        budget=budget,
        source_words=source_words,
        algorithm=algorithm,
        status="ok" if entries else "empty",
    )
