"""Summary evaluation: ROUGE-N, ROUGE-SU and the reference-free FRESA.

Texts are compared on stem sequences, one per sentence, so n-grams and
skip-bigrams never cross a sentence boundary.  Raw strings are run through a
:class:`~divsum.textprep.TextPreprocessor` first (stemming and stopword
removal on by default).
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .exceptions import UndefinedMetricError
from .simdiv import DEFAULT_GAMMA
from .textprep import Document, Sentence, TextPreprocessor

EvalText = Union[str, Document, Sequence[Sequence[str]]]

DEFAULT_MAX_GAP = 4
LN2 = math.log(2)


def as_sequences(x: EvalText, preprocessor: Optional[TextPreprocessor] = None) -> list[tuple[str, ...]]:
    """Stem sequences (one per sentence) of a text, Document or token lists."""
    if isinstance(x, str):
        x = (preprocessor or TextPreprocessor()).make_document(x)
    if isinstance(x, Document):
        return [s.stems for s in x.sentences]
    seqs = []
    for item in x:
        if isinstance(item, str):
            raise TypeError("expected token sequences, got a flat string list; wrap it in another list")
        seqs.append(item.stems if isinstance(item, Sentence) else tuple(item))
    return seqs


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------


def ngram_counts(tokens: Sequence, n: int) -> Counter:
    """Sliding-window n-gram counts of one token sequence."""
    if n < 1:
        raise ValueError("n must be >= 1")
    tokens = tuple(tokens)
    return Counter(tokens[i : i + n] for i in range(len(tokens) - n + 1))


def ngram_bag(sequences: Iterable[Sequence], n: int) -> Counter:
    bag: Counter = Counter()
    for seq in sequences:
        bag.update(ngram_counts(seq, n))
    return bag


def skip_bigrams(tokens: Sequence, max_gap: Optional[int] = None) -> Counter:
    """Ordered pairs ``(t_i, t_j)``, ``i < j``, with ``j - i <= max_gap + 1``
    (no limit when ``max_gap`` is None)."""
    if max_gap is not None and max_gap < 0:
        raise ValueError("max_gap must be >= 0 or None")
    tokens = tuple(tokens)
    n = len(tokens)
    span = n if max_gap is None else max_gap + 1
    bag: Counter = Counter()
    for i in range(n):
        for j in range(i + 1, min(n, i + span + 1)):
            bag[(tokens[i], tokens[j])] += 1
    return bag


def skip_bigram_bag(sequences: Iterable[Sequence], max_gap: Optional[int] = DEFAULT_MAX_GAP) -> Counter:
    bag: Counter = Counter()
    for seq in sequences:
        bag.update(skip_bigrams(seq, max_gap))
    return bag


def _overlap(a: Counter, b: Counter) -> int:
    return sum(min(c, b[k]) for k, c in a.items() if k in b)


# ---------------------------------------------------------------------------
# ROUGE
# ---------------------------------------------------------------------------


def _references(references) -> list:
    if isinstance(references, (str, Document)):
        return [references]
    refs = list(references)
    if refs and not isinstance(refs[0], (str, Document)) and refs[0] and isinstance(refs[0][0], str):
        return [refs]  # one reference given as token sequences
    if not refs:
        raise UndefinedMetricError("at least one reference is needed")
    return refs


def rouge_n(candidate: EvalText, references, n: int = 1, preprocessor=None) -> float:
    """Clipped n-gram recall summed over all references."""
    references = _references(references)
    cand = ngram_bag(as_sequences(candidate, preprocessor), n)
    matched = total = 0
    for ref in references:
        bag = ngram_bag(as_sequences(ref, preprocessor), n)
        matched += _overlap(bag, cand)
        total += sum(bag.values())
    if total == 0:
        raise UndefinedMetricError(f"references contain no {n}-grams")
    return matched / total


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f: float


def f_measure(precision: float, recall: float, beta: float = 1.0) -> float:
    if precision == 0 or recall == 0:
        return 0.0
    b2 = beta * beta
    return (1 + b2) * recall * precision / (recall + b2 * precision)


def rouge_su(
    candidate: EvalText,
    references: Union[EvalText, Sequence[EvalText]],
    beta: float = 1.0,
    max_gap: Optional[int] = DEFAULT_MAX_GAP,
    unigrams: bool = True,
    preprocessor=None,
) -> PRF:
    """Skip-bigram precision/recall/F, with unigram counts added when
    ``unigrams`` (ROUGE-SU; plain ROUGE-S otherwise).

    Several references: the one giving the highest F is reported.
    """
    refs = _references(references)
    cseq = as_sequences(candidate, preprocessor)
    cbag = skip_bigram_bag(cseq, max_gap)
    if unigrams:
        cbag = cbag + ngram_bag(cseq, 1)
    best = None
    for ref in refs:
        rseq = as_sequences(ref, preprocessor)
        rbag = skip_bigram_bag(rseq, max_gap)
        if unigrams:
            rbag = rbag + ngram_bag(rseq, 1)
        hits = _overlap(cbag, rbag)
        ctot, rtot = sum(cbag.values()), sum(rbag.values())
        pr = hits / ctot if ctot else 0.0
        cb = hits / rtot if rtot else 0.0
        score = PRF(pr, cb, f_measure(pr, cb, beta))
        if best is None or score.f > best.f:
            best = score
    return best


@dataclass(frozen=True)
class RougeScores:
    rouge_1: float
    rouge_2: float
    rouge_su: PRF
    beta: float = 1.0


def rouge_scores(candidate, references, beta=1.0, max_gap=DEFAULT_MAX_GAP, preprocessor=None) -> RougeScores:
    return RougeScores(
        rouge_n(candidate, references, 1, preprocessor),
        rouge_n(candidate, references, 2, preprocessor),
        rouge_su(candidate, references, beta, max_gap, True, preprocessor),
        beta,
    )


# ---------------------------------------------------------------------------
# FRESA
# ---------------------------------------------------------------------------


def fresa_divergence(summary: Counter, source: Counter, gamma: float = DEFAULT_GAMMA) -> float:
    """JS divergence between the source distribution ``P`` and the summary
    distribution ``Q``.  A source atom missing from the summary gets
    ``Q = (F_doc + gamma) / (N_P + gamma * beta)``, with ``N_P`` the atoms of
    both texts and ``beta = 1.5 * |vocabulary of both|``."""
    doc_total = sum(source.values())
    res_total = sum(summary.values())
    if doc_total == 0:
        raise UndefinedMetricError("source text has no atoms of this order")
    if res_total == 0:
        return LN2
    n_p = doc_total + res_total
    beta = 1.5 * len(source.keys() | summary.keys())
    terms = []
    for w in source.keys() | summary.keys():
        p = source.get(w, 0) / doc_total
        if w in summary:
            q = summary[w] / res_total
        else:
            q = (source[w] + gamma) / (n_p + gamma * beta)
        m = p + q
        if p > 0:
            terms.append(p * math.log(2 * p / m))
        if q > 0:
            terms.append(q * math.log(2 * q / m))
    return 0.5 * math.fsum(terms)


@dataclass(frozen=True)
class FresaScores:
    """Raw divergences (lower is better).  ``complement`` maps each to
    ``1 - D`` so that higher is better."""

    fresa_1: float
    fresa_2: float
    fresa_su4: float
    empty_summary: bool = False

    @property
    def combined(self) -> float:
        return (self.fresa_1 + self.fresa_2 + self.fresa_su4) / 3

    @property
    def complement(self) -> dict:
        return {k: 1.0 - v for k, v in self.as_dict().items()}

    def as_dict(self) -> dict:
        return {
            "fresa_1": self.fresa_1,
            "fresa_2": self.fresa_2,
            "fresa_su4": self.fresa_su4,
            "combined": self.combined,
        }


def fresa(summary: EvalText, source: EvalText, gamma: float = DEFAULT_GAMMA, preprocessor=None) -> FresaScores:
    sseq = as_sequences(summary, preprocessor)
    dseq = as_sequences(source, preprocessor)
    if not any(dseq):
        raise UndefinedMetricError("source text has no content words")
    empty = not any(sseq)
    if empty:
        return FresaScores(LN2, LN2, LN2, empty_summary=True)
    scores = []
    for bag in (lambda s: ngram_bag(s, 1), lambda s: ngram_bag(s, 2), lambda s: skip_bigram_bag(s, 4)):
        src = bag(dseq)
        scores.append(fresa_divergence(bag(sseq), src, gamma) if src else 0.0)
    return FresaScores(*scores)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _fmt(v: float) -> str:
    return f"{v:.5f}"


@dataclass
class EvalRow:
    candidate: str
    rouge: Optional[RougeScores] = None
    fresa: Optional[FresaScores] = None
    notes: list = field(default_factory=list)

    def flat(self) -> dict:
        row = {"candidate": self.candidate}
        if self.rouge is not None:
            row.update(
                rouge_1=_fmt(self.rouge.rouge_1),
                rouge_2=_fmt(self.rouge.rouge_2),
                rouge_su_p=_fmt(self.rouge.rouge_su.precision),
                rouge_su_r=_fmt(self.rouge.rouge_su.recall),
                rouge_su_f=_fmt(self.rouge.rouge_su.f),
            )
        if self.fresa is not None:
            for k, v in self.fresa.as_dict().items():
                row[k] = _fmt(v)
                row[k + "_complement"] = _fmt(1.0 - v)
            row["empty_summary"] = str(self.fresa.empty_summary).lower()
        if self.notes:
            row["notes"] = "; ".join(self.notes)
        return row


@dataclass
class EvalReport:
    rows: list
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> str:
        out = {"metadata": self.metadata, "candidates": {}}
        for r in self.rows:
            entry = {}
            if r.rouge is not None:
                entry["rouge"] = {
                    "rouge_1": _fmt(r.rouge.rouge_1),
                    "rouge_2": _fmt(r.rouge.rouge_2),
                    "rouge_su": {k: _fmt(v) for k, v in asdict(r.rouge.rouge_su).items()},
                    "beta": r.rouge.beta,
                }
            if r.fresa is not None:
                entry["fresa"] = {
                    "divergence": {k: _fmt(v) for k, v in r.fresa.as_dict().items()},
                    "complement": {k: _fmt(v) for k, v in r.fresa.complement.items()},
                    "empty_summary": r.fresa.empty_summary,
                }
            if r.notes:
                entry["notes"] = list(r.notes)
            out["candidates"][r.candidate] = entry
        return json.dumps(out, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        flat = [r.flat() for r in self.rows]
        cols: list = []
        for row in flat:
            cols.extend(k for k in row if k not in cols)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        return buf.getvalue()


def checksum(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
