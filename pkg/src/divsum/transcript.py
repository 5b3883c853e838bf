"""Speech-transcript summarization: RAG over cleaned transcripts plus a
rule-driven post-processing of the emitted sentences.

Rule files are plain text, one rule per line, ``#`` starts a comment::

    DROP euh                  # delete the word (case-insensitive)
    DROP pff*                 # ``*`` matches any run of characters
    SUB ouais => oui          # rewrite a word sequence
    DATES on                  # spelled-out dates -> dd/mm/yyyy (post-processing)

A substitution may not produce more words than its pattern, and its
replacement may not itself match a substitution pattern.  Both rules keep
the rewriting terminating and the output never longer than the input.
"""

from __future__ import annotations

import fnmatch
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence, Union

from .exceptions import ConfigurationError, CorpusError
from .graphsum import D_FRASE, KEEP_FRACTION, RagSummarizer, rag_select
from .simdiv import DEFAULT_GAMMA
from .summary import DEFAULT_DICE, Summary, make_summary, word_budget
from .textprep import Document, TextPreprocessor
from .validation import check_text_input

TRANSCRIPT_TC = 0.07

_EDGE_PUNCT = "\"'«»“”‘’()[]{}"
_TRAIL_PUNCT = ".,;:!?…"


@dataclass(frozen=True)
class SubRule:
    pattern: tuple[str, ...]
    replacement: tuple[str, ...]


@dataclass(frozen=True)
class RewriteRuleSet:
    filler_patterns: tuple[tuple[str, ...], ...] = ()
    substitutions: tuple[SubRule, ...] = ()
    date_normalization: bool = False

    def __post_init__(self):
        for rule in self.substitutions:
            if not rule.pattern:
                raise ConfigurationError("empty substitution pattern")
            if len(rule.replacement) > len(rule.pattern):
                raise ConfigurationError(
                    f"substitution {' '.join(rule.pattern)!r} => {' '.join(rule.replacement)!r} "
                    "would lengthen the text"
                )
            for other in self.substitutions:
                if _find(rule.replacement, other.pattern) is not None:
                    raise ConfigurationError(
                        f"replacement {' '.join(rule.replacement)!r} matches the pattern "
                        f"{' '.join(other.pattern)!r}; rewriting would not settle"
                    )
        if any(not p for p in self.filler_patterns):
            raise ConfigurationError("empty DROP pattern")

    @property
    def filler_words(self) -> frozenset[str]:
        """Single-word, wildcard-free fillers (the ones a token scan can check)."""
        return frozenset(p[0] for p in self.filler_patterns if len(p) == 1 and "*" not in p[0])

    def is_filler(self, word: str) -> bool:
        key = _key(word)
        return any(len(p) == 1 and fnmatch.fnmatchcase(key, p[0]) for p in self.filler_patterns)

    @classmethod
    def empty(cls) -> "RewriteRuleSet":
        return cls()


def parse_rules(text: str) -> RewriteRuleSet:
    drops, subs, dates = [], [], False
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        verb, _, rest = line.partition(" ")
        verb, rest = verb.upper(), rest.strip()
        if verb == "DROP" and rest:
            drops.append(tuple(_key(w) for w in rest.split()))
        elif verb == "SUB" and "=>" in rest:
            lhs, rhs = (side.split() for side in rest.split("=>", 1))
            subs.append(SubRule(tuple(_key(w) for w in lhs), tuple(rhs)))
        elif verb == "DATES" and rest.lower() in ("on", "off"):
            dates = rest.lower() == "on"
        else:
            raise ConfigurationError(f"rule line {lineno}: cannot parse {line!r}")
    return RewriteRuleSet(tuple(drops), tuple(subs), dates)


def load_rules(language: str = "fr", path: Union[str, Path, None] = None) -> RewriteRuleSet:
    """Parse ``path``, or the bundled rule file for ``language``."""
    if path is not None:
        try:
            return parse_rules(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise CorpusError(f"cannot read rule file {path}: {exc}") from exc
    res = resources.files("divsum") / "data" / "rules" / f"{language}.txt"
    if not res.is_file():
        raise ConfigurationError(f"no bundled rule file for language {language!r}; pass one explicitly")
    return parse_rules(res.read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Word-level rewriting
# ---------------------------------------------------------------------------


def _key(word: str) -> str:
    return unicodedata.normalize("NFC", word.strip(_EDGE_PUNCT + _TRAIL_PUNCT)).lower()


def _trailing(word: str) -> str:
    core = word.rstrip(_TRAIL_PUNCT + _EDGE_PUNCT)
    return "".join(c for c in word[len(core):] if c in _TRAIL_PUNCT)


def _matches(words: Sequence[str], start: int, pattern: Sequence[str]) -> bool:
    if start + len(pattern) > len(words):
        return False
    return all(fnmatch.fnmatchcase(_key(w), p) for w, p in zip(words[start:], pattern))


def _find(words: Sequence[str], pattern: Sequence[str]) -> Optional[int]:
    for i in range(len(words) - len(pattern) + 1):
        if _matches(words, i, pattern):
            return i
    return None


def _carry(out: list[str], punct: str) -> None:
    # keep the sentence punctuation of a removed word on the previous one
    if punct and out and not out[-1].endswith(punct):
        out[-1] = out[-1].rstrip(_TRAIL_PUNCT) + punct


def _apply_subs(words: list[str], rules: RewriteRuleSet) -> list[str]:
    for rule in rules.substitutions:
        out, i = [], 0
        while i < len(words):
            if _matches(words, i, rule.pattern):
                punct = _trailing(words[i + len(rule.pattern) - 1])
                repl = list(rule.replacement)
                if repl:
                    if words[i][:1].isupper():
                        repl[0] = repl[0][:1].upper() + repl[0][1:]
                    repl[-1] += punct
                    out.extend(repl)
                else:
                    _carry(out, punct)
                i += len(rule.pattern)
            else:
                out.append(words[i])
                i += 1
        words = out
    return words


def _apply_drops(words: list[str], rules: RewriteRuleSet) -> list[str]:
    out, i = [], 0
    while i < len(words):
        hit = next((p for p in rules.filler_patterns if _matches(words, i, p)), None)
        if hit is None:
            out.append(words[i])
            i += 1
        else:
            _carry(out, _trailing(words[i + len(hit) - 1]))
            i += len(hit)
    return out


def collapse_repeats(words: Sequence[str]) -> list[str]:
    """Collapse runs of the same word ("le le ticket" -> "le ticket")."""
    out: list[str] = []
    for w in words:
        if out and _key(w) and _key(w) == _key(out[-1]):
            out[-1] = out[-1].rstrip(_TRAIL_PUNCT) + _trailing(w) if _trailing(w) else out[-1]
            continue
        out.append(w)
    return out


# ---------------------------------------------------------------------------
# French spelled-out dates
# ---------------------------------------------------------------------------

_MONTHS = {
    m: i + 1
    for i, m in enumerate(
        "janvier fevrier mars avril mai juin juillet aout septembre octobre novembre decembre".split()
    )
}
_UNITS = {
    "zero": 0, "un": 1, "une": 1, "deux": 2, "trois": 3, "quatre": 4, "cinq": 5, "six": 6, "sept": 7,
    "huit": 8, "neuf": 9, "dix": 10, "onze": 11, "douze": 12, "treize": 13, "quatorze": 14,
    "quinze": 15, "seize": 16, "vingt": 20, "vingts": 20, "trente": 30, "quarante": 40,
    "cinquante": 50, "soixante": 60,
}  # fmt: skip
_SCALE = {"cent": 100, "cents": 100, "mille": 1000, "mil": 1000}


def _fold(word: str) -> str:
    nfkd = unicodedata.normalize("NFKD", _key(word))
    return "".join(c for c in nfkd if not unicodedata.combining(c))


def _number_atoms(word: str) -> Optional[list[str]]:
    parts = [p for p in _fold(word).split("-") if p]
    if parts and all(p in _UNITS or p in _SCALE or p == "et" for p in parts):
        return parts
    return None


def parse_french_number(atoms: Sequence[str]) -> Optional[int]:
    """Value of a spelled-out French number given as atoms
    (``["quatre", "vingt", "dix", "neuf"]`` -> 99)."""
    total, current, prev = 0, 0, None
    for a in atoms:
        if a == "et":
            continue
        if a in ("cent", "cents"):
            current = max(current, 1) * 100
        elif a in ("mille", "mil"):
            total += max(current, 1) * 1000
            current = 0
        elif a in ("vingt", "vingts") and prev == "quatre":
            current += 80 - 4
        elif a in _UNITS:
            current += _UNITS[a]
        else:
            return None
        prev = a
    return total + current if atoms else None


def _read_number(words: Sequence[str], i: int, max_words: int = 8) -> tuple[Optional[int], int]:
    """Longest number starting at ``words[i]``: digits or spelled out.
    Returns ``(value, words consumed)``."""
    if i >= len(words):
        return None, 0
    key = _fold(words[i])
    if key.isdigit():
        return int(key), 1
    if key in ("premier", "1er"):
        return 1, 1
    atoms, n = [], 0
    while i + n < len(words) and n < max_words:
        parts = _number_atoms(words[i + n])
        if parts is None:
            break
        atoms.extend(parts)
        n += 1
        if _trailing(words[i + n - 1]):
            break
    if not n:
        return None, 0
    return parse_french_number(atoms), n


def normalize_dates(words: Sequence[str]) -> list[str]:
    """Rewrite ``[le] <day> <month> [<year>]`` as ``dd/mm/yyyy`` (or ``dd/mm``)."""
    out, i = [], 0
    words = list(words)
    while i < len(words):
        j = i + 1 if _fold(words[i]) == "le" else i
        day, nd = _read_number(words, j, max_words=3)
        m = j + nd
        if day is not None and 1 <= day <= 31 and m < len(words) and _fold(words[m]) in _MONTHS:
            month = _MONTHS[_fold(words[m])]
            end = m + 1
            text = f"{day:02d}/{month:02d}"
            if not _trailing(words[m]):
                year, ny = _read_number(words, end)
                if year is not None and 1000 <= year <= 2999:
                    text += f"/{year:04d}"
                    end += ny
            out.append(text + _trailing(words[end - 1]))
            i = end
        else:
            out.append(words[i])
            i += 1
    return out


# ---------------------------------------------------------------------------
# Cleaning passes
# ---------------------------------------------------------------------------


def _rewrite(text: str, rules: RewriteRuleSet, dates: bool) -> str:
    def one_pass(words):
        words = _apply_subs(words, rules)
        words = _apply_drops(words, rules)
        words = collapse_repeats(words)
        if dates:
            words = collapse_repeats(normalize_dates(words))
        return words

    words = text.split()
    # every pass keeps or shrinks the word list and substitutions cannot
    # feed each other, so this settles quickly; the fixpoint is what makes
    # the rewrite idempotent
    for _ in range(len(words) + 1):
        nxt = one_pass(words)
        if nxt == words:
            break
        words = nxt
    out = " ".join(words)
    if text[:1].isupper() and out[:1].islower():
        out = out[0].upper() + out[1:]
    return out


def clean_transcript(raw: str, rules: RewriteRuleSet) -> str:
    """Apply substitutions, delete fillers and collapse repeated words, line
    by line (line breaks are kept)."""
    return "\n".join(_rewrite(line, rules, dates=False) for line in raw.splitlines())


def postprocess_summary(summary_text: str, rules: RewriteRuleSet) -> str:
    """Cleaning rules plus date normalization when the rule set enables it."""
    return "\n".join(_rewrite(line, rules, rules.date_normalization) for line in summary_text.splitlines())


def lia_rag_summarize(
    raw: str,
    rules: RewriteRuleSet,
    preprocessor: Optional[TextPreprocessor] = None,
    d_frase: float = D_FRASE,
    gamma: float = DEFAULT_GAMMA,
    keep_fraction: float = KEEP_FRACTION,
    dice_threshold: float = DEFAULT_DICE,
    tc: Optional[float] = TRANSCRIPT_TC,
    max_words: Optional[int] = None,
    doc_id: str = "transcript",
) -> Summary:
    """Clean, run RAG, post-process the chosen sentences.

    The budget is taken on the raw transcript's word count.
    """
    if preprocessor is None:
        preprocessor = TextPreprocessor(language="fr", line_breaks=True)
    source_words = len(raw.split())
    budget = word_budget(source_words, tc, max_words)
    doc = check_text_input(preprocessor.make_document(clean_transcript(raw, rules), doc_id), preprocessor, False)
    chosen = rag_select(doc, budget, d_frase, gamma, keep_fraction, dice_threshold)
    texts = {u.key: postprocess_summary(u.sentence.original_text, rules) for u in chosen}
    return make_summary(chosen, budget, source_words, "lia-rag", texts=texts)


class LiaRagSummarizer(RagSummarizer):
    """RAG for call transcripts (one utterance per line, French defaults).

    ``rules`` is a :class:`RewriteRuleSet`, a rule-file path, or ``None`` for
    the bundled rules of ``language``.
    """

    _allow_cluster = False

    def __init__(
        self,
        rules=None,
        d_frase=D_FRASE,
        keep_fraction=KEEP_FRACTION,
        gamma=DEFAULT_GAMMA,
        dice_threshold=DEFAULT_DICE,
        tc=TRANSCRIPT_TC,
        max_words=None,
        language="fr",
        stemmer="light",
    ):
        super().__init__(
            d_frase=d_frase,
            keep_fraction=keep_fraction,
            gamma=gamma,
            dice_threshold=dice_threshold,
            tc=tc,
            max_words=max_words,
            language=language,
            stemmer=stemmer,
        )
        self.rules = rules

    def _preprocessor(self) -> TextPreprocessor:
        return TextPreprocessor(language=self.language, stemmer=self.stemmer, line_breaks=True)

    def rule_set(self) -> RewriteRuleSet:
        if isinstance(self.rules, RewriteRuleSet):
            return self.rules
        return load_rules(self.language, self.rules)

    def _check_params(self):
        super()._check_params()
        self.rule_set()

    def summarize(self, X) -> Summary:
        self._check_params()
        if isinstance(X, Document):
            raw = "\n".join(s.original_text for s in X.sentences)
        elif isinstance(X, str):
            raw = X
        else:
            raise TypeError(f"expected a transcript string or Document, got {type(X).__name__}")
        return lia_rag_summarize(
            raw,
            self.rule_set(),
            self._preprocessor(),
            self.d_frase,
            self.gamma,
            self.keep_fraction,
            self.dice_threshold,
            self.tc,
            self.max_words,
        )
