"""Sentence segmentation, tokenization, stopword filtering, stemming and the
sentence-by-word count matrix consumed by every summarizer.

Language resources (stopword and abbreviation lists) are plain UTF-8 files,
one lowercase entry per line, ``#`` starting a comment.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import ConfigurationError, DegenerateInputError

LANGUAGES = ("pt", "fr", "en", "es")

# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    surface: str
    stem: str
    position: int


@dataclass(frozen=True)
class Sentence:
    """One sentence of a document.

    ``tokens`` are the stopword-filtered, stemmed content words.
    ``raw_word_count`` is the budget unit: the number of whitespace-delimited
    words of ``original_text``, raised to the number of word tokens when
    punctuation inside a word (``l'avion``, ``20h/21h``) yields more tokens.
    """

    index: int
    original_text: str
    tokens: tuple[Token, ...] = ()
    raw_word_count: int = 0

    @property
    def stems(self) -> tuple[str, ...]:
        return tuple(t.stem for t in self.tokens)

    @property
    def stem_set(self) -> frozenset[str]:
        return frozenset(t.stem for t in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Document:
    id: str
    sentences: tuple[Sentence, ...]
    title: Optional[Sentence] = None

    def __post_init__(self):
        for i, s in enumerate(self.sentences):
            if s.index != i:
                raise ValueError(
                    f"document {self.id!r}: sentence indices must be contiguous from 0 "
                    f"(position {i} has index {s.index})"
                )

    @property
    def word_count(self) -> int:
        return sum(s.raw_word_count for s in self.sentences)

    def __len__(self) -> int:
        return len(self.sentences)


@dataclass(frozen=True)
class Cluster:
    id: str
    documents: tuple[Document, ...]

    def __post_init__(self):
        if not self.documents:
            raise ValueError(f"cluster {self.id!r} has no documents")

    @property
    def word_count(self) -> int:
        return sum(d.word_count for d in self.documents)

    def sentences(self) -> list[tuple[int, Sentence]]:
        """All sentences as ``(document position, sentence)`` in processing order."""
        return [(k, s) for k, d in enumerate(self.documents) for s in d.sentences]


@dataclass(frozen=True)
class Vocabulary:
    word_to_column: Mapping[str, int]

    @property
    def size(self) -> int:
        return len(self.word_to_column)

    def __contains__(self, word: str) -> bool:
        return word in self.word_to_column

    def __getitem__(self, word: str) -> int:
        return self.word_to_column[word]


@dataclass(frozen=True)
class BagOfWords:
    matrix: np.ndarray
    vocabulary: Vocabulary
    n_s: int = field(init=False)

    def __post_init__(self):
        self.matrix.setflags(write=False)
        object.__setattr__(self, "n_s", int(self.matrix.shape[0]))

    @property
    def n_p(self) -> int:
        return self.vocabulary.size


# ---------------------------------------------------------------------------
# Language resources
# ---------------------------------------------------------------------------


def read_word_list(path: Union[str, Path]) -> frozenset[str]:
    """Parse a word-list file: one lowercase entry per line, ``#`` comments."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read word list {path}: {exc.strerror}") from exc
    return _parse_word_list(text)


def _parse_word_list(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            words.add(line)
    return frozenset(words)


@lru_cache(maxsize=None)
def _bundled_list(kind: str, language: str) -> frozenset[str]:
    if language not in LANGUAGES:
        raise ConfigurationError(
            f"unsupported language {language!r}; expected one of {', '.join(LANGUAGES)}"
        )
    res = resources.files("divsum") / "data" / kind / f"{language}.txt"
    return _parse_word_list(res.read_text(encoding="utf-8"))


def load_stopwords(language: str = "pt", path: Union[str, Path, None] = None) -> frozenset[str]:
    if path is not None:
        return read_word_list(path)
    return _bundled_list("stopwords", language)


def load_abbreviations(language: str = "pt", path: Union[str, Path, None] = None) -> frozenset[str]:
    if path is not None:
        return read_word_list(path)
    return _bundled_list("abbreviations", language)


# ---------------------------------------------------------------------------
# Segmentation
# ---------------------------------------------------------------------------

_PARAGRAPH = re.compile(r"\n\s*\n")
_TERMINAL = re.compile(r"(?:\.\.\.|[.!?…])+[\"'”’»)\]]*(?=\s)")
_OPENERS = "\"'“‘«([¿¡-–—"
_INITIAL = re.compile(r"\w\.", re.UNICODE)


def _starts_sentence(rest: str) -> bool:
    stripped = rest.lstrip()
    if not stripped:
        return False
    head = stripped.lstrip(_OPENERS)
    if not head:
        return False
    return head[0].isupper() or head[0].isdigit()


def segment_sentences(raw: str, abbreviations: Iterable[str] = ()) -> list[str]:
    """Split ``raw`` into sentence strings.

    A boundary is terminal punctuation (``. ! ? …``, optionally followed by
    closing quotes/brackets) followed by whitespace and a token starting with
    an uppercase letter or a digit.  Words in ``abbreviations`` (lowercase,
    period included) and single-letter initials never close a sentence.
    Blank lines always separate sentences.
    """
    abbrevs = frozenset(a.lower() for a in abbreviations)
    out: list[str] = []
    for para in _PARAGRAPH.split(raw):
        start = 0
        for m in _TERMINAL.finditer(para):
            end = m.end()
            if not _starts_sentence(para[end:]):
                continue
            words = para[start:end].split()
            if not words:
                continue
            last = words[-1].lower().lstrip(_OPENERS)
            last = last.rstrip("\"'”’»)]")
            if last in abbrevs or _INITIAL.fullmatch(last):
                continue
            piece = para[start:end].strip()
            if piece:
                out.append(piece)
            start = end
        tail = para[start:].strip()
        if tail:
            out.append(tail)
    return out


# ---------------------------------------------------------------------------
# Stemming
# ---------------------------------------------------------------------------

_SUFFIXES = {
    "pt": (
        "amentos imentos amento imento mente idades idade acoes icoes acao icao "
        "ancias encias ancia encia adoras adores adora ador istas ista ismos ismo "
        "aveis iveis avel ivel osos osas oso osa icos icas ico ica ados adas ado ada "
        "idos idas ido ida ando endo indo aram eram iram arem erem irem avam ava "
        "iar ear ar er ir ou eu iu am em ia io es os as a e o s"
    ),
    "fr": (
        "issements issement ements ement ations ation ateurs ateur atrices atrice "
        "ances ance ences ence ites ite ables able ismes isme istes iste euses euse "
        "eux ives ive ifs if aient ait ais ant ants ante antes ions ees ee es er ez "
        "ir ie ies e s x"
    ),
    "en": (
        "ational tional izations ization ations ation nesses ness ments ment ings ing "
        "edly ied ies ed ly ers er est ful es s"
    ),
    "es": (
        "amientos imientos amiento imiento aciones acion adoras adores ador mente "
        "idades idad ancias ancia encias encia ismos ismo istas ista ables able ibles "
        "ible osos osas oso osa icos icas ico ica ados adas ado ada idos idas ido ida "
        "ando iendo ar er ir es os as a e o s"
    ),
}


def strip_accents(word: str) -> str:
    decomposed = unicodedata.normalize("NFKD", word)
    return "".join(c for c in decomposed if not unicodedata.combining(c))


class Stemmer:
    """Callable mapping a surface word to its lowercase stem."""

    name = "abstract"

    def __call__(self, word: str) -> str:  # pragma: no cover - interface
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


class IdentityStemmer(Stemmer):
    name = "identity"

    def __call__(self, word: str) -> str:
        return word.lower()


class LightSuffixStemmer(Stemmer):
    """Accent-folding suffix stripper.

    The word is lowercased and stripped of diacritics, then the longest
    listed suffix is removed repeatedly until none applies or the stem would
    drop below ``min_stem`` characters.  Iterating to a fixpoint makes the
    stemmer idempotent.  Words made only of digits are returned unchanged.
    """

    def __init__(self, language: str, min_stem: int = 3):
        if language not in _SUFFIXES:
            raise ConfigurationError(f"no suffix list for language {language!r}")
        self.language = language
        self.min_stem = min_stem
        self.name = f"light-{language}"
        self._suffixes = tuple(sorted(_SUFFIXES[language].split(), key=len, reverse=True))
        self._cache: dict[str, str] = {}

    def __call__(self, word: str) -> str:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        stem = strip_accents(word.lower())
        if not any(c.isdigit() for c in stem):
            changed = True
            while changed:
                changed = False
                for suffix in self._suffixes:
                    if stem.endswith(suffix) and len(stem) - len(suffix) >= self.min_stem:
                        stem = stem[: -len(suffix)]
                        changed = True
                        break
        self._cache[word] = stem
        return stem


StemmerLike = Union[str, Stemmer, Callable[[str], str]]


def get_stemmer(stemmer: StemmerLike, language: str = "pt") -> Callable[[str], str]:
    """Resolve a stemmer id (``identity``, ``light``, ``light-<lang>``) or pass a callable through."""
    if callable(stemmer):
        return stemmer
    if stemmer == "identity":
        return IdentityStemmer()
    if stemmer == "light":
        return _light(language)
    if isinstance(stemmer, str) and stemmer.startswith("light-"):
        return _light(stemmer[len("light-"):])
    raise ConfigurationError(
        f"unknown stemmer {stemmer!r}; expected 'identity', 'light' or 'light-<lang>'"
    )


@lru_cache(maxsize=None)
def _light(language: str) -> LightSuffixStemmer:
    return LightSuffixStemmer(language)


# ---------------------------------------------------------------------------
# Tokenization
# ---------------------------------------------------------------------------

_WORD = re.compile(r"[^\W_]+(?:-[^\W_]+)*")


def word_tokens(text: str) -> list[str]:
    """Unicode word tokens; intra-word hyphens are kept (``sexta-feira``)."""
    return _WORD.findall(text)


def tokenize_filter_stem(
    sentence_text: str,
    stopwords: Iterable[str] = frozenset(),
    stemmer: StemmerLike = "identity",
    language: str = "pt",
) -> list[Token]:
    """Tokenize, drop stopwords (by lowercase surface or by stem) and stem.

    ``Token.position`` is the index among all word tokens of the sentence,
    before filtering.
    """
    stem_fn = get_stemmer(stemmer, language)
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else frozenset(stopwords)
    out = []
    for pos, surface in enumerate(word_tokens(sentence_text)):
        lower = surface.lower()
        if lower in stop:
            continue
        stem = stem_fn(surface)
        if not stem or stem in stop:
            continue
        out.append(Token(surface=surface, stem=stem, position=pos))
    return out


def make_sentence(
    index: int,
    text: str,
    stopwords: Iterable[str] = frozenset(),
    stemmer: StemmerLike = "identity",
    language: str = "pt",
) -> Sentence:
    tokens = tokenize_filter_stem(text, stopwords, stemmer, language)
    n_words = max(len(text.split()), len(word_tokens(text)))
    return Sentence(index=index, original_text=text, tokens=tuple(tokens), raw_word_count=n_words)


# ---------------------------------------------------------------------------
# Bag of words
# ---------------------------------------------------------------------------


def build_bag_of_words(sentences: Sequence[Sentence]) -> BagOfWords:
    """Count matrix ``S[i, j]`` = occurrences of stem ``j`` in sentence ``i``.

    Columns follow first occurrence order.
    """
    if len(sentences) == 0:
        raise DegenerateInputError("cannot build a bag of words from zero sentences")
    columns: dict[str, int] = {}
    for s in sentences:
        for stem in s.stems:
            columns.setdefault(stem, len(columns))
    if not columns:
        raise DegenerateInputError("every sentence is empty after stopword filtering")
    matrix = np.zeros((len(sentences), len(columns)), dtype=np.int64)
    for i, s in enumerate(sentences):
        for stem in s.stems:
            matrix[i, columns[stem]] += 1
    return BagOfWords(matrix=matrix, vocabulary=Vocabulary(dict(columns)))


# ---------------------------------------------------------------------------
# Estimator front end
# ---------------------------------------------------------------------------


class TextPreprocessor(TransformerMixin, BaseEstimator):
    """Turn raw UTF-8 texts into :class:`Document` objects.

    Parameters
    ----------
    language : str
        Selects the bundled stopword/abbreviation lists and the light stemmer.
    stemmer : str or callable
        ``"light"`` (default), ``"identity"``, ``"light-<lang>"`` or any
        ``str -> str`` callable.
    stopwords, abbreviations : path, iterable or None
        Override the bundled lists.  A path is read as a word-list file.
    title : bool
        Treat the first line of each text as its title.
    line_breaks : bool
        Also end sentences at every line break (one utterance per line, as in
        call transcripts).
    """

    def __init__(
        self,
        language="pt",
        stemmer="light",
        stopwords=None,
        abbreviations=None,
        title=False,
        line_breaks=False,
    ):
        self.language = language
        self.stemmer = stemmer
        self.stopwords = stopwords
        self.abbreviations = abbreviations
        self.title = title
        self.line_breaks = line_breaks

    def _resources(self):
        stop = _word_list(self.stopwords, "stopwords", self.language)
        abbr = _word_list(self.abbreviations, "abbreviations", self.language)
        stem = get_stemmer(self.stemmer, self.language)
        return stop, abbr, stem

    def fit(self, X=None, y=None):
        self._resources()
        return self

    def make_document(self, raw: str, doc_id: str = "doc") -> Document:
        stop, abbr, stem = self._resources()
        title = None
        body = raw
        if self.title:
            first, _, body = raw.lstrip("\n").partition("\n")
            if first.strip():
                title = make_sentence(-1, first.strip(), stop, stem, self.language)
        if self.line_breaks:
            texts = [s for line in body.splitlines() for s in segment_sentences(line, abbr)]
        else:
            texts = segment_sentences(body, abbr)
        sentences = tuple(make_sentence(i, t, stop, stem, self.language) for i, t in enumerate(texts))
        return Document(id=doc_id, sentences=sentences, title=title)

    def make_cluster(self, raws: Sequence[str], cluster_id: str = "cluster", doc_ids=None) -> Cluster:
        ids = list(doc_ids) if doc_ids is not None else [f"T{k + 1}" for k in range(len(raws))]
        return Cluster(cluster_id, tuple(self.make_document(r, i) for r, i in zip(raws, ids)))

    def transform(self, X):
        if isinstance(X, str):
            raise TypeError("expected an iterable of texts, got a single string")
        return [self.make_document(raw, f"doc{k}") for k, raw in enumerate(X)]


def _word_list(spec, kind: str, language: str) -> frozenset[str]:
    if spec is None:
        return _bundled_list(kind, language)
    if isinstance(spec, (str, Path)):
        return read_word_list(spec)
    return frozenset(w.lower() for w in spec)
