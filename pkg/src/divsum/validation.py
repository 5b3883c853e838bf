"""Input validation helpers used by the estimators (the ``check_array`` of
this package)."""

from __future__ import annotations

from numbers import Integral, Real
from typing import Union

from .exceptions import ConfigurationError, DegenerateInputError
from .textprep import Cluster, Document, TextPreprocessor

TextInput = Union[str, Document, Cluster]


def check_text_input(X, preprocessor: TextPreprocessor, allow_cluster: bool = True) -> Union[Document, Cluster]:
    """Coerce raw text, a :class:`Document`, a :class:`Cluster` or a list of
    raw texts (read as a cluster) into a Document/Cluster."""
    if isinstance(X, str):
        X = preprocessor.make_document(X)
    elif isinstance(X, (list, tuple)) and X and all(isinstance(t, str) for t in X):
        X = preprocessor.make_cluster(X)
    elif isinstance(X, (list, tuple)) and X and all(isinstance(t, Document) for t in X):
        X = Cluster("cluster", tuple(X))
    if isinstance(X, Cluster):
        if not allow_cluster:
            raise TypeError("this estimator summarizes single documents only")
        if len(X.documents) == 1:
            X = X.documents[0]
    if not isinstance(X, (Document, Cluster)):
        raise TypeError(f"expected raw text, Document or Cluster, got {type(X).__name__}")
    if isinstance(X, Document):
        empty = not any(s.tokens for s in X.sentences)
    else:
        empty = not any(s.tokens for d in X.documents for s in d.sentences)
    if empty:
        raise DegenerateInputError("input has no content words after filtering")
    return X


def check_unit_interval(name: str, value, *, closed_left=False, closed_right=True) -> float:
    if not isinstance(value, Real):
        raise ConfigurationError(f"{name} must be a real number, got {value!r}")
    lo_ok = value >= 0 if closed_left else value > 0
    hi_ok = value <= 1 if closed_right else value < 1
    if not (lo_ok and hi_ok):
        lo = "[" if closed_left else "("
        hi = "]" if closed_right else ")"
        raise ConfigurationError(f"{name} must lie in {lo}0, 1{hi}, got {value!r}")
    return float(value)


def check_positive(name: str, value) -> float:
    if not isinstance(value, Real) or not value > 0:
        raise ConfigurationError(f"{name} must be a positive number, got {value!r}")
    return float(value)


def check_budget(tc, max_words) -> None:
    if max_words is not None:
        if not isinstance(max_words, Integral) or max_words < 0:
            raise ConfigurationError(f"max_words must be a non-negative integer, got {max_words!r}")
        return
    check_unit_interval("tc", tc)
