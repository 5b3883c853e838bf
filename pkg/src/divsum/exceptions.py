"""Exception hierarchy shared by every divsum module."""


class DivsumError(Exception):
    """Base class for all toolkit errors."""


class ConfigurationError(DivsumError, ValueError):
    """Invalid parameter, unknown stemmer/language, bad rule file, missing resource."""


class CorpusError(DivsumError, OSError):
    """Unreadable or malformed input corpus."""


class DegenerateInputError(DivsumError, ValueError):
    """Input that leaves nothing to work with (e.g. every sentence empty after filtering)."""


class UndefinedInputError(DivsumError, ValueError):
    """A measure evaluated where it is mathematically undefined (e.g. cosine of an empty set)."""


class UndefinedMetricError(DivsumError, ValueError):
    """An evaluation metric whose denominator vanishes (e.g. references without n-grams)."""
