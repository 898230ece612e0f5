"""Exception types shared across the toolkit."""


class TextcatError(Exception):
    """Base class for all toolkit errors."""


class CorpusError(TextcatError):
    """Malformed or inconsistent corpus data."""


class LexiconError(TextcatError):
    """Lexicon construction or lookup failure."""


class DimensionMismatch(TextcatError):
    """Two vectors (or a vector and a model) disagree on dimensionality."""


class DegenerateModelError(TextcatError):
    """Training cannot produce a usable hyperplane from the given rows."""


class CalibrationError(TextcatError):
    """Sigmoid fitting is impossible on the given scores."""


class BundleFormatError(TextcatError):
    """A model bundle file is corrupt, truncated, or from an unknown version."""


class CurationError(TextcatError):
    """Invalid relabeling request."""


class EvaluationError(TextcatError):
    """Metrics requested on inputs that cannot support them."""


class ConfigError(TextcatError):
    """Invalid pipeline configuration value."""
