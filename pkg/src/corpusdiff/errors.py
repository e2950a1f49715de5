"""Exception hierarchy shared across the package.

Every error raised on a documented failure path derives from
:class:`CorpusDiffError` so callers (and the CLI) can catch one type.
"""

from __future__ import annotations


class CorpusDiffError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CorpusDiffError):
    """An input file is malformed; the message names the file and position."""


class MetadataConflictError(CorpusDiffError):
    """Speaker metadata contains contradictory records for one speaker."""


class EmptyCorpusError(CorpusDiffError):
    """An operation that requires documents received none."""


class LexiconFormatError(ParseError):
    """A lexicon file violates the percent-delimited dictionary format."""


class InsufficientDataError(CorpusDiffError):
    """A statistical routine received too few observations for its method."""


class DegenerateDataError(CorpusDiffError):
    """Input data is degenerate for the requested statistic (e.g. constant)."""


class SingularMatrixError(CorpusDiffError):
    """A covariance or cross-product matrix is singular or not positive definite."""


class ConfigError(CorpusDiffError):
    """A run configuration is malformed, has unknown keys, or bad values."""


class MissingArtifactError(CorpusDiffError):
    """A pipeline stage requires an artifact another stage has not produced."""
