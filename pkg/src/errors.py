"""Error hierarchy shared by every TSPE module.

Every error carries ``code`` (its class name), which the CLI prints next to
the message so a failed run can be categorised from its last line.
"""


class TSPEError(Exception):
    """Base class for all errors raised by the toolkit."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    @property
    def code(self) -> str:
        return type(self).__name__

    def __str__(self) -> str:
        return self.message


class ConfigError(TSPEError):
    """A configuration file failed to parse or validate."""


class UnknownDataset(TSPEError):
    """The dataset id is not registered in the taxonomy."""


class BackendUnavailable(TSPEError):
    """The remote generation endpoint could not be reached."""


class GenerationExhausted(TSPEError):
    """The retry cap was hit before enough valid items were produced."""


class UnboundSlot(TSPEError):
    """A template slot has no binding at render time."""


class InsufficientCandidates(TSPEError):
    """Fewer candidates survive the Deny rules than the requested K."""


class ReviewAborted(TSPEError):
    """The reviewer quit an interactive curation session."""


class BackendLoadError(TSPEError):
    """An encoder checkpoint is missing, corrupt or its runtime is not installed."""


class EncodeError(TSPEError):
    """The encoder failed while computing embeddings."""


class AudioDecodeError(TSPEError):
    """An audio clip could not be read or decoded."""


class CacheMismatch(TSPEError):
    """An embedding cache file belongs to a different backend or dimension."""


class ZeroVector(TSPEError):
    """An averaged embedding has (numerically) zero length."""


class DimensionMismatch(TSPEError):
    """Embeddings of different dimensions were compared."""


class ManifestError(TSPEError):
    """A dataset manifest is malformed, references unknown labels or missing clips."""


class CategoryMismatch(TSPEError):
    """The prompt set does not belong to the dataset's task category."""


class MismatchedRuns(TSPEError):
    """Two reports that should describe the same dataset and backend do not."""


class RunDirLocked(TSPEError):
    """Another evaluation process owns the run directory."""
