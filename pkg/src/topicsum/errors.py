"""Exception types shared across the package."""


class TopicSumError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(TopicSumError):
    """A parameter or config file value is invalid."""


class EmptyCorpusError(TopicSumError):
    """An ingested or processed corpus contains no usable documents."""


class EmptyVocabularyError(TopicSumError):
    """Frequency filtering removed every token from the dictionary."""


class IntegrityError(TopicSumError):
    """An internal consistency check failed (duplicate or missing data)."""


class PipelineError(TopicSumError):
    """A pipeline stage failed fatally; carries the stage name."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"stage '{stage}': {message}")
        self.stage = stage
