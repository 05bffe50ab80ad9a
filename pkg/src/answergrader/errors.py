"""Exception hierarchy shared by every stage of the grader."""


class GradingError(Exception):
    """Base class for all errors raised by answergrader."""


class ConfigError(GradingError):
    pass


# -- reference side -------------------------------------------------------


class ReferenceLookupError(GradingError):
    """Anything that prevents obtaining a usable reference answer."""


class UnextractableQuestion(ReferenceLookupError):
    pass


class NoPageFound(ReferenceLookupError):
    pass


class NetworkError(ReferenceLookupError):
    pass


class MalformedResponse(ReferenceLookupError):
    pass


class UnknownQuestion(ReferenceLookupError):
    pass


class CorruptStore(ReferenceLookupError):
    pass


class EmptyReference(ReferenceLookupError):
    pass


# -- student / linguistic side ----------------------------------------------


class EmptyStudentAnswer(GradingError):
    pass


class EmptyAnswer(GradingError):
    """Raised when an answer has no words or no sentences to score."""


class MisconfiguredChecker(GradingError):
    pass


class GrammarServiceUnavailable(GradingError):
    pass


# -- harness ------------------------------------------------------------------


class EmptyBatch(GradingError):
    pass


class CorpusMismatch(GradingError):
    pass
