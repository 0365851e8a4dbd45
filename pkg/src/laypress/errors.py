"""Exception types shared across the package.

Every raisable condition named by a module contract gets its own class so
callers can catch precisely; all inherit from LaypressError.
"""


class LaypressError(Exception):
    """Base class for all package errors."""


# text processing
class InvalidToken(LaypressError):
    pass


# corpus
class MissingField(LaypressError):
    def __init__(self, field, line_no):
        super().__init__(f"missing field {field!r} at line {line_no}")
        self.field = field
        self.line_no = line_no


class DuplicateId(LaypressError):
    pass


class MalformedRecord(LaypressError):
    def __init__(self, line_no, reason):
        super().__init__(f"malformed record at line {line_no}: {reason}")
        self.line_no = line_no


class EmptyAbstract(LaypressError):
    pass


class NoSections(LaypressError):
    pass


class EmptyCorpus(LaypressError):
    pass


class MissingReferences(LaypressError):
    pass


# metrics
class EmptyText(LaypressError):
    pass


class EmptyCandidate(LaypressError):
    pass


# gateway
class GatewayError(LaypressError):
    pass


class ReplayMiss(GatewayError):
    def __init__(self, digest):
        super().__init__(f"no recorded response for request {digest}")
        self.digest = digest


class TransientBackendError(GatewayError):
    """Timeout or 5xx that survived the retry policy."""


class BackendRefused(GatewayError):
    """HTTP 4xx; never retried."""

    def __init__(self, status, detail=""):
        super().__init__(f"backend refused request ({status}): {detail}")
        self.status = status


# pipeline
class EmptyArticle(LaypressError):
    pass


class MissingAnswers(LaypressError):
    pass


class UnparseableAnswers(LaypressError):
    pass


# judge panel
class EmptyList(LaypressError):
    pass


class AmbiguousVerdict(LaypressError):
    pass


class NoVerdict(LaypressError):
    pass


class NoVerdicts(LaypressError):
    pass


class UnresolvableTie(LaypressError):
    pass


class EmptyResults(LaypressError):
    pass


# agreement
class NoOverlap(LaypressError):
    pass


class TooFewRaters(LaypressError):
    pass


class IncompleteMapping(LaypressError):
    def __init__(self, category):
        super().__init__(f"mapping does not cover category {category!r}")
        self.category = category


# eval service
class NoAnnotators(LaypressError):
    pass


class IndivisiblePlan(LaypressError):
    pass


class UnknownTask(LaypressError):
    pass


class AlreadyDone(LaypressError):
    pass


class BadToken(LaypressError):
    pass


class IncompletePanel(LaypressError):
    pass


class NoReviews(LaypressError):
    pass


class NothingToReport(LaypressError):
    pass


# cli
class ConfigError(LaypressError):
    pass
