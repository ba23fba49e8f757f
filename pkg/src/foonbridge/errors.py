"""Exception types shared across the toolkit."""

from __future__ import annotations


class FoonError(Exception):
    """Base class for all toolkit errors."""


class FoonSyntaxError(FoonError):
    """A malformed record in a FOON text document."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class FoonStructureError(FoonError):
    """A structurally incomplete functional unit (missing motion or terminator)."""


class StreamError(FoonError):
    """A detection stream violated its contract (bad record, time going backwards)."""


class UnresolvedUnit(FoonError):
    """A recognized-unit reference does not resolve in the loaded FOON."""


class BrokerError(FoonError):
    """Base class for context-broker client failures."""


class BrokerUnreachable(BrokerError):
    """The broker could not be reached after all retry attempts."""

    def __init__(self, url: str, attempts: int, cause: Exception | None = None):
        super().__init__(f"broker unreachable at {url} after {attempts} attempts: {cause}")
        self.url = url
        self.attempts = attempts
        self.cause = cause


class BrokerRejected(BrokerError):
    """The broker answered with a non-retryable error status."""

    def __init__(self, status: int, body: str = ""):
        super().__init__(f"broker rejected request with status {status}: {body[:200]}")
        self.status = status
        self.body = body


class PartialPublish(BrokerError):
    """Some entities of a publish call were stored before a later one failed."""

    def __init__(self, succeeded: list[str], failed: list[tuple[str, Exception]]):
        failed_ids = ", ".join(entity_id for entity_id, _ in failed)
        super().__init__(
            f"published {len(succeeded)} entities before failing on: {failed_ids}"
        )
        self.succeeded = succeeded
        self.failed = failed
