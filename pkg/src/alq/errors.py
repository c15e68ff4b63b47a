"""Shared exception types, mapped to CLI exit codes in alq.cli."""


class UsageError(Exception):
    """Bad arguments or malformed input files (exit code 2)."""


class NetworkError(Exception):
    """Remote fetch failed after retries (exit code 3)."""


class DataIntegrityError(Exception):
    """Stored or fetched data violates an invariant (exit code 4)."""


class MissingDataError(DataIntegrityError):
    """A required level is absent from cache/fixtures while offline."""


class BadReductionError(UsageError):
    """Point counting requested at a prime dividing the level."""
