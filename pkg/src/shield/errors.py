"""Exception types raised across the pipeline.

Usage/configuration problems map to CLI exit code 1, data problems to 2.
"""


class ShieldError(Exception):
    """Base class for all pipeline errors."""


class DataError(ShieldError):
    """Problem with input data (exit code 2)."""


class UsageError(ShieldError):
    """Problem with configuration or invocation (exit code 1)."""


class DuplicateTerm(DataError):
    def __init__(self, term: str):
        super().__init__(f"duplicate preferred term: {term!r}")
        self.term = term


class InvalidCount(DataError):
    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        where = ""
        if row is not None:
            where += f" (row {row}"
            where += f", column {column!r})" if column is not None else ")"
        super().__init__(message + where)
        self.row = row
        self.column = column


class SchemaError(DataError):
    pass


class EmptyTable(DataError):
    pass


class MissingEmbedding(DataError):
    def __init__(self, terms: list[str]):
        super().__init__(
            "no embedding for %d term(s): %s" % (len(terms), ", ".join(sorted(terms)))
        )
        self.terms = list(terms)


class InvalidVector(DataError):
    pass


class NotApplicable(UsageError):
    pass


class InsufficientData(DataError):
    pass


class InvalidArgument(UsageError):
    pass


class EmptyGraph(DataError):
    pass


class ConfigError(UsageError):
    pass


class InternalError(ShieldError):
    pass
