"""Exception types shared across the package."""


class LsclustError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(LsclustError):
    """Operand shapes are incompatible."""


class IsolatedVertexError(LsclustError):
    """A vertex with zero degree was found where positive degree is required."""

    def __init__(self, vertex: int, message: str | None = None):
        self.vertex = vertex
        super().__init__(message or f"vertex {vertex} has zero degree")


class RankDeficientError(LsclustError):
    """A matrix expected to have full column rank is numerically singular."""


class EmptySeedError(LsclustError):
    """A seed set that must be non-empty is empty."""


class EmptyOmegaError(LsclustError):
    """The candidate set is empty or too small to prune."""


class SeedConsumedError(LsclustError):
    """All seeds of a cluster were removed by earlier extractions."""

    def __init__(self, cluster: int, message: str | None = None):
        self.cluster = cluster
        super().__init__(message or f"all seeds of cluster {cluster} were consumed")


class AmbiguousIdentityError(LsclustError):
    """A seed set spans more than one ground-truth block."""


class UndefinedMetricError(LsclustError):
    """A metric is undefined for the given inputs (e.g. empty reference set)."""


class ParseError(LsclustError):
    """A data file could not be parsed."""

    def __init__(self, message: str, path=None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where = f" ({where})"
        super().__init__(f"{message}{where}")


class ClusteringWarning(UserWarning):
    """Non-fatal irregularity during extraction (dropped seed, zero degree, ...)."""
