class SgiError(Exception):
    """Base class for every error raised by the SGI toolkit."""


class GraphError(SgiError, ValueError):
    """Invalid graph construction or an unknown node/edge id."""


class FeatureError(SgiError, ValueError):
    """Feature schema misuse (wrong level, incompatible vectors)."""


class MatchingError(SgiError):
    """Query construction or MCS search cannot produce a usable query."""


class EvaluationError(SgiError, ValueError):
    pass


class BenchmarkError(SgiError, ValueError):
    """Benchmark configuration is infeasible."""


class ConfigError(SgiError):
    """
    Run configuration or input file problem.

    The CLI maps this to exit status 1.
    """
