"""Exception taxonomy shared by the core package, the service, and the CLI.

Every error carries a short machine-parsable ``category`` that the CLI puts
in front of its single-line error output (``error: <category>: <detail>``)
and the service returns in its JSON error body.
"""


class FusevalError(Exception):
    """Base class for all data and configuration errors raised by fuseval."""

    category = "error"


class IngestionError(FusevalError):
    """A label or prediction file violates the file format or its invariants."""

    category = "ingestion"


class AlignmentError(FusevalError):
    """Prediction sets do not cover exactly the labeled sample set."""

    category = "alignment"


class FusionError(FusevalError):
    """Invalid fusion configuration, weights, or per-sample score vectors."""

    category = "fusion"


class SimulationError(FusevalError):
    """A simulation spec is invalid or its error layout is infeasible."""

    category = "simulation"


class ServiceError(FusevalError):
    """An error reported by a fuseval service endpoint."""

    def __init__(self, category: str, detail: str):
        super().__init__(detail)
        self.category = category
