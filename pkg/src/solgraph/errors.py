"""Exception taxonomy; each class carries the CLI exit code for its failure class."""


class SolgraphError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class SchemaError(SolgraphError):
    """Malformed input file, bad field, or unusable argument combination."""

    exit_code = 2


class ArgumentError(SchemaError):
    """A value is syntactically fine but violates an operation's precondition."""


class UnboundParameterError(ArgumentError):
    """A coefficient references a parameter with no binding."""


class OrderConflictError(ArgumentError):
    """Second-order analysis requested while the first-order graph is nonzero."""


class UnsupportedTransformError(ArgumentError):
    """A model transformation's structural precondition does not hold."""


class EmbeddingError(SchemaError):
    """An embedding is inconsistent with itself or with the model it is applied to."""


class NumericalError(SolgraphError):
    """An iterative numerical procedure failed to meet its tolerance."""

    exit_code = 3


class DegenerateIntermediateError(NumericalError):
    """A second-order intermediate state sits at (or within tol of) the ground energy."""


class CapacityError(SolgraphError):
    """Problem size exceeds a hard resource cap."""

    exit_code = 4
