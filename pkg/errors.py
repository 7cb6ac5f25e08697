"""
Distance-domination error hierarchy.

All library-level exceptions inherit from DistDomError, which provides:
- message: technical detail (for logs)
- user_message: short string (for CLI stderr)
- recoverable: whether retrying with other inputs/budget could succeed
- exit_code: process exit code the CLI maps this error to
"""


class DistDomError(Exception):
    """Base exception for all distance-domination errors."""

    exit_code = 2

    def __init__(self, message: str, user_message: str, recoverable: bool = False):
        self.message = message
        self.user_message = user_message
        self.recoverable = recoverable
        super().__init__(message)


# --- Input errors ---


class EdgeListParseError(DistDomError):
    """Malformed edge-list text."""

    def __init__(self, line_number: int, reason: str):
        self.line_number = line_number
        self.reason = reason
        super().__init__(
            message=f"Edge list line {line_number}: {reason}",
            user_message=f"Could not parse edge list (line {line_number}): {reason}",
        )


class GraphInvariantError(DistDomError):
    """Adjacency lists violate simplicity, symmetry or index range."""

    def __init__(self, message: str):
        super().__init__(message=message, user_message=f"Invalid graph: {message}")


class NotBipartiteError(DistDomError):
    """An odd cycle exists; `vertex` lies on one."""

    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(
            message=f"Graph is not bipartite: odd cycle through vertex {vertex}",
            user_message=f"Graph is not bipartite (odd cycle through vertex {vertex}).",
        )


class DisconnectedGraphError(DistDomError):
    """Domination and bounds need a connected graph."""

    def __init__(self, component_count: int):
        self.component_count = component_count
        super().__init__(
            message=f"Graph has {component_count} connected components; expected 1",
            user_message=f"Graph must be connected ({component_count} components found).",
        )


class IsolatedVertexError(DistDomError):
    """Minimum degree is undefined for the bound formulas."""

    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(
            message=f"Vertex {vertex} is isolated; side minimum degree would be 0",
            user_message=f"Vertex {vertex} has no neighbors.",
        )


class InvalidProfileError(DistDomError):
    """(n1, n2, delta1, delta2, k) outside the admissible range."""

    def __init__(self, message: str):
        super().__init__(message=message, user_message=f"Invalid profile: {message}")


class DimensionMismatchError(DistDomError):
    """Probability vector length differs from the vertex count."""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(
            message=f"Probability vector has {actual} entries, graph has {expected} vertices",
            user_message=f"Expected {expected} probabilities, got {actual}.",
        )


class InvalidProbabilityError(DistDomError):
    """Probability outside [0, 1]."""

    def __init__(self, value: float):
        self.value = value
        super().__init__(
            message=f"Probability {value!r} outside [0, 1]",
            user_message=f"Probabilities must lie in [0, 1] (got {value!r}).",
        )


class GenSpecError(DistDomError):
    """Unknown family or malformed generator parameters."""

    def __init__(self, message: str):
        super().__init__(message=message, user_message=f"Bad generator spec: {message}")


class InfeasibleDegreeError(GenSpecError):
    """Minimum-degree demand cannot be met by any bipartite graph on the parts."""

    def __init__(self, side: int, demand: int, available: int):
        self.side = side
        self.demand = demand
        self.available = available
        DistDomError.__init__(
            self,
            message=(
                f"Side {side} needs degree >= {demand} but the other side "
                f"has only {available} vertices"
            ),
            user_message=f"Degree demand {demand} on side {side} exceeds {available}.",
        )


class ConfigError(DistDomError):
    """Bad configuration value (YAML or environment)."""

    def __init__(self, message: str):
        super().__init__(message=message, user_message=f"Configuration error: {message}")


# --- Search budget ---


class BudgetExhaustedError(DistDomError):
    """Exact search exceeded its node budget before proving optimality."""

    exit_code = 3

    def __init__(self, node_budget: int, nodes: int, lower_bound: int, upper_bound: int):
        self.node_budget = node_budget
        self.nodes = nodes
        self.lower_bound = lower_bound
        self.upper_bound = upper_bound
        super().__init__(
            message=(
                f"Exact search budget exhausted after {nodes} nodes "
                f"(budget {node_budget}); gamma in [{lower_bound}, {upper_bound}]"
            ),
            user_message=(
                f"Search budget of {node_budget} nodes exhausted. "
                f"Best bounds: {lower_bound} <= gamma <= {upper_bound}."
            ),
            recoverable=True,
        )


# --- Bound formula errors ---


class PreconditionError(DistDomError):
    """An operation or closed form was requested outside its hypotheses."""

    def __init__(self, message: str):
        super().__init__(message=message, user_message=message)


class DegenerateProfileError(PreconditionError):
    """delta1 * delta2 = 1 makes the ceil(k/6) closed-form denominators vanish."""

    def __init__(self, delta1: int, delta2: int):
        self.delta1 = delta1
        self.delta2 = delta2
        DistDomError.__init__(
            self,
            message=f"delta1*delta2 - 1 = 0 for delta1={delta1}, delta2={delta2}",
            user_message="Profile is degenerate (delta1 * delta2 = 1).",
        )


class SingularSystemError(PreconditionError):
    """(A11+1)(A22+1) - A12*A21 = 0: the stationary system has no unique solution."""

    def __init__(self, coefficients: tuple[int, int, int, int]):
        self.coefficients = coefficients
        DistDomError.__init__(
            self,
            message=f"Stationary system is singular for A = {coefficients}",
            user_message="Odd-k stationary system is singular for this profile.",
        )


class CorollaryInapplicableError(PreconditionError):
    """Stationary point is infeasible; use numeric_min_h_star instead."""

    def __init__(self, reason: str):
        self.reason = reason
        DistDomError.__init__(
            self,
            message=f"Closed-form odd-k minimum does not apply: {reason}",
            user_message=f"Closed-form minimum not applicable ({reason}); use the numeric minimizer.",
        )


class BoundConsistencyError(DistDomError):
    """Two independent computations of the same quantity disagree."""

    def __init__(self, quantity: str, first: float, second: float):
        self.quantity = quantity
        self.first = first
        self.second = second
        super().__init__(
            message=f"Inconsistent {quantity}: {first!r} vs {second!r}",
            user_message=f"Internal cross-check failed for {quantity}.",
        )
