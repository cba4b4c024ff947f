"""
Exception and warning hierarchy for wasserstein_eigendist.

Every error raised by the package derives from EigendistError so callers can catch
the whole family at once. Errors keep the facts needed for a diagnostic (row index,
witness triple, offending pair, ...) as attributes next to the readable message.
"""

from typing import Optional, Tuple


class EigendistError(Exception):
    """Base class for all package errors."""


# Warnings

class LazinessWarning(UserWarning):
    """The chain does not satisfy min_x P(x,x) > 1/2; non-degeneracy is not guaranteed."""


class ParameterWarning(UserWarning):
    """Parameters are valid but outside the range where a closed form is claimed."""


# Validation

class ValidationError(EigendistError):
    """Malformed chain, metric, partition or generator parameters."""


class NotSquare(ValidationError):
    def __init__(self, shape: Tuple[int, ...]):
        self.shape = tuple(shape)
        super().__init__(f"Expected a square matrix, got shape {self.shape}")


class NegativeEntry(ValidationError):
    def __init__(self, row: int, col: int, value: float):
        self.row, self.col, self.value = row, col, value
        super().__init__(f"Negative entry {value!r} at ({row}, {col})")


class RowSumViolation(ValidationError):
    def __init__(self, row: int, deviation: float):
        self.row = row
        self.deviation = deviation
        super().__init__(f"Row {row} sums to 1{deviation:+.3e}")


class AsymmetryError(ValidationError):
    def __init__(self, x: int, y: int, difference: float):
        self.x, self.y, self.difference = x, y, difference
        super().__init__(f"d({x},{y}) and d({y},{x}) differ by {difference:.3e}")


class NonzeroDiagonal(ValidationError):
    def __init__(self, x: int, value: float):
        self.x, self.value = x, value
        super().__init__(f"d({x},{x}) = {value!r} is not zero")


class TriangleViolation(ValidationError):
    def __init__(self, witness: Tuple[int, int, int], excess: float):
        self.witness = tuple(witness)
        self.excess = excess
        x, z, y = self.witness
        super().__init__(
            f"d({x},{y}) exceeds d({x},{z}) + d({z},{y}) by {excess:.3e} (witness {self.witness})"
        )


class ParameterRange(ValidationError):
    """A generator parameter lies outside its admissible range."""


class OddTorus(ParameterRange):
    def __init__(self, L: int):
        self.L = L
        super().__init__(f"Parity metric needs an even torus, got L={L}")


class SizeCap(ParameterRange):
    def __init__(self, n: int, cap: int):
        self.n, self.cap = n, cap
        super().__init__(f"n={n} exceeds the size cap {cap}")


class UnreachableAbsorber(ValidationError):
    def __init__(self, states):
        self.states = list(states)
        super().__init__(f"States {self.states} cannot reach the absorbing sets")


class InvalidPartition(ValidationError):
    """Blocks are empty, overlapping or do not cover the state space."""


# Transport solver

class SolverError(EigendistError):
    """Failures of the transportation solver."""


class NumericalFailure(SolverError):
    def __init__(self, message: str, iterations: Optional[int] = None):
        self.iterations = iterations
        super().__init__(message)


class PairSolveError(SolverError):
    """A transport solve failed while evaluating W_p on a specific pair of states."""

    def __init__(self, pair: Tuple[int, int], cause: Exception):
        self.pair = tuple(pair)
        self.cause = cause
        super().__init__(f"Transport solve failed for pair {self.pair}: {cause}")


# Eigendistance iteration

class EigendistanceError(EigendistError):
    """Failures of the fixed-point computations."""


class DegenerateInput(EigendistanceError):
    """A metric vanishes on every pair the reference charges."""


class DegenerateLimit(EigendistanceError):
    def __init__(self, iteration: int, scale: float):
        self.iteration, self.scale = iteration, scale
        super().__init__(
            f"Iteration collapsed to zero at step {iteration} (lambda={scale:.3e}); "
            "the chain is likely degenerate in the sense of the laziness criterion"
        )


class InvalidReference(EigendistanceError):
    """The reference metric does not dominate the init or is not a supersolution of W_p."""


class MonotonicityViolation(EigendistanceError):
    def __init__(self, iteration: int, pair: Tuple[int, int], increase: float):
        self.iteration, self.pair, self.increase = iteration, tuple(pair), increase
        super().__init__(
            f"Iterate increased by {increase:.3e} at pair {self.pair} on step {iteration}"
        )


class NotAnEigenfunction(EigendistanceError):
    """h is negative somewhere, identically zero, or P h != lambda h."""


class SandwichViolation(EigendistanceError):
    def __init__(self, iteration: int, pair: Tuple[int, int], gap: float):
        self.iteration, self.pair, self.gap = iteration, tuple(pair), gap
        super().__init__(
            f"Iterate left the eigenfunction bracket by {gap:.3e} at pair {self.pair} on step {iteration}"
        )


class ZeroSetViolation(EigendistanceError):
    def __init__(self, pair: Tuple[int, int], value: float):
        self.pair, self.value = tuple(pair), value
        super().__init__(f"W_p(rho) = {value:.3e} on pair {self.pair} where rho vanishes")


class VerificationFailure(EigendistanceError):
    def __init__(self, residual: float, tolerance: float):
        self.residual, self.tolerance = residual, tolerance
        super().__init__(f"Eigenrelation residual {residual:.3e} exceeds {tolerance:.1e}")


# Couplings

class CouplingError(EigendistError):
    """Failures while building or checking a coupling operator."""


class EigenrelationViolation(CouplingError):
    def __init__(self, pair: Tuple[int, int], miss: float):
        self.pair, self.miss = tuple(pair), miss
        super().__init__(f"Coupling misses the eigenrelation by {miss:.3e} at pair {self.pair}")


class MarginalViolation(CouplingError):
    def __init__(self, pair: Tuple[int, int], deviation: float):
        self.pair, self.deviation = tuple(pair), deviation
        super().__init__(f"Kernel at pair {self.pair} has marginal deviation {deviation:.3e}")


# Structure

class StructureError(EigendistError):
    """Failures of the lumpability tools."""


class NotLumpable(StructureError):
    def __init__(self, block: int, deviation: float):
        self.block, self.deviation = block, deviation
        super().__init__(f"Partition is not lumpable: block {block} rows differ by {deviation:.3e}")


class BudgetExceeded(StructureError):
    def __init__(self, n: int, cap: int):
        self.n, self.cap = n, cap
        super().__init__(f"Exhaustive partition search is capped at n={cap}, chain has n={n}")


# Concentration

class ConcentrationError(EigendistError):
    """Failures of the concentration bounds."""


class DivergentTail(ConcentrationError):
    def __init__(self, remainder: float):
        self.remainder = remainder
        super().__init__(f"Series remainder {remainder:.3e} is too large for a useful bound")
