"""Exception hierarchy.

Every error raised by the library derives from :class:`DebtflowError`, which is
itself a ``ValueError`` so callers validating user input can catch either.
:class:`ModelConditionError` marks failures of the model rather than of the
input (infeasible programs, solver breakdown); the CLI maps those to exit
code 3.
"""


class DebtflowError(ValueError):
    pass


# core
class InvalidGrid(DebtflowError):
    pass


class NegativeFraction(DebtflowError):
    pass


class SumFarFromOne(DebtflowError):
    pass


class UnknownTenor(DebtflowError):
    pass


class EmptyCurve(DebtflowError):
    pass


class InvalidWindow(DebtflowError):
    pass


class InvalidAssumption(DebtflowError):
    pass


# simulator
class HorizonTooLarge(DebtflowError):
    pass


class ZeroStock(DebtflowError):
    pass


# frontier / optimizer
class RiskOutOfRange(DebtflowError):
    pass


class ModelConditionError(DebtflowError):
    pass


class RiskBelowLongestTenor(ModelConditionError):
    pass


class Infeasible(ModelConditionError):
    pass


class Unbounded(ModelConditionError):
    pass


class SolverError(ModelConditionError):
    pass


# ingestion
class InvalidRecord(DebtflowError):
    pass


class EmptyWindow(DebtflowError):
    pass


class AllExcluded(DebtflowError):
    pass


class ZeroTotalFlow(DebtflowError):
    pass


class NegativeFlow(DebtflowError):
    pass
