# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

from fractions import Fraction


EXIT_SUCCESS = 0
EXIT_USAGE = 1
EXIT_PRECONDITION = 2
EXIT_FINDING = 3
EXIT_BUDGET = 4


class MiningGameError(Exception):
    """Base of every error raised by the package.

    The exit code of the class is what the command line reports when the
    error reaches it. Keyword arguments are kept as context for reports.
    """

    exit_code = EXIT_USAGE

    def __init__(self, msg, **context):
        self._context = context
        super().__init__(msg)

    @property
    def context(self):
        return self._context


class UsageError(MiningGameError):
    exit_code = EXIT_USAGE


class ScenarioError(UsageError):

    def __init__(self, msg, path=None, **context):
        self.path = path
        if path:
            msg = "{}: {}".format(path, msg)
        super().__init__(msg, path=path, **context)


class PreconditionError(MiningGameError):
    exit_code = EXIT_PRECONDITION


class NotApplicableError(PreconditionError):
    pass


class AssumptionError(PreconditionError):

    def __init__(self, msg, report=None, **context):
        self.report = report
        super().__init__(msg, **context)


class PotentialLengthError(PreconditionError):
    pass


class NotSymmetricError(PreconditionError):
    pass


class InvariantViolation(MiningGameError):
    """A run contradicted a property that the model guarantees.

    This is a finding about the instance, not a crash. The report of the
    failing run travels with the exception.
    """

    exit_code = EXIT_FINDING

    def __init__(self, msg, report=None, **context):
        self.report = report
        super().__init__(msg, **context)


class ProtocolViolation(InvariantViolation):
    pass


class BudgetExceeded(MiningGameError):

    exit_code = EXIT_BUDGET

    def __init__(self, msg, required=None, budget=None, **context):
        self.required = required
        self.budget = budget
        super().__init__(msg, required=required, budget=budget, **context)


class _Infinity():
    """The +inf member of the extended rationals.

    Compares strictly greater than every Fraction and equal only to
    itself. Fraction comparisons fall back to the reflected methods here.
    """

    __instance = None

    @staticmethod
    def getInstance():
        if _Infinity.__instance is None:
            _Infinity()
        return _Infinity.__instance

    def __init__(self):
        if _Infinity.__instance is not None:
            raise Exception("_Infinity is a singleton class. Use _Infinity.getInstance()")
        _Infinity.__instance = self

    def __eq__(self, other):
        return other is self

    def __ne__(self, other):
        return other is not self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __hash__(self):
        return hash("+inf")

    def __reduce__(self):
        return (_Infinity.getInstance, ())

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"


INFINITY = _Infinity.getInstance()


def format_rational(value):
    """Text form used in reports: "n" for integers, "n/d" otherwise, "inf" for +inf."""
    if value is INFINITY:
        return str(INFINITY)
    return str(Fraction(value))


def format_configuration(game, s):
    return "<" + ",".join(game.coins[c].id for c in s) + ">"