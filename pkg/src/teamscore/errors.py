"""Exception hierarchy shared by the library and the CLI."""


class TeamScoreError(ValueError):
    """Base class for all validation errors raised by teamscore."""


class LengthMismatch(TeamScoreError):
    pass


class NegativeValue(TeamScoreError):
    pass


class NonPositiveMass(TeamScoreError):
    pass


class MassExceedsOne(TeamScoreError):
    pass


class InvalidParams(TeamScoreError):
    pass


class InvalidAlpha(TeamScoreError):
    pass


class InvalidH(InvalidParams):
    pass


class UnknownCandidate(TeamScoreError, KeyError):
    pass


class IndexOutOfRange(TeamScoreError, IndexError):
    pass


class BudgetExceeded(TeamScoreError):
    pass


class EmptyUniverse(TeamScoreError):
    pass
