"""
Exception hierarchy shared by every linecheck module
"""


class LinecheckError(Exception):
    """Base class; exit_code is what the CLI returns for it"""

    exit_code = 2


class ParseError(LinecheckError):
    """Malformed input row"""

    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class ValidationError(LinecheckError):
    """A domain invariant was violated"""

    def __init__(self, message, game_id=None):
        self.game_id = game_id
        prefix = f"game {game_id}: " if game_id is not None else ""
        super().__init__(f"{prefix}{message}")


class EmptyDataset(LinecheckError):
    pass


class InvalidOdds(LinecheckError):
    pass


class NoQuote(LinecheckError):
    pass


class MissingSpread(LinecheckError):
    pass


class EmptySamples(LinecheckError):
    pass


class DegenerateSamples(LinecheckError):
    pass


class MissingLeague(LinecheckError):
    pass


class InvalidSpec(LinecheckError):
    pass


class InvalidGrid(LinecheckError):
    pass


class ReplayMismatch(LinecheckError):
    """Replayed outputs differ from the manifest digests"""

    exit_code = 1
