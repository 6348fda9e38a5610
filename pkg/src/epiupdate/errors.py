"""Exception types shared across the package."""


class EpiupdateError(Exception):
    """Base class for all errors raised by this package."""


class LocalityError(EpiupdateError):
    """An agent's relation identifies worlds that disagree on the agent's own atoms."""


class ModelCapError(EpiupdateError):
    """A product would exceed the configured world cap (EPIUPDATE_MAX_WORLDS)."""


class EmptyModelError(EpiupdateError):
    """A pointed query was made against a model with no worlds."""


class UnknownNameError(EpiupdateError):
    """A referenced agent, atom, world, pattern or action model does not exist."""


class FormulaSyntaxError(EpiupdateError):
    """Formula text does not conform to the grammar."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
