"""Exception types shared across the engine."""


class BishopError(Exception):
    """Base class for engine errors."""


class GenerationError(BishopError):
    """Scene placement failed for the given seed/parameter combination."""


class ObjectNotFoundError(BishopError, KeyError):
    """An object id is absent from the scene."""


class EmptyRegionError(BishopError):
    """A vision feature was requested for an object that owns no pixels."""


class UndefinedDirectionError(BishopError):
    """No spatial direction exists between two coincident regions."""


class LexiconError(BishopError):
    """Lexicon document is malformed or inconsistent."""


class ColourModelError(BishopError):
    """Colour model fitting failed (too few or degenerate samples)."""


class ComposeError(BishopError):
    """A semantic composer could not produce a concept; the rule fails."""


class AnaphoraUnavailableError(ComposeError):
    """No object has been removed yet, so there is nothing to refer back to."""


class CorpusError(BishopError):
    """Evaluation corpus is malformed or empty."""
