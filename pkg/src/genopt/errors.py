class GenoptError(Exception):
    """Base class for library errors."""


class StructuralError(GenoptError, ValueError):
    """Shapes or lengths do not line up (chromosome length, site, index)."""


class DomainError(GenoptError, ValueError):
    """A value lies outside the domain an operation accepts."""


class StateError(GenoptError, RuntimeError):
    """An object is not in the state the operation needs (e.g. unevaluated)."""


class UnsupportedConfiguration(GenoptError, ValueError):
    """The requested combination of options is not supported."""


class EvaluationError(GenoptError, RuntimeError):
    """A landscape evaluation failed; carries the generation it failed at."""

    def __init__(self, message, generation=None):
        super().__init__(message)
        self.generation = generation
