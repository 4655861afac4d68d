"""Exception hierarchy shared by every llskit module."""


class LLSError(Exception):
    """Base class for all llskit errors."""


class InputError(LLSError, ValueError):
    """Malformed or structurally invalid input (bad ids, schema violations)."""

    code = "E_INPUT"

    def __init__(self, message, pointer=None):
        super().__init__(message)
        self.pointer = pointer


class InvariantError(InputError):
    """A value violates a mathematical invariant (e.g. md(Y) + md(Y^c) != d)."""

    code = "E_INVARIANT"


class NotCompactTypeError(InputError):
    """The graph is not a tree."""

    code = "E_NOT_TREE"


class AutomorphismError(InputError):
    """A proposed permutation is not an automorphism of the graph."""

    code = "E_AUTOMORPHISM"


class UnsupportedConfiguration(LLSError):
    """Valid input outside the supported mathematical regime."""


class InsufficientFamily(LLSError):
    """No sufficient collection of uniformly concentrated multidegrees exists."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class SiteError(LLSError):
    """Finite site data is inconsistent (composition, coverings, fiber products)."""


class NotFunctorialError(LLSError):
    """A presheaf does not respect identities or composition."""


class HypothesisError(LLSError):
    """A proposition's hypotheses fail; ``clause`` names which one."""

    def __init__(self, message, clause):
        super().__init__(message)
        self.clause = clause


class CocycleError(LLSError):
    """A descent datum violates the cocycle condition."""

    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


class GroupActionError(LLSError):
    """Input is not a group or not a group action."""


class JSONFormatError(InputError):
    """The input is not valid JSON."""

    code = "E_JSON"


class SchemaError(InputError):
    """JSON is well formed but does not have the expected shape."""

    code = "E_SCHEMA"
